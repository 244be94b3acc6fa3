#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cache.hpp"
#include "prudent/errors.hpp"
#include "prudent/fourier.hpp"
#include "prudent/laces.hpp"
#include "prudent/montecarlo.hpp"
#include "prudent/series.hpp"
#include "prudent/version.hpp"
#include "prudent/walks.hpp"

namespace prudent::cli {

const std::vector<std::string> kCommands = {"enumerate", "pi",        "verify-identity", "bubble",        "displacement",
                                            "mu",        "k-constant", "bound-audit",    "fourier",       "bootstrap",
                                            "axis-mass", "ucd-heuristic", "sample",      "moments"};

namespace {

template <class T>
nlohmann::ordered_json opt(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json();
}

std::string fmt_double(double v) {
  // nlohmann's shortest round-trip rendering keeps JSON and CSV consistent.
  return nlohmann::json(v).dump();
}

Rational lambda_of(const RunConfig& c) {
  const Rational l = parse_rational(c.lambda);
  check_lambda(l);
  return l;
}

double z_of(const RunConfig& c) {
  require(c.z.has_value(), "--z is required for " + c.command);
  return to_double(parse_rational(*c.z));
}

EnumerationOptions enum_opts(const RunConfig& c) {
  EnumerationOptions o;
  o.workers = c.workers;
  return o;
}

void require_k(const RunConfig& c) {
  require(static_cast<int>(c.k.size()) == c.d, "--k needs exactly d components");
}

CoeffTable load_table(const RunConfig& c, const Cache& cache) {
  const Rational l = lambda_of(c);
  nlohmann::ordered_json key{{"kind", "coeff_table"}, {"d", c.d}, {"lambda", to_string(l)}, {"n_max", c.n_max}};
  const auto h = Cache::key_hash(key);
  if (auto e = cache.get(h)) return CoeffTable::from_json(e->payload);
  auto t = build_coeff_table(c.n_max, c.d, l, enum_opts(c));
  cache.put(h, t.to_json());
  return t;
}

PiTable load_pi(const RunConfig& c, const Cache& cache, int N_max) {
  const Rational l = lambda_of(c);
  nlohmann::ordered_json key{{"kind", "pi_table"}, {"d", c.d}, {"lambda", to_string(l)}, {"n_max", c.n_max}, {"N_max", N_max}};
  const auto h = Cache::key_hash(key);
  if (auto e = cache.get(h)) return PiTable::from_json(e->payload);
  auto t = pi_table_direct(c.n_max, N_max, c.d, l, enum_opts(c));
  cache.put(h, t.to_json());
  return t;
}

CsvTable point_rows(int dim, const std::string& value_name, const std::vector<std::map<Point, Rational>>& rows,
                    int first_n = 0) {
  CsvTable t;
  t.header.push_back("n");
  for (int i = 0; i < dim; ++i) t.header.push_back("x" + std::to_string(i + 1));
  t.header.push_back(value_name);
  for (std::size_t n = static_cast<std::size_t>(first_n); n < rows.size(); ++n)
    for (const auto& [x, v] : rows[n]) {
      if (v == 0) continue;
      std::vector<std::string> r{std::to_string(n)};
      for (int i = 0; i < dim; ++i) r.push_back(std::to_string(x[i]));
      r.push_back(to_string(v));
      t.rows.push_back(std::move(r));
    }
  return t;
}

nlohmann::ordered_json point_json(const Point& p) {
  auto a = nlohmann::ordered_json::array();
  for (int i = 0; i < p.dim(); ++i) a.push_back(p[i]);
  return a;
}

std::vector<int> default_n_list(const RunConfig& c, std::vector<int> fallback) {
  return c.n_list.empty() ? fallback : c.n_list;
}

// ---------------------------------------------------------------- commands

RunResult cmd_enumerate(const RunConfig& c, const Cache& cache) {
  const auto t = load_table(c, cache);
  Report rep;
  rep.operation = "enumerate";
  auto totals = nlohmann::ordered_json::array();
  for (const auto& v : t.totals()) totals.push_back(to_string(v));
  rep.values["totals"] = totals;
  rep.values["table"] = t.to_json();
  std::vector<std::map<Point, Rational>> rows;
  for (int n = 0; n <= t.n_max(); ++n) rows.push_back(t.row(n));
  return {rep, point_rows(c.d, "c", rows)};
}

RunResult cmd_pi(const RunConfig& c, const Cache& cache) {
  Report rep;
  rep.operation = "pi";
  PiCoefficients pi;
  if (c.method == "direct") {
    const auto p = load_pi(c, cache, c.N_max.value_or(c.n_max));
    pi = p.signed_totals();
    rep.values["complete_in_N"] = p.complete_in_N();
    rep.values["table"] = p.to_json();
  } else if (c.method == "inversion") {
    pi = pi_table_via_inversion(load_table(c, cache));
  } else {
    throw ContractError("--method must be direct or inversion");
  }
  auto totals = nlohmann::ordered_json::array();
  for (const auto& row : pi) {
    Rational s = 0;
    for (const auto& [x, v] : row) s += v;
    totals.push_back(to_string(s));
  }
  rep.values["signed_totals"] = totals;
  rep.inputs["method"] = c.method;
  return {rep, point_rows(c.d, "pi", pi)};
}

RunResult cmd_verify(const RunConfig& c, const Cache& cache) {
  const auto t = load_table(c, cache);
  const auto p = load_pi(c, cache, c.N_max.value_or(c.n_max));
  return {verify_expansion_identity(t, p), std::nullopt};
}

RunResult cmd_bubble(const RunConfig& c, const Cache& cache) {
  const auto t = load_table(c, cache);
  Report rep;
  rep.operation = "bubble";
  rep.inputs["z"] = opt(c.z);
  if (c.exact) {
    require(c.z.has_value(), "--z is required for bubble");
    const auto b = bubble_truncated_exact(t, parse_rational(*c.z), c.n_max);
    rep.values["B"] = to_string(b.value);
    rep.values["B_double"] = to_double(b.value);
    rep.witness = point_json(b.y_witness);
  } else {
    const auto b = bubble_truncated(SeriesQuery(t, z_of(c)));
    rep.values["B"] = b.value;
    rep.values["B_times_d"] = b.value * c.d;
    rep.witness = point_json(b.y_witness);
    rep.tail_allowance = b.tail_allowance;
  }
  return {rep, std::nullopt};
}

RunResult cmd_displacement(const RunConfig& c, const Cache& cache) {
  require_k(c);
  const auto t = load_table(c, cache);
  const auto b = displacement_diagram(SeriesQuery(t, z_of(c)), c.k);
  double k2 = 0;
  for (double v : c.k) k2 += v * v;
  Report rep;
  rep.operation = "displacement";
  rep.inputs["z"] = opt(c.z);
  rep.inputs["k"] = c.k;
  rep.values["value"] = b.value;
  rep.values["value_over_k2"] = k2 > 0 ? nlohmann::ordered_json(b.value / k2) : nlohmann::ordered_json();
  rep.witness = point_json(b.y_witness);
  rep.tail_allowance = b.tail_allowance;
  return {rep, std::nullopt};
}

RunResult cmd_mu(const RunConfig& c, const Cache& cache) {
  const auto t = load_table(c, cache);
  const auto m = mu_estimate(t);
  Report rep;
  rep.operation = "mu";
  rep.values["ratios"] = m.ratios;
  rep.values["extrapolated"] = m.extrapolated;
  const double lo = c.d - 1, hi = 2 * c.d - 1;
  rep.values["interval"] = {lo, hi};
  if (t.lambda() == 1) {
    // c_1 / c_0 = 2d counts the unconstrained first step; the interval
    // applies from c_2 / c_1 on.
    bool ok = m.extrapolated >= lo && m.extrapolated <= hi;
    for (std::size_t i = 1; i < m.ratios.size(); ++i) ok = ok && m.ratios[i] >= lo && m.ratios[i] <= hi;
    rep.pass = ok;
  } else {
    rep.warnings.push_back("interval check applies to lambda = 1 only");
  }
  CsvTable csv{{"n", "ratio"}, {}};
  for (std::size_t i = 0; i < m.ratios.size(); ++i) csv.rows.push_back({std::to_string(i + 1), fmt_double(m.ratios[i])});
  return {rep, csv};
}

RunResult cmd_k_constant(const RunConfig& c, const Cache& cache) {
  const auto t = load_table(c, cache);
  const double z = z_of(c);
  const auto k = k_constant_estimate(pi_table_via_inversion(t), c.d, z);
  Report rep;
  rep.operation = "k-constant";
  rep.inputs["z"] = opt(c.z);
  rep.values["K"] = k.K;
  rep.values["A0"] = k.A0;
  rep.values["Kz"] = k.Kz;
  rep.values["B_factor"] = k.B_factor;
  return {rep, std::nullopt};
}

RunResult cmd_bound_audit(const RunConfig& c, const Cache& cache) {
  const auto t = load_table(c, cache);
  const SeriesQuery q(t, z_of(c));
  std::vector<int> orders = c.N_max ? std::vector<int>{*c.N_max} : std::vector<int>{1, 2};
  const auto p = load_pi(c, cache, *std::max_element(orders.begin(), orders.end()));
  Report rep;
  rep.operation = "bound-audit";
  rep.inputs["z"] = opt(c.z);
  for (int N : orders) {
    const auto r = bound_audit(q, p, N);
    rep.values["N" + std::to_string(N)] = r.to_json();
    rep.pass = rep.pass && r.pass;
    for (const auto& w : r.warnings) rep.warnings.push_back(w);
  }
  return {rep, std::nullopt};
}

RunResult cmd_fourier(const RunConfig& c, const Cache& cache) {
  const auto t = load_table(c, cache);
  const SeriesQuery q(t, z_of(c));
  const FourierGrid grid(c.d, c.grid.value_or(FourierGrid::default_resolution(c.d)));
  const auto g = g_hat_grid(q, grid);
  Report rep;
  rep.operation = "fourier";
  rep.inputs["z"] = opt(c.z);
  rep.inputs["grid"] = grid.resolution();
  const auto [lo, hi] = std::minmax_element(g.values.begin(), g.values.end());
  rep.values["G_hat_min"] = *lo;
  rep.values["G_hat_max"] = *hi;
  rep.tail_allowance = q.tail_bound();

  CsvTable csv;
  for (int i = 0; i < c.d; ++i) csv.header.push_back("k" + std::to_string(i + 1));
  csv.header.push_back("G_hat");
  if (c.R) {
    csv.header.push_back("smoothed_star");
    rep.inputs["R"] = *c.R;
    auto axis = nlohmann::ordered_json::array();
    for (int m = 0; m < grid.resolution(); ++m) {
      const auto a = smoothed_axis_transform(*c.R, c.d, grid.coordinate(m));
      axis.push_back({{"k", grid.coordinate(m)},
                      {"direct_sum", a.value},
                      {"closed_form_stated", a.closed_form_stated},
                      {"closed_form_poisson", a.closed_form_poisson}});
    }
    rep.values["axis_transform"] = axis;
  }
  double smin = INFINITY;
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto k = grid.point(f);
    std::vector<std::string> row;
    for (double v : k) row.push_back(fmt_double(v));
    row.push_back(fmt_double(g.values[f]));
    if (c.R) {
      const double s = smoothed_star_transform(*c.R, k);
      smin = std::min(smin, s);
      row.push_back(fmt_double(s));
    }
    csv.rows.push_back(std::move(row));
  }
  if (c.R) {
    rep.values["smoothed_star_min"] = smin;
    rep.pass = smin > 0;
  }
  return {rep, csv};
}

RunResult cmd_bootstrap(const RunConfig& c, const Cache& cache) {
  const auto t = load_table(c, cache);
  const SeriesQuery q(t, z_of(c));
  const FourierGrid grid(c.d, c.grid.value_or(FourierGrid::default_resolution(c.d)));
  const FourierGrid pairs(c.d, c.pair_grid.value_or(FourierGrid::default_pair_resolution(c.d)));
  const auto b = bootstrap_functions(q, grid, pairs);
  Report rep;
  rep.operation = "bootstrap";
  rep.inputs["z"] = opt(c.z);
  rep.inputs["grid"] = grid.resolution();
  rep.inputs["pair_grid"] = pairs.resolution();
  rep.values["f1"] = b.f1;
  rep.values["f2"] = b.f2;
  rep.values["f3"] = b.f3;
  rep.values["f"] = b.f;
  rep.values["p_of_z"] = b.p_of_z;
  rep.values["chi"] = b.chi;
  rep.tail_allowance = q.tail_bound();
  return {rep, std::nullopt};
}

RunResult cmd_axis_mass(const RunConfig& c) {
  const auto ns = default_n_list(c, {16, 32, 64, 128, 256});
  const double band = c.band.empty() ? 4.0 : c.band.front();
  auto rep = axis_mass_scaling(ns, c.d, band);
  CsvTable csv{{"n", "mass", "scaled"}, {}};
  for (const auto& r : rep.values["rows"])
    csv.rows.push_back({std::to_string(r["n"].get<int>()), fmt_double(r["mass"].get<double>()),
                        fmt_double(r["scaled"].get<double>())});
  return {rep, csv};
}

RunResult cmd_ucd(const RunConfig& c) {
  require(c.T >= 8, "--T must be at least 8");
  const auto S = mutual_seeing_exact(c.d, c.T);
  Report rep;
  rep.operation = "ucd-heuristic";
  rep.inputs["d"] = c.d;
  rep.inputs["T"] = c.T;
  std::vector<int> marks;
  for (int t = 1; t <= c.T; t *= 2) marks.push_back(t);
  auto doublings = nlohmann::ordered_json::array();
  std::vector<double> inc, ratio, base;
  for (std::size_t i = 1; i < marks.size(); ++i) {
    const double a = to_double(S[static_cast<std::size_t>(marks[i - 1])]);
    const double b = to_double(S[static_cast<std::size_t>(marks[i])]);
    inc.push_back(b - a);
    ratio.push_back(b / a);
    base.push_back(a);
    doublings.push_back({{"T", marks[i]}, {"S", b}, {"increment", b - a}, {"ratio", b / a}});
  }
  rep.values["S_1"] = to_string(S[1]);
  rep.values["doublings"] = doublings;
  // Growth class over the last doublings: summable (d > 5), logarithmic
  // (d = 5), or power growth (d < 5).
  const std::size_t m = inc.size();
  if (m >= 3) {
    const double last_rel = inc[m - 1] / base[m - 1];
    const auto [imin, imax] = std::minmax_element(inc.end() - 3, inc.end());
    const double spread = (*imax - *imin) / *imin;
    rep.values["last_relative_increment"] = last_rel;
    rep.values["last_ratio"] = ratio[m - 1];
    rep.values["increment_spread_3"] = spread;
    if (c.d >= 6) rep.pass = last_rel < 0.02;
    else if (c.d == 5) rep.pass = spread <= 0.30;
    else rep.pass = ratio[m - 1] > 1.25;
  } else {
    rep.warnings.push_back("fewer than three doublings; no growth classification");
  }
  CsvTable csv{{"T", "S"}, {}};
  for (int t = 1; t <= c.T; ++t) csv.rows.push_back({std::to_string(t), fmt_double(to_double(S[static_cast<std::size_t>(t)]))});
  return {rep, csv};
}

SamplerConfig sampler(const RunConfig& c, int n) {
  SamplerConfig s;
  s.dim = c.d;
  s.lambda = to_double(lambda_of(c));
  s.n = n;
  s.samples = c.samples;
  s.seed = c.seed;
  s.workers = c.workers;
  return s;
}

RunResult cmd_sample(const RunConfig& c) {
  const auto r = rosenbluth_estimate(sampler(c, c.n_max), c.k);
  Report rep;
  rep.operation = "sample";
  rep.values = r.to_json();
  if (r.zero_weight) rep.warnings.push_back("all sampled walks had zero weight");
  return {rep, std::nullopt};
}

RunResult cmd_moments(const RunConfig& c, const Cache& cache) {
  std::vector<MomentPoint> pts;
  const double lo = c.band.size() >= 1 ? c.band[0] : 0.9, hi = c.band.size() >= 2 ? c.band[1] : 1.1;
  if (c.source == "exact") {
    const auto ns = default_n_list(c, {});
    require(!ns.empty(), "--n is required for moments");
    RunConfig tc = c;
    tc.n_max = *std::max_element(ns.begin(), ns.end());
    pts = moments_from_table(load_table(tc, cache), ns);
  } else if (c.source == "mc") {
    const auto ns = default_n_list(c, {});
    require(!ns.empty(), "--n is required for moments");
    pts = moments_from_sampling(sampler(c, 1), ns);
  } else {
    throw ContractError("--source must be exact or mc");
  }
  auto rep = diffusive_exponent(pts, lo, hi);
  rep.inputs["source"] = c.source;
  CsvTable csv{{"n", "moment", "stderr"}, {}};
  for (const auto& p : pts) csv.rows.push_back({std::to_string(p.n), fmt_double(p.mean_square), fmt_double(p.standard_error)});
  return {rep, csv};
}

void flatten(const nlohmann::ordered_json& j, const std::string& path, CsvTable& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "." + std::to_string(i), out);
  } else {
    out.rows.push_back({path, j.is_string() ? j.get<std::string>() : j.dump()});
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char ch : s) {
    if (ch == '"') o += '"';
    o += ch;
  }
  return o + "\"";
}

void write_file_atomic(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  const auto tmp = p.parent_path() / ("." + p.filename().string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << text;
    f.close();
    if (!f) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, p);
}

void error_json(std::ostream& err, const std::string& kind, const std::string& reason) {
  err << nlohmann::ordered_json{{"error", kind}, {"reason", reason}}.dump() << "\n";
}

}  // namespace

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["d"] = d;
  j["lambda"] = lambda;
  j["n_max"] = n_max;
  j["N_max"] = opt(N_max);
  j["z"] = opt(z);
  j["k"] = k;
  j["R"] = opt(R);
  j["T"] = T;
  j["samples"] = samples;
  j["seed"] = seed;
  j["n"] = n_list;
  j["grid"] = opt(grid);
  j["pair_grid"] = opt(pair_grid);
  j["method"] = method;
  j["source"] = source;
  j["exact"] = exact;
  j["band"] = band;
  return j;
}

std::string RunConfig::hash() const { return sha256_hex(to_json().dump()); }

std::string CsvTable::render() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_escape(header[i]);
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_escape(r[i]);
    os << "\n";
  }
  return os.str();
}

RunResult execute(const RunConfig& c) {
  require(std::find(kCommands.begin(), kCommands.end(), c.command) != kCommands.end(), "unknown command " + c.command);
  require(c.d >= 1 && c.d <= kMaxDim, "--d out of range");
  require(c.n_max >= 0, "--n-max must be nonnegative");
  const Cache cache = Cache::resolve(c.cache_dir, kCodeVersion);
  static const std::map<std::string, std::function<RunResult(const RunConfig&, const Cache&)>> table = {
      {"enumerate", cmd_enumerate},
      {"pi", cmd_pi},
      {"verify-identity", cmd_verify},
      {"bubble", cmd_bubble},
      {"displacement", cmd_displacement},
      {"mu", cmd_mu},
      {"k-constant", cmd_k_constant},
      {"bound-audit", cmd_bound_audit},
      {"fourier", cmd_fourier},
      {"bootstrap", cmd_bootstrap},
      {"axis-mass", [](const RunConfig& r, const Cache&) { return cmd_axis_mass(r); }},
      {"ucd-heuristic", [](const RunConfig& r, const Cache&) { return cmd_ucd(r); }},
      {"sample", [](const RunConfig& r, const Cache&) { return cmd_sample(r); }},
      {"moments", cmd_moments},
  };
  auto result = table.at(c.command)(c, cache);
  result.report.inputs["config"] = c.to_json();
  result.report.inputs["config_hash"] = c.hash();
  return result;
}

std::string emit_report(const RunResult& result, const RunConfig& cfg, const std::string& format) {
  if (format == "json") return result.report.to_json().dump(2) + "\n";
  if (format == "csv") {
    if (result.table) return result.table->render();
    CsvTable t{{"field", "value"}, {}};
    flatten(result.report.to_json(), "", t);
    return t.render();
  }
  throw ContractError("--format must be json or csv (got " + format + ") for " + cfg.command);
}

int run(const RunConfig& cfg, std::ostream& stdout_sink, std::ostream& err) {
  std::string text;
  bool pass = true;
  try {
    require(cfg.format == "json" || cfg.format == "csv", "--format must be json or csv");
    const auto result = execute(cfg);
    text = emit_report(result, cfg, cfg.format);
    pass = result.report.pass;
  } catch (const ContractError& e) {
    error_json(err, "usage", e.what());
    return kUsage;
  } catch (const BudgetError& e) {
    error_json(err, "budget", e.what());
    return kBudget;
  } catch (const std::exception& e) {
    error_json(err, "io", e.what());
    return kUsage;
  }
  try {
    if (cfg.out.empty()) stdout_sink << text;
    else write_file_atomic(cfg.out, text);
  } catch (const std::exception& e) {
    error_json(err, "io", e.what());
    return kUsage;
  }
  return pass ? kOk : kMathFail;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact enumeration, lace expansion and Monte Carlo for weakly prudent walks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kCodeVersion));
  RunConfig c;

  auto base = [&](CLI::App* s, bool lambda = true) {
    s->add_option("--d", c.d, "lattice dimension")->check(CLI::Range(1, kMaxDim));
    if (lambda) s->add_option("--lambda", c.lambda, "penalty strength, exact \"p/q\" or decimal");
    s->add_option("--workers", c.workers, "worker threads (0 = all cores)");
    s->add_option("--cache-dir", c.cache_dir, std::string("cache directory (env ") + kCacheEnvVar + ")");
    s->add_option("--out", c.out, "output file (default stdout)");
    s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto nmax = [&](CLI::App* s) { s->add_option("--n-max", c.n_max, "walk length horizon"); };
  auto zopt = [&](CLI::App* s) { s->add_option("--z", c.z, "fugacity, \"p/q\" or decimal")->required(); };

  std::map<std::string, CLI::App*> subs;
  auto sub = [&](const std::string& name, const std::string& help) { return subs[name] = app.add_subcommand(name, help); };

  auto* s = sub("enumerate", "exact coefficient table c_n(x)");
  base(s), nmax(s);
  s = sub("pi", "lace-expansion coefficients");
  base(s), nmax(s);
  s->add_option("--N-max", c.N_max, "largest lace size (default n-max)");
  s->add_option("--method", c.method, "direct or inversion")->check(CLI::IsMember({"direct", "inversion"}));
  s = sub("verify-identity", "exact check of the expansion identity");
  base(s), nmax(s);
  s->add_option("--N-max", c.N_max, "largest lace size (default n-max)");
  s = sub("bubble", "truncated bubble diagram");
  base(s), nmax(s), zopt(s);
  s->add_flag("--exact", c.exact, "exact rational evaluation");
  s = sub("displacement", "displacement diagram at wave vector k");
  base(s), nmax(s), zopt(s);
  s->add_option("--k", c.k, "wave vector components")->delimiter(',')->required();
  s = sub("mu", "connective-constant ratios");
  base(s), nmax(s);
  s = sub("k-constant", "diffusion-constant estimator");
  base(s), nmax(s), zopt(s);
  s = sub("bound-audit", "diagram-bound audit for N = 1, 2");
  base(s), nmax(s), zopt(s);
  s->add_option("--N", c.N_max, "audit a single lace size")->check(CLI::Range(1, 2));
  s = sub("fourier", "two-point transform on a grid");
  base(s), nmax(s), zopt(s);
  s->add_option("--grid", c.grid, "points per axis (even)");
  s->add_option("--R", c.R, "smoothing radius for the axis-indicator transform");
  s = sub("bootstrap", "bootstrap functions f1, f2, f3");
  base(s), nmax(s), zopt(s);
  s->add_option("--grid", c.grid, "points per axis for f2 (even)");
  s->add_option("--pair-grid", c.pair_grid, "points per axis for the f3 pair sup (even)");
  s = sub("axis-mass", "on-axis mass of simple random walk");
  base(s, false);
  s->add_option("--n", c.n_list, "walk lengths")->delimiter(',');
  s->add_option("--band", c.band, "allowed max/min ratio");
  s = sub("ucd-heuristic", "exact mutual-seeing partial sums");
  base(s, false);
  s->add_option("--T", c.T, "horizon");
  s = sub("sample", "Rosenbluth estimate of c_n");
  base(s);
  s->add_option("--n", c.n_max, "walk length")->required();
  s->add_option("--samples", c.samples, "sample count");
  s->add_option("--seed", c.seed, "64-bit seed");
  s->add_option("--k", c.k, "wave vector for the characteristic ratio")->delimiter(',');
  s = sub("moments", "mean-square displacement exponent fit");
  base(s);
  s->add_option("--n", c.n_list, "walk lengths")->delimiter(',')->required();
  s->add_option("--source", c.source, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  s->add_option("--samples", c.samples, "samples per n (mc)");
  s->add_option("--seed", c.seed, "64-bit seed (mc)");
  s->add_option("--band", c.band, "slope band lo,hi")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kCodeVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    error_json(err, "usage", e.what());
    return kUsage;
  }
  for (const auto& [name, p] : subs)
    if (p->parsed()) c.command = name;
  return run(c, out, err);
}

}  // namespace prudent::cli
