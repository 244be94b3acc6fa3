#include "prudent/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "prudent/errors.hpp"
#include "prudent/fourier.hpp"
#include "prudent/version.hpp"

namespace prudent {

// ---------------------------------------------------------------- Philox

Philox4x32::Block Philox4x32::bijection(Block ctr, Key key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

std::uint32_t CounterStream::next() {
  if (used_ == 4) {
    buf_ = Philox4x32::bijection({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                  static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                                 key_);
    ++block_;
    used_ = 0;
  }
  return buf_[static_cast<std::size_t>(used_++)];
}

std::uint32_t CounterStream::below(std::uint32_t bound) {
  require(bound > 0, "empty range");
  // Largest multiple of bound representable in 32 bits.
  const std::uint64_t limit = (std::uint64_t{1} << 32) - ((std::uint64_t{1} << 32) % bound);
  for (;;) {
    const std::uint32_t r = next();
    if (r < limit) return r % bound;
  }
}

// ---------------------------------------------------------------- config

void SamplerConfig::validate() const {
  require(dim >= 1 && dim <= kMaxDim, "dimension out of range");
  require(lambda >= 0 && lambda <= 1, "lambda must lie in [0, 1]");
  require(n >= 0 && n <= 100000, "walk length out of range");
  require(samples >= 1, "samples must be at least 1");
}

nlohmann::ordered_json SamplerConfig::to_json() const {
  nlohmann::ordered_json j;
  j["d"] = dim;
  j["lambda"] = lambda;
  j["n"] = n;
  j["samples"] = samples;
  j["seed"] = seed;
  return j;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

unsigned resolve_workers(unsigned w) { return w ? w : std::max(1u, std::thread::hardware_concurrency()); }

// Runs body(i) for i in [0, count) over a fixed pool; each index is handled
// by exactly one worker so results stored per index do not depend on timing.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body body) {
  workers = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    try {
      for (std::size_t i; (i = cursor.fetch_add(1)) < count;) body(i);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct BatchPlan {
  std::size_t batches;
  std::uint64_t begin(std::size_t b, std::uint64_t total) const { return total * b / batches; }
};

BatchPlan plan_batches(std::uint64_t samples) {
  return {static_cast<std::size_t>(std::min<std::uint64_t>(samples, kMinBatches))};
}

// Mean and standard error of the mean over batch-level estimates.
std::pair<double, double> spread(const std::vector<double>& xs) {
  if (xs.empty()) return {NAN, NAN};
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, NAN};
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()))};
}

// Sorted coordinates of visited sites on each axis-parallel line.
class LineIndex {
 public:
  explicit LineIndex(int dim) : lines_(static_cast<std::size_t>(dim)) {}
  void clear() {
    for (auto& m : lines_) m.clear();
  }
  static Point key(Point p, int axis) {
    p[axis] = 0;
    return p;
  }
  // Earlier sites q with q on the line of p along `axis` and
  // sign * (q[axis] - p[axis]) >= 0.
  long ray(const Point& p, int axis, int sign) const {
    const auto& m = lines_[static_cast<std::size_t>(axis)];
    const auto it = m.find(key(p, axis));
    if (it == m.end()) return 0;
    const auto& v = it->second;
    if (sign > 0) return static_cast<long>(v.end() - std::lower_bound(v.begin(), v.end(), p[axis]));
    return static_cast<long>(std::upper_bound(v.begin(), v.end(), p[axis]) - v.begin());
  }
  void insert(const Point& p) {
    for (int a = 0; a < static_cast<int>(lines_.size()); ++a) {
      auto& v = lines_[static_cast<std::size_t>(a)][key(p, a)];
      v.insert(std::upper_bound(v.begin(), v.end(), p[a]), p[a]);
    }
  }

 private:
  std::vector<std::unordered_map<Point, std::vector<int>, PointHash>> lines_;
};

}  // namespace

std::uint64_t SamplerConfig::hash() const { return fnv1a(to_json().dump()); }

nlohmann::ordered_json EstimateRecord::to_json() const {
  nlohmann::ordered_json j;
  j["estimate"] = estimate;
  j["standard_error"] = std::isfinite(standard_error) ? nlohmann::ordered_json(standard_error) : nlohmann::ordered_json();
  j["effective_sample_size"] = effective_sample_size;
  j["seed"] = seed;
  j["config_hash"] = config_hash;
  return j;
}

nlohmann::ordered_json RosenbluthResult::to_json() const {
  nlohmann::ordered_json j;
  j["config"] = config.to_json();
  j["k"] = k;
  j["batches"] = batches;
  j["c_n"] = c_n.to_json();
  j["mean_square"] = mean_square.to_json();
  j["char_ratio"] = char_ratio.to_json();
  j["zero_weight"] = zero_weight;
  return j;
}

// ---------------------------------------------------------------- Rosenbluth

RosenbluthResult rosenbluth_estimate(const SamplerConfig& cfg, std::span<const double> k_in) {
  cfg.validate();
  const int d = cfg.dim;
  std::vector<double> k(k_in.begin(), k_in.end());
  if (k.empty()) {
    k.assign(static_cast<std::size_t>(d), 0.0);
    k[0] = 1.0;
  }
  require(static_cast<int>(k.size()) == d, "wave vector dimension mismatch");
  const double scale = std::pow(2.0 * d, cfg.n);
  const double keep = 1.0 - cfg.lambda;
  const double root_n = cfg.n > 0 ? std::sqrt(static_cast<double>(cfg.n)) : 1.0;

  const BatchPlan plan = plan_batches(cfg.samples);
  struct Acc {
    double w = 0, w2 = 0, wr2 = 0, wcos = 0;
  };
  std::vector<Acc> acc(plan.batches);

  parallel_for(plan.batches, cfg.workers, [&](std::size_t b) {
    LineIndex lines(d);
    Acc a;
    for (std::uint64_t i = plan.begin(b, cfg.samples); i < plan.begin(b + 1, cfg.samples); ++i) {
      CounterStream rng(cfg.seed, i);
      lines.clear();
      Point x(d);
      lines.insert(x);
      long V = 0;
      bool dead = false;
      for (int t = 1; t <= cfg.n; ++t) {
        const UnitStep s = UnitStep::from_code(static_cast<int>(rng.below(static_cast<std::uint32_t>(2 * d))));
        x[s.axis] += s.sign;
        V += lines.ray(x, s.axis, s.sign);
        if (V > 0 && keep == 0) {
          dead = true;
          break;
        }
        lines.insert(x);
      }
      const double w = dead ? 0.0 : scale * (V ? std::pow(keep, static_cast<double>(V)) : 1.0);
      a.w += w;
      a.w2 += w * w;
      if (w != 0) {
        double phase = 0;
        for (int j = 0; j < d; ++j) phase += k[static_cast<std::size_t>(j)] * x[j];
        a.wr2 += w * x.norm2();
        a.wcos += w * std::cos(phase / root_n);
      }
    }
    acc[b] = a;
  });

  RosenbluthResult out;
  out.config = cfg;
  out.k = k;
  out.batches = static_cast<int>(plan.batches);
  Acc total;
  std::vector<double> c_batches, r2_batches, cos_batches;
  for (std::size_t b = 0; b < plan.batches; ++b) {
    const Acc& a = acc[b];
    total.w += a.w;
    total.w2 += a.w2;
    total.wr2 += a.wr2;
    total.wcos += a.wcos;
    const auto size = plan.begin(b + 1, cfg.samples) - plan.begin(b, cfg.samples);
    c_batches.push_back(a.w / static_cast<double>(size));
    if (a.w > 0) {
      r2_batches.push_back(a.wr2 / a.w);
      cos_batches.push_back(a.wcos / a.w);
    }
  }
  const double ess = total.w2 > 0 ? total.w * total.w / total.w2 : 0.0;
  auto record = [&](double est, double se) {
    return EstimateRecord{est, se, ess, cfg.seed, cfg.hash()};
  };
  out.c_n = record(total.w / static_cast<double>(cfg.samples), spread(c_batches).second);
  out.zero_weight = total.w == 0;
  if (out.zero_weight) {
    out.mean_square = record(NAN, NAN);
    out.char_ratio = record(NAN, NAN);
  } else {
    out.mean_square = record(total.wr2 / total.w, spread(r2_batches).second);
    out.char_ratio = record(total.wcos / total.w, spread(cos_batches).second);
  }
  return out;
}

Rational rosenbluth_exhaustive(int n, int dim, const Rational& lambda) {
  check_lambda(lambda);
  require(dim >= 1 && dim <= kMaxDim, "dimension out of range");
  require(n >= 0 && n <= 12, "exhaustive mode supports n <= 12");
  const int q = 2 * dim;
  BigInt count = 1;
  for (int i = 0; i < n; ++i) count *= q;
  require(count <= 100'000'000, "exhaustive mode limited to 1e8 sequences");
  const Rational scale = pow(Rational(q), static_cast<unsigned>(n));
  Rational sum = 0;
  std::vector<int> codes(static_cast<std::size_t>(n), 0);
  for (;;) {
    sum += scale * phi_weight(Walk::from_step_codes(dim, codes), lambda);
    int i = n - 1;
    while (i >= 0 && codes[static_cast<std::size_t>(i)] == q - 1) codes[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
    ++codes[static_cast<std::size_t>(i)];
  }
  Rational mean = sum / Rational(count);
  mean.canonicalize();
  return mean;
}

// ---------------------------------------------------------------- mutual seeing

std::vector<Rational> mutual_seeing_exact(int dim, int T) {
  require(T >= 1, "T must be at least 1");
  if (T > kAxisMassMaxN) throw BudgetError("mutual-seeing horizon T exceeds " + std::to_string(kAxisMassMaxN));
  const auto a = axis_mass_sequence(T, dim);
  std::vector<Rational> S(static_cast<std::size_t>(T) + 1);
  S[0] = 0;
  for (int t = 1; t <= T; ++t) {
    S[static_cast<std::size_t>(t)] = S[static_cast<std::size_t>(t) - 1] + Rational(t, 2) * a[static_cast<std::size_t>(t)];
    S[static_cast<std::size_t>(t)].canonicalize();
  }
  return S;
}

EstimateRecord mutual_seeing_mc(int dim, int T, std::uint64_t samples, std::uint64_t seed, unsigned workers) {
  require(dim >= 1 && dim <= kMaxDim, "dimension out of range");
  require(T >= 1 && T <= 4096, "T out of range for the two-walk simulation");
  require(samples >= 1, "samples must be at least 1");
  const BatchPlan plan = plan_batches(samples);
  std::vector<std::pair<double, double>> acc(plan.batches);
  parallel_for(plan.batches, workers, [&](std::size_t b) {
    std::vector<Point> x1(static_cast<std::size_t>(T) + 1, Point(dim)), x2 = x1;
    std::vector<UnitStep> steps(static_cast<std::size_t>(T) + 1);
    double sum = 0, sum2 = 0;
    for (std::uint64_t i = plan.begin(b, samples); i < plan.begin(b + 1, samples); ++i) {
      CounterStream rng(seed, i);
      for (int t = 1; t <= T; ++t) {
        steps[static_cast<std::size_t>(t)] = UnitStep::from_code(static_cast<int>(rng.below(static_cast<std::uint32_t>(2 * dim))));
        x1[static_cast<std::size_t>(t)] = x1[static_cast<std::size_t>(t) - 1];
        x1[static_cast<std::size_t>(t)][steps[static_cast<std::size_t>(t)].axis] += steps[static_cast<std::size_t>(t)].sign;
      }
      for (int s = 1; s <= T; ++s) {
        const UnitStep e = UnitStep::from_code(static_cast<int>(rng.below(static_cast<std::uint32_t>(2 * dim))));
        x2[static_cast<std::size_t>(s)] = x2[static_cast<std::size_t>(s) - 1];
        x2[static_cast<std::size_t>(s)][e.axis] += e.sign;
      }
      long count = 0;
      for (int t = 1; t <= T; ++t) {
        const UnitStep e = steps[static_cast<std::size_t>(t)];
        const Point& p = x1[static_cast<std::size_t>(t)];
        for (int s = 1; s + t - 1 <= T; ++s) {
          const Point& q = x2[static_cast<std::size_t>(s)];
          bool on_line = true;
          for (int j = 0; j < dim && on_line; ++j)
            if (j != e.axis && q[j] != p[j]) on_line = false;
          if (on_line && e.sign * (q[e.axis] - p[e.axis]) >= 0) ++count;
        }
      }
      sum += static_cast<double>(count);
      sum2 += static_cast<double>(count) * static_cast<double>(count);
    }
    acc[b] = {sum, sum2};
  });
  double total = 0, total2 = 0;
  std::vector<double> means;
  for (std::size_t b = 0; b < plan.batches; ++b) {
    total += acc[b].first;
    total2 += acc[b].second;
    means.push_back(acc[b].first / static_cast<double>(plan.begin(b + 1, samples) - plan.begin(b, samples)));
  }
  nlohmann::ordered_json cfg{{"d", dim}, {"T", T}, {"samples", samples}, {"seed", seed}};
  return EstimateRecord{total / static_cast<double>(samples), spread(means).second,
                        total2 > 0 ? total * total / total2 : 0.0, seed, fnv1a(cfg.dump())};
}

// ---------------------------------------------------------------- exponent fit

Report diffusive_exponent(std::span<const MomentPoint> points, double band_lo, double band_hi) {
  require(points.size() >= 4, "exponent fit needs at least 4 values of n");
  Report rep;
  rep.operation = "moments";
  bool weighted = true;
  for (const auto& p : points) {
    require(p.n >= 1, "exponent fit needs n >= 1");
    require(std::isfinite(p.mean_square) && p.mean_square > 0, "degenerate fit: nonpositive mean-square displacement");
    if (!(p.standard_error > 0)) weighted = false;
  }
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : points) {
    const double x = std::log(static_cast<double>(p.n)), y = std::log(p.mean_square);
    const double sigma = p.standard_error / p.mean_square;
    const double w = weighted ? 1 / (sigma * sigma) : 1.0;
    sw += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
  }
  const double det = sw * sxx - sx * sx;
  if (!(det > 0)) throw ContractError("degenerate fit: all n equal");
  const double slope = (sw * sxy - sx * sy) / det;
  const double intercept = (sy - slope * sx) / sw;
  double se;
  if (weighted) {
    se = std::sqrt(sw / det);
  } else {
    double rss = 0;
    for (const auto& p : points) {
      const double r = std::log(p.mean_square) - intercept - slope * std::log(static_cast<double>(p.n));
      rss += r * r;
    }
    const double m = static_cast<double>(points.size());
    se = std::sqrt(rss / (m - 2) / (sxx - sx * sx / sw));
  }
  auto rows = nlohmann::ordered_json::array();
  for (const auto& p : points) rows.push_back({{"n", p.n}, {"mean_square", p.mean_square}, {"standard_error", p.standard_error}});
  rep.inputs["band"] = {band_lo, band_hi};
  rep.inputs["weighted"] = weighted;
  rep.values["points"] = std::move(rows);
  rep.values["slope"] = slope;
  rep.values["intercept"] = intercept;
  rep.values["slope_standard_error"] = se;
  rep.values["slope_ci95"] = {slope - 1.96 * se, slope + 1.96 * se};
  rep.pass = slope >= band_lo && slope <= band_hi;
  return rep;
}

std::vector<MomentPoint> moments_from_table(const CoeffTable& table, std::span<const int> n_list) {
  std::vector<MomentPoint> out;
  const std::vector<double> k(static_cast<std::size_t>(table.dim()), 0.0);
  for (int n : n_list) {
    const auto st = endpoint_statistics(table, n, 2, k);
    out.push_back({n, to_double(*st.mean_square), 0.0});
  }
  return out;
}

std::vector<MomentPoint> moments_from_sampling(const SamplerConfig& base, std::span<const int> n_list) {
  std::vector<MomentPoint> out;
  for (int n : n_list) {
    SamplerConfig cfg = base;
    cfg.n = n;
    const auto r = rosenbluth_estimate(cfg);
    if (r.zero_weight) throw ContractError("every sample at n = " + std::to_string(n) + " had zero weight");
    out.push_back({n, r.mean_square.estimate, r.mean_square.standard_error});
  }
  return out;
}

}  // namespace prudent
