#include "prudent/laces.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "prudent/errors.hpp"
#include "prudent/version.hpp"
#include "walk_engine.hpp"

namespace prudent {

// ---------------------------------------------------------------- graphs

EdgeGraph::EdgeGraph(int a, int b, std::vector<Edge> edges) : a_(a), b_(b), edges_(std::move(edges)) {
  require(a < b, "edge graph interval needs a < b");
  for (const auto& e : edges_)
    require(a <= e.s && e.s < e.t && e.t <= b,
            "edge {" + std::to_string(e.s) + "," + std::to_string(e.t) + "} outside [" +
                std::to_string(a) + "," + std::to_string(b) + "]");
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool EdgeGraph::contains(const Edge& e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

EdgeGraph EdgeGraph::with(const Edge& e) const {
  auto edges = edges_;
  edges.push_back(e);
  return EdgeGraph(a_, b_, std::move(edges));
}

bool is_connected(const EdgeGraph& g) {
  bool has_a = false, has_b = false;
  for (const auto& e : g.edges()) {
    has_a |= e.s == g.a();
    has_b |= e.t == g.b();
  }
  if (!has_a || !has_b) return false;
  // Every interior c must satisfy s < c < t for some edge: sweep the
  // furthest right end reachable from edges starting left of c.
  int reach = g.a();
  std::size_t i = 0;
  const auto& edges = g.edges();
  for (int c = g.a() + 1; c < g.b(); ++c) {
    while (i < edges.size() && edges[i].s < c) reach = std::max(reach, edges[i++].t);
    if (reach <= c) return false;
  }
  return true;
}

Lace lace_of_graph(const EdgeGraph& g) {
  require(is_connected(g), "lace_of_graph needs a connected graph");
  Lace lace{g.a(), g.b(), {}};
  const auto& edges = g.edges();
  int t = g.a();
  for (const auto& e : edges)
    if (e.s == g.a()) t = std::max(t, e.t);
  lace.edges.push_back({g.a(), t});
  while (t < g.b()) {
    int next_t = t;
    for (const auto& e : edges)
      if (e.s < t) next_t = std::max(next_t, e.t);
    if (next_t <= t) throw ContractError("lace_of_graph: graph is not connected");
    int s = next_t;
    for (const auto& e : edges)
      if (e.t == next_t) s = std::min(s, e.s);
    lace.edges.push_back({s, next_t});
    t = next_t;
  }
  return lace;
}

bool is_lace(const EdgeGraph& g) {
  if (!is_connected(g)) return false;
  return lace_of_graph(g).graph() == g;
}

std::vector<Edge> compatible_edges(const Lace& lace) {
  const EdgeGraph g = lace.graph();
  std::vector<Edge> out;
  for (int t = lace.a + 1; t <= lace.b; ++t)
    for (int s = lace.a; s < t; ++s) {
      const Edge e{s, t};
      if (g.contains(e)) continue;
      if (lace_of_graph(g.with(e)) == lace) out.push_back(e);
    }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void extend_lace(int N, int b, std::vector<Edge>& edges, const std::function<void(const Lace&)>& visitor,
                 int a) {
  const std::size_t i = edges.size();
  const bool last = static_cast<int>(i) + 1 == N;
  int s_lo, s_hi;
  if (i == 0) {
    s_lo = s_hi = a;
  } else if (i == 1) {
    s_lo = a + 1;
    s_hi = edges[0].t - 1;
  } else {
    s_lo = edges[i - 2].t;
    s_hi = edges[i - 1].t - 1;
  }
  const int t_lo = i == 0 ? a + 1 : edges[i - 1].t + 1;
  for (int s = s_lo; s <= s_hi; ++s) {
    if (last) {
      if (t_lo > b) continue;
      edges.push_back({s, b});
      visitor(Lace{a, b, edges});
      edges.pop_back();
    } else {
      for (int t = t_lo; t < b; ++t) {
        edges.push_back({s, t});
        extend_lace(N, b, edges, visitor, a);
        edges.pop_back();
      }
    }
  }
}

}  // namespace

void enumerate_laces(int N, int a, int b, const std::function<void(const Lace&)>& visitor) {
  require(N >= 1, "lace size must be at least 1");
  require(a < b, "lace interval needs a < b");
  std::vector<Edge> edges;
  extend_lace(N, b, edges, visitor, a);
}

long count_laces(int N, int n) {
  long c = 0;
  enumerate_laces(N, 0, n, [&](const Lace&) { ++c; });
  return c;
}

// ---------------------------------------------------------------- K and J

IntervalWeights interval_weights(const Walk& w, int a, int b, const Rational& lambda) {
  check_lambda(lambda);
  require(0 <= a && a <= b && b <= w.length(), "interval [a, b] must lie inside [0, |w|]");
  IntervalWeights out{Rational(1), Rational(1)};
  if (a == b) return out;
  const Rational damp = Rational(1) - lambda;
  long seeing = 0;
  for (int t = a + 1; t <= b; ++t)
    for (int s = a; s < t; ++s) seeing += w.sees_pair(s, t);
  out.K = pow(damp, static_cast<unsigned>(seeing));

  Rational J = 0;
  for (int N = 1; N <= b - a; ++N) {
    enumerate_laces(N, a, b, [&](const Lace& lace) {
      for (const auto& e : lace.edges)
        if (!w.sees_pair(e.s, e.t)) return;
      long compat_seeing = 0;
      for (const auto& e : compatible_edges(lace)) compat_seeing += w.sees_pair(e.s, e.t);
      Rational term = pow(lambda, static_cast<unsigned>(N)) * pow(damp, static_cast<unsigned>(compat_seeing));
      if (N % 2) term = -term;
      J += term;
    });
  }
  out.J = J;
  return out;
}

// ---------------------------------------------------------------- PiTable

PiTable::PiTable(int dim, Rational lambda, int n_max, int N_max, std::map<Key, Rational> entries)
    : dim_(dim), lambda_(std::move(lambda)), n_max_(n_max), N_max_(N_max), entries_(std::move(entries)) {
  require(n_max_ >= 0 && N_max_ >= 1, "bad pi table horizon");
  signed_.assign(static_cast<std::size_t>(n_max_) + 1, {});
  for (const auto& [key, v] : entries_) {
    require(key.n >= 0 && key.n <= n_max_ && key.N >= 1 && key.N <= N_max_, "pi entry outside horizon");
    check_same_dim(key.x, Point(dim_));
    auto& slot = signed_[static_cast<std::size_t>(key.n)][key.x];
    if (key.N % 2)
      slot -= v;
    else
      slot += v;
  }
  for (auto& row : signed_)
    std::erase_if(row, [](const auto& kv) { return kv.second == 0; });
}

Rational PiTable::at(int n, int N, const Point& x) const {
  auto it = entries_.find(Key{n, N, x});
  return it == entries_.end() ? Rational(0) : it->second;
}

nlohmann::ordered_json PiTable::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "pi_table";
  j["d"] = dim_;
  j["lambda"] = to_string(lambda_);
  j["n_max"] = n_max_;
  j["N_max"] = N_max_;
  j["code_version"] = kCodeVersion;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& [key, v] : entries_) {
    auto r = nlohmann::ordered_json::array();
    r.push_back(key.n);
    r.push_back(key.N);
    for (int c : key.x.coords()) r.push_back(c);
    r.push_back(to_string(v));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

PiTable PiTable::from_json(const nlohmann::json& j) {
  require(j.value("kind", "") == "pi_table", "not a pi table document");
  require(j.at("schema").get<int>() == kSchemaVersion, "unsupported pi table schema");
  const int d = j.at("d").get<int>();
  require(d >= 1 && d <= kMaxDim, "bad pi table dimension");
  std::map<Key, Rational> entries;
  for (const auto& r : j.at("rows")) {
    require(r.is_array() && static_cast<int>(r.size()) == d + 3, "bad pi table row");
    Point x(d);
    for (int i = 0; i < d; ++i) x[i] = r[static_cast<std::size_t>(i) + 2].get<int>();
    entries[Key{r[0].get<int>(), r[1].get<int>(), x}] =
        parse_rational(r[static_cast<std::size_t>(d) + 2].get<std::string>());
  }
  return PiTable(d, parse_rational(j.at("lambda").get<std::string>()), j.at("n_max").get<int>(),
                 j.at("N_max").get<int>(), std::move(entries));
}

// ---------------------------------------------------------------- direct pi

namespace {

using EdgeMask = std::uint64_t;

constexpr int edge_index(int s, int t) { return t * (t - 1) / 2 + s; }

struct LaceMask {
  EdgeMask edges;
  EdgeMask compatible;
  int N;
};

/// Walk DFS tracking the set of seeing pairs as an edge bitmask.
class SeeingState {
 public:
  SeeingState(int dim, int max_len) : dim_(dim) {
    coords_.assign(static_cast<std::size_t>(dim), 0);
    coords_.reserve(static_cast<std::size_t>((max_len + 1) * dim));
    masks_.push_back(0);
    new_bits_.push_back(0);
  }

  int depth() const { return static_cast<int>(masks_.size()) - 1; }
  EdgeMask mask() const { return masks_.back(); }
  EdgeMask new_bits() const { return new_bits_.back(); }
  const int* tip() const { return coords_.data() + static_cast<std::size_t>(depth() * dim_); }

  void push(int code) {
    const int axis = code / 2;
    const int sign = (code % 2) ? 1 : -1;
    const std::size_t base = static_cast<std::size_t>(depth() * dim_);
    for (int i = 0; i < dim_; ++i) coords_.push_back(coords_[base + static_cast<std::size_t>(i)]);
    const std::size_t nb = base + static_cast<std::size_t>(dim_);
    coords_[nb + static_cast<std::size_t>(axis)] += sign;
    const int t = depth() + 1;
    EdgeMask bits = 0;
    for (int s = 0; s < t; ++s) {
      const std::size_t sb = static_cast<std::size_t>(s * dim_);
      bool on_ray = true;
      for (int i = 0; i < dim_ && on_ray; ++i) {
        const int diff = coords_[sb + static_cast<std::size_t>(i)] - coords_[nb + static_cast<std::size_t>(i)];
        on_ray = (i == axis) ? diff * sign >= 0 : diff == 0;
      }
      if (on_ray) bits |= EdgeMask{1} << edge_index(s, t);
    }
    masks_.push_back(masks_.back() | bits);
    new_bits_.push_back(bits);
  }

  void pop() {
    masks_.pop_back();
    new_bits_.pop_back();
    coords_.resize(coords_.size() - static_cast<std::size_t>(dim_));
  }

 private:
  int dim_;
  std::vector<int> coords_;
  std::vector<EdgeMask> masks_;
  std::vector<EdgeMask> new_bits_;
};

struct PiKeyHash {
  std::size_t operator()(std::uint64_t k) const noexcept { return std::hash<std::uint64_t>{}(k * 0x9E3779B97F4A7C15ULL); }
};

class PiHistogram {
 public:
  PiHistogram(int N_max, std::int64_t box_size, int max_compat)
      : N_max_(N_max), box_size_(box_size), max_compat_(max_compat) {}

  void add(int n, int N, std::int64_t site, int compat) {
    const std::uint64_t key =
        ((static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(N_max_ + 1) + static_cast<std::uint64_t>(N)) *
             static_cast<std::uint64_t>(box_size_) +
         static_cast<std::uint64_t>(site)) *
            static_cast<std::uint64_t>(max_compat_ + 1) +
        static_cast<std::uint64_t>(compat);
    ++counts_[key];
  }

  void merge_into(std::map<std::uint64_t, std::uint64_t>& out) const {
    for (const auto& [k, c] : counts_) out[k] += c;
  }

  void decode(std::uint64_t key, int& n, int& N, std::int64_t& site, int& compat) const {
    compat = static_cast<int>(key % static_cast<std::uint64_t>(max_compat_ + 1));
    key /= static_cast<std::uint64_t>(max_compat_ + 1);
    site = static_cast<std::int64_t>(key % static_cast<std::uint64_t>(box_size_));
    key /= static_cast<std::uint64_t>(box_size_);
    N = static_cast<int>(key % static_cast<std::uint64_t>(N_max_ + 1));
    n = static_cast<int>(key / static_cast<std::uint64_t>(N_max_ + 1));
  }

 private:
  int N_max_;
  std::int64_t box_size_;
  int max_compat_;
  std::unordered_map<std::uint64_t, std::uint64_t, PiKeyHash> counts_;
};

}  // namespace

PiTable pi_table_direct(int n_max, int N_max, int dim, const Rational& lambda, const EnumerationOptions& opts) {
  require(n_max >= 0 && n_max <= kMaxDirectPiLength,
          "direct pi evaluation supports 0 <= n_max <= " + std::to_string(kMaxDirectPiLength));
  require(N_max >= 1, "N_max must be at least 1");
  require(dim >= 1 && dim <= kMaxDim, "dimension out of range");
  check_lambda(lambda);
  const unsigned workers = opts.workers ? opts.workers : std::max(1u, std::thread::hardware_concurrency());

  // Laces on [0, n] as bitmasks, with their compatible-edge masks.
  std::vector<std::vector<LaceMask>> laces(static_cast<std::size_t>(n_max) + 1);
  std::vector<EdgeMask> from_origin(static_cast<std::size_t>(n_max) + 1, 0);
  for (int n = 1; n <= n_max; ++n) {
    for (int t = 1; t <= n; ++t) from_origin[static_cast<std::size_t>(n)] |= EdgeMask{1} << edge_index(0, t);
    for (int N = 1; N <= std::min(N_max, n); ++N)
      enumerate_laces(N, 0, n, [&](const Lace& lace) {
        LaceMask m{0, 0, N};
        for (const auto& e : lace.edges) m.edges |= EdgeMask{1} << edge_index(e.s, e.t);
        for (const auto& e : compatible_edges(lace)) m.compatible |= EdgeMask{1} << edge_index(e.s, e.t);
        laces[static_cast<std::size_t>(n)].push_back(m);
      });
  }

  detail::Box box(dim, std::max(n_max, 1));
  const int max_compat = n_max * (n_max + 1) / 2;
  detail::NodeBudget shared(opts.node_budget);

  auto visit = [&](const SeeingState& st, PiHistogram& hist) {
    const int n = st.depth();
    if (n == 0 || st.new_bits() == 0) return;
    const EdgeMask S = st.mask();
    if ((S & from_origin[static_cast<std::size_t>(n)]) == 0) return;
    std::int64_t site = 0;
    for (int i = 0; i < dim; ++i) site += (st.tip()[i] + box.radius()) * box.stride(i);
    for (const auto& lm : laces[static_cast<std::size_t>(n)]) {
      if ((lm.edges & ~S) != 0) continue;
      const int compat = std::popcount(lm.compatible & S);
      if (lambda == 1 && compat > 0) continue;
      hist.add(n, lm.N, site, compat);
    }
  };

  // Prefix split as in table construction: all walks, so (2d)^split prefixes.
  int split = 0;
  std::size_t n_prefixes = 1;
  while (split < n_max && n_prefixes < 4 * static_cast<std::size_t>(workers)) {
    ++split;
    n_prefixes *= static_cast<std::size_t>(2 * dim);
  }

  PiHistogram main_hist(N_max, box.size(), max_compat);
  std::vector<std::vector<int>> prefixes;
  {
    SeeingState st(dim, n_max);
    detail::LocalBudget budget(shared);
    std::vector<int> path;
    auto rec = [&](auto&& self) -> void {
      if (st.depth() == split) {
        prefixes.push_back(path);
        return;
      }
      visit(st, main_hist);
      for (int code = 0; code < 2 * dim; ++code) {
        st.push(code);
        budget.charge();
        path.push_back(code);
        self(self);
        path.pop_back();
        st.pop();
      }
    };
    rec(rec);
    budget.flush();
  }

  std::vector<PiHistogram> partial(workers, PiHistogram(N_max, box.size(), max_compat));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&](unsigned id) {
    try {
      detail::LocalBudget budget(shared);
      auto rec = [&](auto&& self, SeeingState& st) -> void {
        visit(st, partial[id]);
        if (st.depth() == n_max) return;
        for (int code = 0; code < 2 * dim; ++code) {
          st.push(code);
          budget.charge();
          self(self, st);
          st.pop();
        }
      };
      for (std::size_t i = next++; i < prefixes.size(); i = next++) {
        SeeingState st(dim, n_max);
        for (int code : prefixes[i]) st.push(code);
        rec(rec, st);
      }
      budget.flush();
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next = prefixes.size();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::map<std::uint64_t, std::uint64_t> merged;
  main_hist.merge_into(merged);
  for (const auto& h : partial) h.merge_into(merged);

  std::vector<Rational> lambda_pow(static_cast<std::size_t>(N_max) + 1), damp_pow(static_cast<std::size_t>(max_compat) + 1);
  lambda_pow[0] = damp_pow[0] = 1;
  for (std::size_t i = 1; i < lambda_pow.size(); ++i) lambda_pow[i] = lambda_pow[i - 1] * lambda;
  for (std::size_t i = 1; i < damp_pow.size(); ++i) damp_pow[i] = damp_pow[i - 1] * (Rational(1) - lambda);

  std::map<PiTable::Key, Rational> entries;
  for (const auto& [key, count] : merged) {
    int n, N, compat;
    std::int64_t site;
    main_hist.decode(key, n, N, site, compat);
    const Rational term = Rational(BigInt(std::to_string(count))) * lambda_pow[static_cast<std::size_t>(N)] *
                          damp_pow[static_cast<std::size_t>(compat)];
    if (term != 0) entries[PiTable::Key{n, N, box.point(site)}] += term;
  }
  return PiTable(dim, lambda, n_max, N_max, std::move(entries));
}

// ---------------------------------------------------------------- inversion

namespace {

using Accumulator = std::unordered_map<Point, Rational, PointHash>;

void add_convolution(Accumulator& acc, const std::map<Point, Rational>& f, const std::map<Point, Rational>& g,
                     bool subtract) {
  for (const auto& [v, fv] : f)
    for (const auto& [y, gy] : g) {
      auto& slot = acc[v + y];
      if (subtract)
        slot -= fv * gy;
      else
        slot += fv * gy;
    }
}

/// c_n(x) - delta - sum_{u~0} c_{n-1}(x-u) - sum_{m=2}^{n-1} (pi_m * c_{n-m})(x)
Accumulator partial_residual(const CoeffTable& table, const PiCoefficients& pi, int n) {
  Accumulator acc;
  for (const auto& [x, c] : table.row(n)) acc[x] += c;
  const int d = table.dim();
  if (n == 0) acc[Point(d)] -= 1;
  if (n >= 1) {
    for (int code = 0; code < 2 * d; ++code) {
      const Point u = UnitStep::from_code(code).vector(d);
      for (const auto& [y, c] : table.row(n - 1)) acc[u + y] -= c;
    }
  }
  for (int m = 2; m < n; ++m) {
    if (static_cast<std::size_t>(m) >= pi.size()) break;
    add_convolution(acc, pi[static_cast<std::size_t>(m)], table.row(n - m), true);
  }
  return acc;
}

std::map<Point, Rational> nonzero(const Accumulator& acc) {
  std::map<Point, Rational> out;
  for (const auto& [x, v] : acc)
    if (v != 0) out.emplace(x, v);
  return out;
}

}  // namespace

PiCoefficients pi_table_via_inversion(const CoeffTable& walk_table) {
  const int n_max = walk_table.n_max();
  // c^lambda(v, x) = c^lambda(x - v) is used throughout; check the table is
  // at least reflection symmetric.
  for (int n = 0; n <= n_max; ++n)
    for (const auto& [x, c] : walk_table.row(n))
      require(walk_table.at(n, -x) == c, "coefficient table is not reflection symmetric at " + x.str());

  PiCoefficients pi(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    // The m = n term is pi_n * c_0 = pi_n; everything else is known.
    pi[static_cast<std::size_t>(n)] = nonzero(partial_residual(walk_table, pi, n));
  }
  if (!pi[0].empty() || (n_max >= 1 && !pi[1].empty()))
    throw ContractError("inversion produced nonzero pi_0 or pi_1; table is inconsistent");
  return pi;
}

PiCoefficients expansion_residuals(const CoeffTable& walk_table, const PiCoefficients& pi) {
  const int n_lim = std::min(walk_table.n_max(), static_cast<int>(pi.size()) - 1);
  PiCoefficients res(static_cast<std::size_t>(std::max(n_lim, -1) + 1));
  for (int n = 0; n <= n_lim; ++n) {
    Accumulator acc = partial_residual(walk_table, pi, n);
    if (n >= 2) add_convolution(acc, pi[static_cast<std::size_t>(n)], walk_table.row(0), true);
    res[static_cast<std::size_t>(n)] = nonzero(acc);
  }
  return res;
}

Report verify_expansion_identity(const CoeffTable& walk_table, const PiTable& pi) {
  require(walk_table.dim() == pi.dim(), "walk table and pi table dimensions differ");
  require(walk_table.lambda() == pi.lambda(), "walk table and pi table lambdas differ");
  Report rep;
  rep.operation = "verify-identity";
  rep.inputs["d"] = pi.dim();
  rep.inputs["lambda"] = to_string(pi.lambda());
  rep.inputs["n_max"] = std::min(walk_table.n_max(), pi.n_max());
  rep.inputs["N_max"] = pi.N_max();

  const auto residuals = expansion_residuals(walk_table, pi.signed_totals());
  const bool complete = pi.complete_in_N();
  if (!complete)
    rep.warnings.push_back("truncation in N: N_max = " + std::to_string(pi.N_max()) + " < n_max = " +
                           std::to_string(pi.n_max()) + "; residuals checked against a bound on omitted laces");

  auto rows = nlohmann::ordered_json::array();
  bool pass = true;
  for (int n = 0; n < static_cast<int>(residuals.size()); ++n) {
    Rational l1 = 0;
    for (const auto& [x, r] : residuals[static_cast<std::size_t>(n)]) l1 += abs(r);
    nlohmann::ordered_json row;
    row["n"] = n;
    row["nonzero_residuals"] = residuals[static_cast<std::size_t>(n)].size();
    row["residual_l1"] = to_string(l1);
    if (complete) {
      pass = pass && l1 == 0;
    } else {
      // Each walk of length m contributes at most lambda^N to pi_m^(N) per lace.
      Rational bound = 0;
      for (int m = 2; m <= n; ++m) {
        Rational walks = 1;
        for (int i = 0; i < m; ++i) walks *= 2 * pi.dim();
        for (int N = pi.N_max() + 1; N <= m; ++N)
          bound += walks * count_laces(N, m) * pow(pi.lambda(), static_cast<unsigned>(N)) * walk_table.total(n - m);
      }
      row["residual_bound"] = to_string(bound);
      pass = pass && l1 <= bound;
    }
    rows.push_back(std::move(row));
  }
  rep.values["residuals"] = std::move(rows);
  rep.values["exact_criterion"] = complete;
  rep.pass = pass;
  return rep;
}

}  // namespace prudent
