#include "prudent/walks.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "prudent/errors.hpp"
#include "prudent/version.hpp"
#include "walk_engine.hpp"

namespace prudent {

// ---------------------------------------------------------------- Walk

Walk::Walk(std::vector<Point> sites) : sites_(std::move(sites)) {
  require(!sites_.empty(), "a walk has at least one site");
  const int d = sites_.front().dim();
  require(d >= 1, "walk sites need a dimension");
  lo_.assign(static_cast<std::size_t>(d), 0);
  hi_.assign(static_cast<std::size_t>(d), 0);
  for (int i = 0; i < d; ++i) lo_[static_cast<std::size_t>(i)] = hi_[static_cast<std::size_t>(i)] = sites_.front()[i];
  for (std::size_t t = 0; t < sites_.size(); ++t) {
    const Point& p = sites_[t];
    check_same_dim(p, sites_.front());
    if (t > 0) steps_.push_back(step_between(sites_[t - 1], p));
    index_[p].push_back(static_cast<int>(t));
    for (int i = 0; i < d; ++i) {
      lo_[static_cast<std::size_t>(i)] = std::min(lo_[static_cast<std::size_t>(i)], p[i]);
      hi_[static_cast<std::size_t>(i)] = std::max(hi_[static_cast<std::size_t>(i)], p[i]);
    }
  }
}

Walk Walk::from_step_codes(int dim, std::span<const int> codes) {
  std::vector<Point> sites{Point(dim)};
  for (int c : codes) {
    require(c >= 0 && c < 2 * dim, "step code out of range");
    sites.push_back(sites.back() + UnitStep::from_code(c).vector(dim));
  }
  return Walk(std::move(sites));
}

Walk Walk::from_steps(int dim, std::span<const UnitStep> steps) {
  std::vector<Point> sites{Point(dim)};
  for (const auto& s : steps) sites.push_back(sites.back() + s.vector(dim));
  return Walk(std::move(sites));
}

int Walk::visits(const Point& p) const {
  auto it = index_.find(p);
  return it == index_.end() ? 0 : static_cast<int>(it->second.size());
}

bool Walk::sees_pair(int s, int t) const {
  require(0 <= s && s < t && t <= length(), "seeing pair needs 0 <= s < t <= n");
  return sees((*this)[t], step(t), (*this)[s]);
}

int Walk::seeing_count_at(int t) const {
  require(t >= 1 && t <= length(), "seeing count needs 1 <= t <= n");
  const UnitStep st = step(t);
  const auto axis = static_cast<std::size_t>(st.axis);
  Point p = (*this)[t];
  int count = 0;
  while (p[st.axis] >= lo_[axis] && p[st.axis] <= hi_[axis]) {
    if (auto it = index_.find(p); it != index_.end()) {
      const auto& times = it->second;
      count += static_cast<int>(std::lower_bound(times.begin(), times.end(), t) - times.begin());
    }
    p[st.axis] += st.sign;
  }
  return count;
}

bool is_prudent(const Walk& w) {
  for (int t = 1; t <= w.length(); ++t)
    if (w.seeing_count_at(t) > 0) return false;
  return true;
}

long seeing_pair_count(const Walk& w) {
  long v = 0;
  for (int t = 1; t <= w.length(); ++t) v += w.seeing_count_at(t);
  return v;
}

void check_lambda(const Rational& lambda) {
  require(lambda >= 0 && lambda <= 1, "lambda must lie in [0, 1], got " + to_string(lambda));
}

Rational phi_weight(const Walk& w, const Rational& lambda) {
  check_lambda(lambda);
  const long v = seeing_pair_count(w);
  if (v == 0) return Rational(1);
  return pow(Rational(1) - lambda, static_cast<unsigned>(v));
}

namespace {

std::vector<Rational> weight_powers(const Rational& lambda, int max_v) {
  std::vector<Rational> out(static_cast<std::size_t>(max_v) + 1);
  const Rational base = Rational(1) - lambda;
  out[0] = 1;
  for (std::size_t v = 1; v < out.size(); ++v) out[v] = out[v - 1] * base;
  return out;
}

int max_seeing_pairs(int n) { return n * (n + 1) / 2; }

unsigned resolve_workers(unsigned requested) {
  if (requested) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

void enumerate_walks(int n, int dim, const Rational& lambda,
                     const std::function<void(const VisitedWalk&)>& visitor,
                     const EnumerationOptions& opts) {
  require(n >= 0, "walk length must be nonnegative");
  require(dim >= 1 && dim <= kMaxDim, "dimension out of range");
  check_lambda(lambda);
  const bool prune = lambda == 1;
  const auto powers = weight_powers(lambda, max_seeing_pairs(n));
  detail::Box box(dim, std::max(n, 1));
  detail::WalkState state(box, n);
  detail::NodeBudget shared(opts.node_budget);
  detail::LocalBudget budget(shared);
  auto on_node = [&](const detail::WalkState& s) {
    if (s.depth() != n) return;
    const auto pts = s.points();
    const long v = s.seeing_total();
    visitor(VisitedWalk{pts, v, powers[static_cast<std::size_t>(v)]});
  };
  detail::dfs(state, n, prune, budget, on_node);
  budget.flush();
}

// ---------------------------------------------------------------- CoeffTable

CoeffTable::CoeffTable(int dim, Rational lambda, int n_max, std::vector<Row> rows)
    : dim_(dim), lambda_(std::move(lambda)), n_max_(n_max), rows_(std::move(rows)) {
  require(static_cast<int>(rows_.size()) == n_max_ + 1, "coefficient table row count mismatch");
  totals_.reserve(rows_.size());
  for (const auto& row : rows_) {
    Rational t = 0;
    for (const auto& [x, c] : row) {
      check_same_dim(x, Point(dim_));
      t += c;
    }
    totals_.push_back(t);
  }
}

const CoeffTable::Row& CoeffTable::row(int n) const {
  require(n >= 0 && n <= n_max_, "row " + std::to_string(n) + " outside table horizon");
  return rows_[static_cast<std::size_t>(n)];
}

Rational CoeffTable::at(int n, const Point& x) const {
  const auto& r = row(n);
  auto it = r.find(x);
  return it == r.end() ? Rational(0) : it->second;
}

const Rational& CoeffTable::total(int n) const {
  require(n >= 0 && n <= n_max_, "row " + std::to_string(n) + " outside table horizon");
  return totals_[static_cast<std::size_t>(n)];
}

nlohmann::ordered_json CoeffTable::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "coeff_table";
  j["d"] = dim_;
  j["lambda"] = to_string(lambda_);
  j["n_max"] = n_max_;
  j["code_version"] = kCodeVersion;
  auto rows = nlohmann::ordered_json::array();
  for (int n = 0; n <= n_max_; ++n) {
    for (const auto& [x, c] : rows_[static_cast<std::size_t>(n)]) {
      auto r = nlohmann::ordered_json::array();
      r.push_back(n);
      for (int v : x.coords()) r.push_back(v);
      r.push_back(to_string(c));
      rows.push_back(std::move(r));
    }
  }
  j["rows"] = std::move(rows);
  auto totals = nlohmann::ordered_json::array();
  for (const auto& t : totals_) totals.push_back(to_string(t));
  j["totals"] = std::move(totals);
  return j;
}

CoeffTable CoeffTable::from_json(const nlohmann::json& j) {
  require(j.value("kind", "") == "coeff_table", "not a coefficient table document");
  require(j.at("schema").get<int>() == kSchemaVersion, "unsupported coefficient table schema");
  const int d = j.at("d").get<int>();
  const int n_max = j.at("n_max").get<int>();
  require(d >= 1 && d <= kMaxDim && n_max >= 0, "bad coefficient table header");
  std::vector<Row> rows(static_cast<std::size_t>(n_max) + 1);
  for (const auto& r : j.at("rows")) {
    require(r.is_array() && static_cast<int>(r.size()) == d + 2, "bad coefficient table row");
    const int n = r[0].get<int>();
    require(n >= 0 && n <= n_max, "row index outside horizon");
    Point x(d);
    for (int i = 0; i < d; ++i) x[i] = r[static_cast<std::size_t>(i) + 1].get<int>();
    rows[static_cast<std::size_t>(n)][x] = parse_rational(r[static_cast<std::size_t>(d) + 1].get<std::string>());
  }
  CoeffTable t(d, parse_rational(j.at("lambda").get<std::string>()), n_max, std::move(rows));
  if (j.contains("totals")) {
    const auto& tot = j.at("totals");
    require(tot.size() == t.totals_.size(), "totals length mismatch");
    for (std::size_t n = 0; n < tot.size(); ++n)
      require(parse_rational(tot[n].get<std::string>()) == t.totals_[n], "totals do not match rows");
  }
  return t;
}

// ---------------------------------------------------------------- build

namespace {

/// Per-worker histogram over (n, site, seeing-pair count).
class Histogram {
 public:
  Histogram(int n_max, std::int64_t box_size, int bins)
      : box_size_(box_size), bins_(bins),
        counts_(static_cast<std::size_t>(n_max + 1) * static_cast<std::size_t>(box_size) *
                    static_cast<std::size_t>(bins),
                0) {}

  void add(int n, std::int64_t site, long v) {
    const std::size_t bin = bins_ == 1 ? 0 : static_cast<std::size_t>(v);
    ++counts_[(static_cast<std::size_t>(n) * static_cast<std::size_t>(box_size_) +
               static_cast<std::size_t>(site)) *
                  static_cast<std::size_t>(bins_) +
              bin];
  }

  void merge(const Histogram& o) {
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += o.counts_[i];
  }

  std::uint64_t get(int n, std::int64_t site, int bin) const {
    return counts_[(static_cast<std::size_t>(n) * static_cast<std::size_t>(box_size_) +
                    static_cast<std::size_t>(site)) *
                       static_cast<std::size_t>(bins_) +
                   static_cast<std::size_t>(bin)];
  }

  int bins() const { return bins_; }

 private:
  std::int64_t box_size_;
  int bins_;
  std::vector<std::uint64_t> counts_;
};

constexpr std::size_t kHistogramByteLimit = std::size_t{1} << 30;

}  // namespace

CoeffTable build_coeff_table(int n_max, int dim, const Rational& lambda,
                             const EnumerationOptions& opts) {
  require(n_max >= 0, "n_max must be nonnegative");
  require(dim >= 1 && dim <= kMaxDim, "dimension out of range");
  check_lambda(lambda);
  const bool prune = lambda == 1;
  const bool weighted = lambda > 0 && lambda < 1;
  const int bins = weighted ? max_seeing_pairs(n_max) + 1 : 1;
  const unsigned workers = resolve_workers(opts.workers);

  detail::Box box(dim, std::max(n_max, 1));
  const std::size_t bytes = static_cast<std::size_t>(n_max + 1) * static_cast<std::size_t>(box.size()) *
                            static_cast<std::size_t>(bins) * sizeof(std::uint64_t);
  if (bytes * (workers + 1) > kHistogramByteLimit)
    throw BudgetError("coefficient histogram would need " + std::to_string(bytes * (workers + 1)) +
                      " bytes");

  detail::NodeBudget shared(opts.node_budget);

  // Split into prefix subtrees: smallest depth with at least 4 per worker.
  Histogram main_hist(n_max, box.size(), bins);
  std::vector<std::vector<int>> prefixes;
  int split = 0;
  for (;; ++split) {
    prefixes.clear();
    detail::WalkState state(box, n_max);
    detail::LocalBudget budget(shared);
    // Step codes of every node at depth `split`.
    std::vector<int> path;
    auto rec = [&](auto&& self, int depth) -> void {
      if (depth == split) {
        prefixes.push_back(path);
        return;
      }
      for (int code = 0; code < 2 * dim; ++code) {
        const long seen = state.ray_count(code, prune);
        if (prune && seen > 0) continue;
        state.push(code, seen);
        budget.charge();
        path.push_back(code);
        self(self, depth + 1);
        path.pop_back();
        state.pop();
      }
    };
    rec(rec, 0);
    budget.flush();
    if (prefixes.size() >= 4 * static_cast<std::size_t>(workers) || split == n_max) break;
  }
  // Rows shallower than the split are recorded serially.
  {
    detail::WalkState state(box, n_max);
    detail::LocalBudget budget(shared);
    auto on_node = [&](const detail::WalkState& s) {
      if (s.depth() < split) main_hist.add(s.depth(), s.tip(), s.seeing_total());
    };
    if (split > 0) detail::dfs(state, split - 1, prune, budget, on_node);
    budget.flush();
  }

  std::vector<Histogram> partial;
  partial.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) partial.emplace_back(n_max, box.size(), bins);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&](unsigned id) {
    try {
      detail::LocalBudget budget(shared);
      Histogram& hist = partial[id];
      auto on_node = [&](const detail::WalkState& s) { hist.add(s.depth(), s.tip(), s.seeing_total()); };
      for (std::size_t i = next++; i < prefixes.size(); i = next++) {
        detail::WalkState state(box, n_max);
        for (int code : prefixes[i]) state.push(code, state.ray_count(code, false));
        detail::dfs(state, n_max, prune, budget, on_node);
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
  for (const auto& h : partial) main_hist.merge(h);

  const auto powers = weight_powers(lambda, bins - 1);
  std::vector<CoeffTable::Row> rows(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    auto& row = rows[static_cast<std::size_t>(n)];
    for (std::int64_t site = 0; site < box.size(); ++site) {
      Rational value = 0;
      for (int b = 0; b < bins; ++b) {
        if (auto c = main_hist.get(n, site, b))
          value += Rational(BigInt(std::to_string(c))) * powers[static_cast<std::size_t>(b)];
      }
      if (value != 0) row.emplace(box.point(site), value);
    }
  }
  return CoeffTable(dim, lambda, n_max, std::move(rows));
}

// ---------------------------------------------------------------- statistics

EndpointStatistics endpoint_statistics(const CoeffTable& table, int n, double r,
                                       std::span<const double> k) {
  require(n >= 0 && n <= table.n_max(), "n outside table horizon");
  require(r > 0 && r <= 2, "moment order r must lie in (0, 2]");
  require(static_cast<int>(k.size()) == table.dim(), "wave vector dimension mismatch");
  const Rational& total = table.total(n);
  require(total > 0, "zero total weight at n = " + std::to_string(n));

  EndpointStatistics out;
  if (r == 2.0) {
    Rational acc = 0;
    for (const auto& [x, c] : table.row(n)) acc += Rational(x.norm2()) * c;
    out.mean_square = acc / total;
    out.moment = std::sqrt(to_double(*out.mean_square));
  } else {
    // |x|^r is irrational in general; accumulate the weighted sum in long
    // double against exact weights.
    long double acc = 0;
    for (const auto& [x, c] : table.row(n))
      acc += std::pow(static_cast<long double>(x.norm2()), static_cast<long double>(r) / 2) *
             static_cast<long double>(to_double(c / total));
    out.moment = static_cast<double>(std::pow(acc, 1.0L / static_cast<long double>(r)));
  }

  const double scale = n > 0 ? 1.0 / std::sqrt(static_cast<double>(n)) : 0.0;
  long double re = 0, im = 0;
  for (const auto& [x, c] : table.row(n)) {
    double phase = 0;
    for (int i = 0; i < table.dim(); ++i) phase += k[static_cast<std::size_t>(i)] * scale * x[i];
    const long double w = static_cast<long double>(to_double(c / total));
    re += w * std::cos(phase);
    im += w * std::sin(phase);
  }
  if (std::fabs(static_cast<double>(im)) > 1e-12)
    throw ContractError("characteristic function has a nonzero imaginary part; table is not symmetric");
  out.char_ratio = static_cast<double>(re);
  return out;
}

}  // namespace prudent
