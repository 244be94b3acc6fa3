#pragma once

// Nearest-neighbour walks, the prudence / seeing-pair machinery, and exact
// enumeration of weakly prudent walks into coefficient tables.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "prudent/lattice.hpp"
#include "prudent/rational.hpp"

namespace prudent {

inline constexpr std::uint64_t kDefaultNodeBudget = 1'000'000'000ULL;

/// A nearest-neighbour path w(0), ..., w(n) in Z^d.
class Walk {
 public:
  /// Validates that consecutive sites are lattice neighbours.
  explicit Walk(std::vector<Point> sites);
  /// Walk from the origin following the given step codes (see UnitStep::code).
  static Walk from_step_codes(int dim, std::span<const int> codes);
  static Walk from_steps(int dim, std::span<const UnitStep> steps);

  int dim() const { return sites_.front().dim(); }
  /// Number of steps n.
  int length() const { return static_cast<int>(sites_.size()) - 1; }
  const Point& operator[](int t) const { return sites_[static_cast<std::size_t>(t)]; }
  const Point& endpoint() const { return sites_.back(); }
  std::span<const Point> sites() const { return sites_; }
  /// Step taken to arrive at w(t), 1 <= t <= n.
  UnitStep step(int t) const { return steps_[static_cast<std::size_t>(t - 1)]; }

  /// Number of times `p` is visited among w(0..n).
  int visits(const Point& p) const;

  /// U_st(w) is -1 iff w(t) sees w(s); this returns the boolean.
  bool sees_pair(int s, int t) const;

  /// Number of earlier sites w(s), s < t, seen by w(t). Walks the ray from
  /// w(t) through the visited-site index, bounded by the bounding box.
  int seeing_count_at(int t) const;

 private:
  std::vector<Point> sites_;
  std::vector<UnitStep> steps_;
  // site -> visit times, ascending
  std::unordered_map<Point, std::vector<int>, PointHash> index_;
  std::vector<int> lo_, hi_;
};

/// No step sees an earlier site.
bool is_prudent(const Walk& w);

/// V(w) = #{(s, t) : s < t, w(t) sees w(s)}.
long seeing_pair_count(const Walk& w);

/// phi^lambda(w) = (1 - lambda)^V(w). lambda must lie in [0, 1].
Rational phi_weight(const Walk& w, const Rational& lambda);

void check_lambda(const Rational& lambda);

struct VisitedWalk {
  std::span<const Point> sites;
  long seeing_pairs;
  const Rational& weight;
};

struct EnumerationOptions {
  std::uint64_t node_budget = kDefaultNodeBudget;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned workers = 0;
};

/// Visits every n-step walk from the origin with nonzero weight in
/// lexicographic order of step codes. At lambda = 1 prefixes are pruned as
/// soon as a step sees an earlier site. Serial; the visitor need not be
/// thread-safe.
void enumerate_walks(int n, int dim, const Rational& lambda,
                     const std::function<void(const VisitedWalk&)>& visitor,
                     const EnumerationOptions& opts = {});

/// Exact table of c_n^lambda(x) for 0 <= n <= n_max.
class CoeffTable {
 public:
  using Row = std::map<Point, Rational>;

  CoeffTable() = default;
  CoeffTable(int dim, Rational lambda, int n_max, std::vector<Row> rows);

  int dim() const { return dim_; }
  const Rational& lambda() const { return lambda_; }
  int n_max() const { return n_max_; }
  const Row& row(int n) const;
  /// c_n^lambda(x); zero outside the support.
  Rational at(int n, const Point& x) const;
  const Rational& total(int n) const;
  const std::vector<Rational>& totals() const { return totals_; }

  nlohmann::ordered_json to_json() const;
  static CoeffTable from_json(const nlohmann::json& j);

  friend bool operator==(const CoeffTable&, const CoeffTable&) = default;

 private:
  int dim_ = 0;
  Rational lambda_;
  int n_max_ = -1;
  std::vector<Row> rows_;
  std::vector<Rational> totals_;
};

/// Builds the coefficient table by pruned depth-first enumeration,
/// parallelised over fixed-depth prefixes. The result does not depend on
/// the worker count.
CoeffTable build_coeff_table(int n_max, int dim, const Rational& lambda,
                             const EnumerationOptions& opts = {});

struct EndpointStatistics {
  /// (sum_x |x|^r c_n(x) / c_n)^(1/r)
  double moment = 0.0;
  /// sum_x |x|^2 c_n(x) / c_n, exact; present only for r = 2.
  std::optional<Rational> mean_square;
  /// sum_x cos(k.x / sqrt n) c_n(x) / c_n
  double char_ratio = 1.0;
};

EndpointStatistics endpoint_statistics(const CoeffTable& table, int n, double r,
                                       std::span<const double> k);

}  // namespace prudent
