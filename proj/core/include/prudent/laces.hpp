#pragma once

// Graphs and laces on integer intervals, the lace map and compatible edges,
// interval weights K and J, and the lace-expansion coefficients pi_n^(N)(x)
// computed by direct lace summation and by inverting the expansion identity.

#include <compare>
#include <functional>
#include <map>
#include <vector>

#include <nlohmann/json.hpp>

#include "prudent/lattice.hpp"
#include "prudent/rational.hpp"
#include "prudent/report.hpp"
#include "prudent/walks.hpp"

namespace prudent {

struct Edge {
  int s = 0;
  int t = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// A set of edges {s, t}, a <= s < t <= b, on the interval [a, b].
class EdgeGraph {
 public:
  EdgeGraph(int a, int b, std::vector<Edge> edges = {});

  int a() const { return a_; }
  int b() const { return b_; }
  /// Sorted, duplicate-free.
  const std::vector<Edge>& edges() const { return edges_; }
  bool contains(const Edge& e) const;
  EdgeGraph with(const Edge& e) const;

  friend bool operator==(const EdgeGraph&, const EdgeGraph&) = default;

 private:
  int a_;
  int b_;
  std::vector<Edge> edges_;
};

/// Edges s_1 t_1, ..., s_N t_N in construction order (s_i and t_i both
/// strictly increasing).
struct Lace {
  int a = 0;
  int b = 0;
  std::vector<Edge> edges;

  EdgeGraph graph() const { return EdgeGraph(a, b, edges); }
  int size() const { return static_cast<int>(edges.size()); }
  friend bool operator==(const Lace&, const Lace&) = default;
};

bool is_connected(const EdgeGraph& g);

/// The lace map L_Gamma: s_1 = a, t_1 = max{t : at in Gamma}, then
/// t_{i+1} = max{t : st in Gamma, s < t_i} and s_{i+1} = min{s : s t_{i+1} in Gamma}.
Lace lace_of_graph(const EdgeGraph& g);

/// Connected and minimal (removing any edge disconnects).
bool is_lace(const EdgeGraph& g);

/// Edges st not in L with lace_of_graph(L + st) = L, in sorted order.
std::vector<Edge> compatible_edges(const Lace& lace);

/// Visits every lace on [a, b] with exactly N edges.
void enumerate_laces(int N, int a, int b, const std::function<void(const Lace&)>& visitor);

struct IntervalWeights {
  Rational K;
  Rational J;
};

/// K_[a,b](w) = prod_{a<=s<t<=b} (1 + lambda U_st(w)) and J_[a,b](w), the
/// sum over connected graphs, evaluated by lace resummation. For a = b both
/// are 1.
IntervalWeights interval_weights(const Walk& w, int a, int b, const Rational& lambda);

/// pi_n(x) indexed by n, signed and summed over N.
using PiCoefficients = std::vector<std::map<Point, Rational>>;

/// Exact table of pi_n^(N)(x) for 1 <= N <= N_max.
class PiTable {
 public:
  struct Key {
    int n;
    int N;
    Point x;
    friend auto operator<=>(const Key&, const Key&) = default;
  };

  PiTable() = default;
  PiTable(int dim, Rational lambda, int n_max, int N_max, std::map<Key, Rational> entries);

  int dim() const { return dim_; }
  const Rational& lambda() const { return lambda_; }
  int n_max() const { return n_max_; }
  int N_max() const { return N_max_; }
  /// Every lace class on [0, n] is included for all n <= n_max.
  bool complete_in_N() const { return N_max_ >= n_max_; }

  Rational at(int n, int N, const Point& x) const;
  const std::map<Key, Rational>& entries() const { return entries_; }
  /// sum_N (-1)^N pi_n^(N)(x) over the computed N.
  const PiCoefficients& signed_totals() const { return signed_; }

  nlohmann::ordered_json to_json() const;
  static PiTable from_json(const nlohmann::json& j);

  friend bool operator==(const PiTable& l, const PiTable& r) {
    return l.dim_ == r.dim_ && l.lambda_ == r.lambda_ && l.n_max_ == r.n_max_ && l.N_max_ == r.N_max_ &&
           l.entries_ == r.entries_;
  }

 private:
  int dim_ = 0;
  Rational lambda_;
  int n_max_ = 0;
  int N_max_ = 0;
  std::map<Key, Rational> entries_;
  PiCoefficients signed_;
};

inline constexpr int kMaxDirectPiLength = 10;

/// Direct evaluation over all (not only prudent) walks and all laces.
PiTable pi_table_direct(int n_max, int N_max, int dim, const Rational& lambda,
                        const EnumerationOptions& opts = {});

/// Solves the coefficient form of the expansion identity for pi_n(x),
/// n <= walk_table.n_max().
PiCoefficients pi_table_via_inversion(const CoeffTable& walk_table);

/// r_n(x) = c_n(x) - delta_{n,0} delta_{0,x} - sum_{u~0} c_{n-1}(x-u)
///          - sum_{m=2}^{n} sum_v pi_m(v) c_{n-m}(x-v); only nonzero entries.
PiCoefficients expansion_residuals(const CoeffTable& walk_table, const PiCoefficients& pi);

/// Checks the expansion identity for n <= min(table horizons). With a table
/// truncated in N, residuals are compared against a rigorous bound on the
/// omitted lace classes instead of exact zero.
Report verify_expansion_identity(const CoeffTable& walk_table, const PiTable& pi);

/// |L_N[0, n]|
long count_laces(int N, int n);

}  // namespace prudent
