#pragma once

// Truncated generating-function analysis over an exact coefficient table:
// two-point function, susceptibility, bubble and displacement diagrams,
// connective-constant ratios, the diffusion-constant estimator and the
// N = 1, 2 diagram-bound audit.

#include <span>
#include <vector>

#include "prudent/laces.hpp"
#include "prudent/lattice.hpp"
#include "prudent/report.hpp"
#include "prudent/walks.hpp"

namespace prudent {

/// Growth bound used for truncation tails: c_n^lambda <= 2d (2d-1)^(n-1)
/// at lambda = 1 and c_n^lambda <= (2d)^n otherwise.
double mu_upper(int dim, const Rational& lambda);

/// z, a horizon and the table the series are read from. The constructor
/// enforces 0 <= z <= 0.9 / mu_upper and n_max <= table horizon.
class SeriesQuery {
 public:
  SeriesQuery(const CoeffTable& table, double z, int n_max);
  SeriesQuery(const CoeffTable& table, double z) : SeriesQuery(table, z, table.n_max()) {}

  const CoeffTable& table() const { return *table_; }
  double z() const { return z_; }
  int n_max() const { return n_max_; }
  int dim() const { return table_->dim(); }

  /// Upper bound on sum_{n > n_max} c_n^lambda z^n.
  double tail_bound() const;

 private:
  const CoeffTable* table_;
  double z_;
  int n_max_;
};

struct SeriesValue {
  double value = 0;
  double tail_bound = 0;
};

/// sum_{n <= n_max} c_n(x) z^n
SeriesValue green_truncated(const SeriesQuery& q, const Point& x);
/// sum_{n <= n_max} c_n z^n
SeriesValue susceptibility_truncated(const SeriesQuery& q);

struct BubbleEstimate {
  double value = 0;
  Point y_witness;
  double tail_allowance = 0;
};

/// sup_y sum_{x1,x2} G(x1) G(x2 - x1) 1_bot(x2 - y) with G truncated at
/// n_max. The sup over Z^d is evaluated exactly on a finite witness family:
/// every anchor in the support box plus one far anchor per axis line.
BubbleEstimate bubble_truncated(const SeriesQuery& q);

/// Same quantity in exact arithmetic for rational z.
struct ExactBubble {
  Rational value;
  Point y_witness;
};
ExactBubble bubble_truncated_exact(const CoeffTable& table, const Rational& z, int n_max);

/// sup_y sum_x [1 - cos(k.x)] G(x) 1_bot(x - y), G truncated.
BubbleEstimate displacement_diagram(const SeriesQuery& q, std::span<const double> k);

struct MuEstimate {
  std::vector<double> ratios;  // ratios[i] = c_{i+1} / c_i
  double extrapolated = 0;
};

/// Ratio sequence and an Aitken-accelerated extrapolate of its tail.
MuEstimate mu_estimate(const CoeffTable& table);

struct KConstant {
  double K = 0;
  /// 1 + sum_x sum_m m pi_m(x) z^(m-1)
  double A0 = 1;
  /// sum_x sum_n |x|^2 pi_n(x) z^n
  double Kz = 0;
  /// 1 + K_z / z
  double B_factor = 1;
};

KConstant k_constant_estimate(const PiCoefficients& pi, int dim, double z);

/// Audits sum_x Pi^(N)(x) <= (d z lambda)^N B^N and its [1 - cos(k.x)]
/// variant for N in {1, 2}. Requires z <= 1/(4d); refuses otherwise.
Report bound_audit(const SeriesQuery& q, const PiTable& pi, int N);

}  // namespace prudent
