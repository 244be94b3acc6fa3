#pragma once

// Fourier-side diagnostics on [-pi, pi]^d: the random-walk transforms, the
// truncated two-point transform, Gaussian-smoothed axis indicators, the
// bootstrap functions, and the exact on-axis mass of simple random walk.

#include <span>
#include <string>
#include <vector>

#include "prudent/rational.hpp"
#include "prudent/report.hpp"
#include "prudent/series.hpp"
#include "prudent/walks.hpp"

namespace prudent {

/// (1/d) sum_i cos(k_i)
double d_hat(std::span<const double> k);

/// 1 / (1 - 2 d z D(k)); requires |z| < 1/(2d).
double c_hat(double z, std::span<const double> k);

/// sum_{n <= n_max} z^n sum_x cos(k.x) c_n(x)
double g_hat_truncated(const SeriesQuery& q, std::span<const double> k);

struct AxisTransform {
  /// (1/d) sum_{|w| <= cutoff} exp(-w^2/R) cos(w k), direct summation.
  double value = 0;
  int cutoff = 0;
  /// sqrt(pi R)/d exp(-pi^2 R k^2), reported for comparison only.
  double closed_form_stated = 0;
  /// sqrt(pi R)/d exp(-R k^2 / 4), leading Poisson-summation term.
  double closed_form_poisson = 0;
};

/// Transform of the smoothed indicator restricted to axis i at component k_i.
AxisTransform smoothed_axis_transform(double R, int dim, double k_i);

/// Transform of 1_{bot,R} + delta_0 = sum_i 1^i_{bot,R}; positive everywhere.
double smoothed_star_transform(double R, std::span<const double> k);

/// Uniform grid k_j = -pi + 2 pi m / M per axis, M even.
class FourierGrid {
 public:
  FourierGrid(int dim, int resolution);

  int dim() const { return dim_; }
  int resolution() const { return m_; }
  std::size_t size() const { return size_; }
  double coordinate(int m) const;
  std::vector<int> indices(std::size_t flat) const;
  std::vector<double> point(std::size_t flat) const;
  std::size_t flat(std::span<const int> idx) const;
  /// Index of k + l (sign = +1) or k - l (sign = -1), wrapped modulo 2 pi.
  std::size_t shift(std::size_t k, std::size_t l, int sign) const;

  /// Default resolution per dimension: 64 for d <= 3, 16 for d = 4, 8 beyond.
  static int default_resolution(int dim);
  /// Default for the pair sup in f3, which costs (M^d)^2.
  static int default_pair_resolution(int dim);

 private:
  int dim_;
  int m_;
  std::size_t size_;
};

/// Values of a real function on a grid. Writes CSV (grid coordinates then
/// value).
struct GridValues {
  FourierGrid grid;
  std::vector<double> values;
  std::string to_csv(const std::string& value_name) const;
};

/// Truncated G-hat over every grid point. Asserts the imaginary part
/// vanishes.
GridValues g_hat_grid(const SeriesQuery& q, const FourierGrid& grid);

struct BootstrapValues {
  double f1 = 0;
  double f2 = 0;
  double f3 = 0;
  double f = 0;
  double p_of_z = 0;
  double chi = 1;
};

/// f1 = 2dz, f2 = sup |G(k)| / C_p(k), f3 = sup |G(l) - (G(l+k) + G(l-k))/2| / U_p(k, l)
/// with p = p(z) matching C_p(0) = G(0). Suprema are over grid points and so
/// are lower bounds to the continuum suprema.
BootstrapValues bootstrap_functions(const SeriesQuery& q, const FourierGrid& grid, const FourierGrid& pair_grid);

/// a(n) = sum_x D^{*n}(x) 1_bot(x), exact.
Rational axis_mass(int n, int dim);

/// a(0), ..., a(n_max) via one pass over binomial rows.
std::vector<Rational> axis_mass_sequence(int n_max, int dim);

/// a(n) n^{(d-1)/2} over the list; PASS iff max/min <= band.
Report axis_mass_scaling(std::span<const int> n_list, int dim, double band = 4.0);

inline constexpr int kAxisMassMaxN = 1 << 14;

}  // namespace prudent
