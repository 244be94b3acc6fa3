#include "prudent/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "prudent/errors.hpp"

namespace prudent {

double d_hat(std::span<const double> k) {
  require(!k.empty(), "empty wave vector");
  double s = 0;
  for (double v : k) s += std::cos(v);
  return s / static_cast<double>(k.size());
}

double c_hat(double z, std::span<const double> k) {
  const double d = static_cast<double>(k.size());
  require(std::fabs(z) < 1.0 / (2 * d), "c_hat needs |z| < 1/(2d)");
  return 1.0 / (1.0 - 2 * d * z * d_hat(k));
}

double g_hat_truncated(const SeriesQuery& q, std::span<const double> k) {
  require(static_cast<int>(k.size()) == q.dim(), "wave vector dimension mismatch");
  long double acc = 0, zn = 1;
  for (int n = 0; n <= q.n_max(); ++n, zn *= q.z()) {
    long double row = 0;
    for (const auto& [x, c] : q.table().row(n)) {
      double phase = 0;
      for (int j = 0; j < q.dim(); ++j) phase += k[static_cast<std::size_t>(j)] * x[j];
      row += static_cast<long double>(to_double(c)) * std::cos(phase);
    }
    acc += row * zn;
  }
  return static_cast<double>(acc);
}

AxisTransform smoothed_axis_transform(double R, int dim, double k_i) {
  require(R > 0, "smoothing radius R must be positive");
  require(dim >= 1, "dimension must be positive");
  AxisTransform out;
  out.cutoff = static_cast<int>(std::ceil(6 * std::sqrt(R))) + 1;
  // Terms beyond the cutoff are below exp(-36) relative to the w = 0 term.
  long double acc = 1;
  for (int w = 1; w <= out.cutoff; ++w)
    acc += 2 * std::exp(-static_cast<long double>(w) * w / R) * std::cos(static_cast<long double>(w) * k_i);
  out.value = static_cast<double>(acc) / dim;
  out.closed_form_stated = std::sqrt(std::numbers::pi * R) / dim * std::exp(-std::numbers::pi * std::numbers::pi * R * k_i * k_i);
  out.closed_form_poisson = std::sqrt(std::numbers::pi * R) / dim * std::exp(-R * k_i * k_i / 4);
  return out;
}

double smoothed_star_transform(double R, std::span<const double> k) {
  const int d = static_cast<int>(k.size());
  double s = 0;
  for (double ki : k) s += smoothed_axis_transform(R, d, ki).value;
  return s;
}

// ---------------------------------------------------------------- grid

FourierGrid::FourierGrid(int dim, int resolution) : dim_(dim), m_(resolution), size_(1) {
  require(dim >= 1 && dim <= kMaxDim, "dimension out of range");
  require(resolution >= 2 && resolution % 2 == 0, "grid resolution must be even and >= 2");
  for (int i = 0; i < dim; ++i) {
    size_ *= static_cast<std::size_t>(resolution);
    require(size_ <= (std::size_t{1} << 26), "Fourier grid too large");
  }
}

double FourierGrid::coordinate(int m) const { return -std::numbers::pi + 2 * std::numbers::pi * m / m_; }

std::vector<int> FourierGrid::indices(std::size_t flat) const {
  std::vector<int> idx(static_cast<std::size_t>(dim_));
  for (int i = 0; i < dim_; ++i) {
    idx[static_cast<std::size_t>(i)] = static_cast<int>(flat % static_cast<std::size_t>(m_));
    flat /= static_cast<std::size_t>(m_);
  }
  return idx;
}

std::vector<double> FourierGrid::point(std::size_t flat) const {
  std::vector<double> k;
  for (int m : indices(flat)) k.push_back(coordinate(m));
  return k;
}

std::size_t FourierGrid::flat(std::span<const int> idx) const {
  std::size_t f = 0;
  for (int i = dim_ - 1; i >= 0; --i) f = f * static_cast<std::size_t>(m_) + static_cast<std::size_t>(idx[static_cast<std::size_t>(i)]);
  return f;
}

std::size_t FourierGrid::shift(std::size_t k, std::size_t l, int sign) const {
  // k_a + s l_a = -pi + 2 pi (a + s b - M/2 s) / M  (mod 2 pi) for s = +-1.
  std::size_t out = 0, stride = 1;
  const std::size_t m = static_cast<std::size_t>(m_);
  for (int i = 0; i < dim_; ++i) {
    const long a = static_cast<long>(k % m), b = static_cast<long>(l % m);
    long c = a + sign * (b - m_ / 2);
    c = ((c % m_) + m_) % m_;
    out += static_cast<std::size_t>(c) * stride;
    stride *= m;
    k /= m;
    l /= m;
  }
  return out;
}

int FourierGrid::default_resolution(int dim) { return dim <= 3 ? 64 : (dim == 4 ? 16 : 8); }

int FourierGrid::default_pair_resolution(int dim) {
  switch (dim) {
    case 1: return 64;
    case 2: return 32;
    case 3: return 16;
    default: return 8;
  }
}

std::string GridValues::to_csv(const std::string& value_name) const {
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < grid.dim(); ++i) os << "k" << (i + 1) << ",";
  os << value_name << "\n";
  for (std::size_t f = 0; f < grid.size(); ++f) {
    for (double v : grid.point(f)) os << v << ",";
    os << values[f] << "\n";
  }
  return os.str();
}

GridValues g_hat_grid(const SeriesQuery& q, const FourierGrid& grid) {
  require(grid.dim() == q.dim(), "grid dimension mismatch");
  const int d = q.dim();
  const int R = q.n_max();
  const int M = grid.resolution();
  // Two-point function on its support.
  std::vector<std::pair<Point, long double>> support;
  {
    std::map<Point, long double> g;
    long double zn = 1;
    for (int n = 0; n <= q.n_max(); ++n, zn *= q.z())
      for (const auto& [x, c] : q.table().row(n)) g[x] += static_cast<long double>(to_double(c)) * zn;
    for (const auto& [x, v] : g)
      if (v != 0) support.emplace_back(x, v);
  }
  // phase[m][x + R] = exp(i k_m x)
  std::vector<std::complex<long double>> phase(static_cast<std::size_t>(M * (2 * R + 1)));
  for (int m = 0; m < M; ++m)
    for (int x = -R; x <= R; ++x) {
      const long double a = static_cast<long double>(grid.coordinate(m)) * x;
      phase[static_cast<std::size_t>(m * (2 * R + 1) + x + R)] = {std::cos(a), std::sin(a)};
    }
  GridValues out{grid, std::vector<double>(grid.size())};
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto idx = grid.indices(f);
    std::complex<long double> acc = 0;
    for (const auto& [x, v] : support) {
      std::complex<long double> e = v;
      for (int j = 0; j < d; ++j) e *= phase[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)] * (2 * R + 1) + x[j] + R)];
      acc += e;
    }
    if (std::fabs(static_cast<double>(acc.imag())) > 1e-12 * std::max(1.0, std::fabs(static_cast<double>(acc.real()))))
      throw ContractError("G-hat has a nonvanishing imaginary part; table is not symmetric");
    out.values[f] = static_cast<double>(acc.real());
  }
  return out;
}

BootstrapValues bootstrap_functions(const SeriesQuery& q, const FourierGrid& grid, const FourierGrid& pair_grid) {
  const int d = q.dim();
  BootstrapValues out;
  out.f1 = 2 * d * q.z();
  out.chi = susceptibility_truncated(q).value;
  if (out.chi < 1) throw ContractError("truncated susceptibility below 1: corrupt coefficient table");
  out.p_of_z = (1 - 1 / out.chi) / (2 * d);

  auto c_grid = [&](const FourierGrid& g) {
    std::vector<double> c(g.size());
    for (std::size_t f = 0; f < g.size(); ++f) c[f] = c_hat(out.p_of_z, g.point(f));
    return c;
  };

  {
    const auto G = g_hat_grid(q, grid);
    const auto C = c_grid(grid);
    double f2 = 0;
    for (std::size_t f = 0; f < grid.size(); ++f) f2 = std::max(f2, std::fabs(G.values[f]) / C[f]);
    out.f2 = f2;
  }
  {
    const auto G = g_hat_grid(q, pair_grid);
    const auto C = c_grid(pair_grid);
    double f3 = 0;
    for (std::size_t k = 0; k < pair_grid.size(); ++k) {
      const double ck = C[k];
      for (std::size_t l = 0; l < pair_grid.size(); ++l) {
        const std::size_t lp = pair_grid.shift(l, k, +1), lm = pair_grid.shift(l, k, -1);
        const double half_delta = std::fabs(G.values[l] - 0.5 * (G.values[lp] + G.values[lm]));
        if (half_delta == 0) continue;
        const double u = (C[lm] * C[l] + C[lp] * C[l] + C[lm] * C[lp]) / ck;
        f3 = std::max(f3, half_delta / u);
      }
    }
    out.f3 = f3;
  }
  out.f = std::max({out.f1, out.f2, out.f3});
  return out;
}

// ---------------------------------------------------------------- axis mass

std::vector<Rational> axis_mass_sequence(int n_max, int dim) {
  require(dim >= 1 && dim <= kMaxDim, "dimension out of range");
  require(n_max >= 0 && n_max <= kAxisMassMaxN, "axis mass horizon out of range");
  const std::size_t K = static_cast<std::size_t>(n_max) + 1;
  // zero[a][k]: k-step walks in Z^a ending at the origin (a = 0 .. d-1).
  std::vector<std::vector<BigInt>> zero(static_cast<std::size_t>(dim), std::vector<BigInt>(K));
  std::vector<BigInt> central(K);  // C(m, m/2) for even m
  std::vector<BigInt> off_axis(K);  // 1D m-step walks ending away from 0
  std::vector<BigInt> row{1};       // binomial row k
  std::vector<Rational> out(K);
  BigInt two_pow = 1, denom = 1;
  for (std::size_t k = 0; k < K; ++k) {
    if (k > 0) {
      std::vector<BigInt> next(k + 1);
      next[0] = next[k] = 1;
      for (std::size_t m = 1; m < k; ++m) next[m] = row[m - 1] + row[m];
      row = std::move(next);
      two_pow *= 2;
      denom *= 2 * dim;
    }
    central[k] = (k % 2 == 0) ? row[k / 2] : BigInt(0);
    off_axis[k] = two_pow - central[k];
    zero[0][k] = k == 0 ? 1 : 0;
    for (std::size_t a = 1; a < static_cast<std::size_t>(dim); ++a) {
      BigInt acc = 0;
      if (k % 2 == 0)
        for (std::size_t m = 0; m <= k; m += 2) acc += row[m] * central[m] * zero[a - 1][k - m];
      zero[a][k] = acc;
    }
    // Walks with all but the last axis at the origin and the last away from it.
    BigInt w = 0;
    const auto& rest = zero[static_cast<std::size_t>(dim) - 1];
    for (std::size_t m = 0; m <= k; ++m) {
      if (rest[k - m] == 0 || off_axis[m] == 0) continue;
      w += row[m] * off_axis[m] * rest[k - m];
    }
    // sum_x D^{*k}(x) 1_bot(x) = (1/d) * d * P(on the last axis, nonzero).
    out[k] = Rational(w, denom);
    out[k].canonicalize();
  }
  return out;
}

Rational axis_mass(int n, int dim) {
  require(n >= 0, "n must be nonnegative");
  return axis_mass_sequence(n, dim).back();
}

Report axis_mass_scaling(std::span<const int> n_list, int dim, double band) {
  require(!n_list.empty(), "empty n list");
  Report rep;
  rep.operation = "axis-mass";
  rep.inputs["d"] = dim;
  rep.inputs["n"] = std::vector<int>(n_list.begin(), n_list.end());
  rep.inputs["band"] = band;
  const int n_top = *std::max_element(n_list.begin(), n_list.end());
  const auto seq = axis_mass_sequence(n_top, dim);
  auto rows = nlohmann::ordered_json::array();
  double lo = INFINITY, hi = 0;
  for (int n : n_list) {
    const Rational& a = seq[static_cast<std::size_t>(n)];
    const double scaled = to_double(a) * std::pow(static_cast<double>(n), (dim - 1) / 2.0);
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
    nlohmann::ordered_json row;
    row["n"] = n;
    row["mass"] = to_double(a);
    row["scaled"] = scaled;
    if (n <= 64) row["exact"] = to_string(a);
    rows.push_back(std::move(row));
  }
  rep.values["rows"] = std::move(rows);
  rep.values["band_ratio"] = lo > 0 ? hi / lo : INFINITY;
  rep.pass = lo > 0 && hi / lo <= band;
  return rep;
}

}  // namespace prudent
