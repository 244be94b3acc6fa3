#include "prudent/series.hpp"

#include <algorithm>
#include <cmath>

#include "prudent/errors.hpp"
#include "prudent/fourier.hpp"
#include "walk_engine.hpp"

namespace prudent {

double mu_upper(int dim, const Rational& lambda) {
  return lambda == 1 ? 2.0 * dim - 1.0 : 2.0 * dim;
}

SeriesQuery::SeriesQuery(const CoeffTable& table, double z, int n_max) : table_(&table), z_(z), n_max_(n_max) {
  require(n_max >= 0 && n_max <= table.n_max(), "series horizon outside table horizon");
  const double limit = 0.9 / mu_upper(table.dim(), table.lambda());
  require(z >= 0 && z <= limit, "z = " + std::to_string(z) + " outside the safe region [0, " +
                                    std::to_string(limit) + "]");
}

double SeriesQuery::tail_bound() const {
  const int d = dim();
  const double mu = mu_upper(d, table_->lambda());
  const double r = mu * z_;
  if (r == 0) return 0;
  const double geometric = std::pow(r, n_max_ + 1) / (1 - r);
  return table_->lambda() == 1 ? geometric * (2.0 * d) / mu : geometric;
}

SeriesValue green_truncated(const SeriesQuery& q, const Point& x) {
  check_same_dim(x, Point(q.dim()));
  long double acc = 0, zn = 1;
  for (int n = 0; n <= q.n_max(); ++n, zn *= q.z()) {
    const Rational c = q.table().at(n, x);
    if (c != 0) acc += static_cast<long double>(to_double(c)) * zn;
  }
  return {static_cast<double>(acc), q.tail_bound()};
}

SeriesValue susceptibility_truncated(const SeriesQuery& q) {
  long double acc = 0, zn = 1;
  for (int n = 0; n <= q.n_max(); ++n, zn *= q.z())
    acc += static_cast<long double>(to_double(q.table().total(n))) * zn;
  return {static_cast<double>(acc), q.tail_bound()};
}

namespace {

template <class T>
struct Field {
  detail::Box box;
  std::vector<T> values;
  Field(int dim, int radius) : box(dim, radius), values(static_cast<std::size_t>(box.size()), T(0)) {}
};

template <class T>
Field<T> green_field(const CoeffTable& table, const T& z, int n_max) {
  Field<T> g(table.dim(), std::max(n_max, 1));
  T zn = T(1);
  for (int n = 0; n <= n_max; ++n) {
    for (const auto& [x, c] : table.row(n)) {
      if constexpr (std::is_same_v<T, Rational>)
        g.values[static_cast<std::size_t>(g.box.index(x))] += c * zn;
      else
        g.values[static_cast<std::size_t>(g.box.index(x))] += to_double(c) * zn;
    }
    zn *= z;
  }
  return g;
}

template <class T>
Field<T> self_convolution(const Field<T>& g) {
  const int dim = g.box.dim();
  Field<T> h(dim, 2 * g.box.radius());
  std::vector<std::pair<Point, T>> support;
  for (std::int64_t i = 0; i < g.box.size(); ++i)
    if (g.values[static_cast<std::size_t>(i)] != 0) support.emplace_back(g.box.point(i), g.values[static_cast<std::size_t>(i)]);
  std::vector<std::int64_t> hidx;
  hidx.reserve(support.size());
  for (const auto& [p, v] : support) hidx.push_back(h.box.index(p) - h.box.origin());
  for (std::size_t a = 0; a < support.size(); ++a)
    for (std::size_t b = 0; b < support.size(); ++b)
      h.values[static_cast<std::size_t>(h.box.origin() + hidx[a] + hidx[b])] += support[a].second * support[b].second;
  return h;
}

template <class T>
struct SupResult {
  T value;
  Point witness;
};

/// sup_y sum_x f(x) 1_bot(x - y) for f supported in the field's box.
/// Anchors inside the box are scanned exhaustively; an anchor outside the
/// box in exactly one coordinate j sees only the e_j-line through it, so one
/// representative per such line covers the rest of Z^d.
template <class T>
SupResult<T> axis_sup(const Field<T>& f) {
  const auto& box = f.box;
  const int dim = box.dim();
  const std::int64_t side = 2 * box.radius() + 1;
  const std::int64_t lines = box.size() / side;

  // line_sum[j][index with coordinate j dropped]
  std::vector<std::vector<T>> line_sum(static_cast<std::size_t>(dim), std::vector<T>(static_cast<std::size_t>(lines), T(0)));
  auto drop = [&](std::int64_t idx, int j) {
    const std::int64_t lo = idx % box.stride(j);
    const std::int64_t hi = idx / (box.stride(j) * side);
    return lo + hi * box.stride(j);
  };
  for (std::int64_t i = 0; i < box.size(); ++i) {
    const T& v = f.values[static_cast<std::size_t>(i)];
    if (v == 0) continue;
    for (int j = 0; j < dim; ++j) line_sum[static_cast<std::size_t>(j)][static_cast<std::size_t>(drop(i, j))] += v;
  }

  bool have = false;
  SupResult<T> best{T(0), Point(dim)};
  for (std::int64_t i = 0; i < box.size(); ++i) {
    T acc = T(0);
    for (int j = 0; j < dim; ++j) acc += line_sum[static_cast<std::size_t>(j)][static_cast<std::size_t>(drop(i, j))];
    acc -= T(dim) * f.values[static_cast<std::size_t>(i)];
    acc /= T(dim);
    if (!have || acc > best.value) {
      best = {acc, box.point(i)};
      have = true;
    }
  }
  for (int j = 0; j < dim; ++j) {
    for (std::int64_t l = 0; l < lines; ++l) {
      T v = line_sum[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] / T(dim);
      if (v > best.value) {
        // Representative anchor: the line's point with coordinate j just outside the box.
        const std::int64_t lo = l % box.stride(j);
        const std::int64_t hi = l / box.stride(j);
        Point y = box.point(lo + hi * box.stride(j) * side);
        y[j] = box.radius() + 1;
        best = {v, y};
      }
    }
  }
  return best;
}

double chi_truncated(const SeriesQuery& q) { return susceptibility_truncated(q).value; }

}  // namespace

BubbleEstimate bubble_truncated(const SeriesQuery& q) {
  const auto g = green_field<double>(q.table(), q.z(), q.n_max());
  const auto h = self_convolution(g);
  const auto sup = axis_sup(h);
  // sup_y (H * 1_bot)(y) <= (1/d) sum_x H(x) = chi^2 / d, so the omitted
  // orders add at most ((chi_T + tail)^2 - chi_T^2) / d.
  const double chi = chi_truncated(q);
  const double tail = q.tail_bound();
  return {sup.value, sup.witness, ((chi + tail) * (chi + tail) - chi * chi) / q.dim()};
}

ExactBubble bubble_truncated_exact(const CoeffTable& table, const Rational& z, int n_max) {
  require(n_max >= 0 && n_max <= table.n_max(), "series horizon outside table horizon");
  require(z >= 0, "z must be nonnegative");
  const auto g = green_field<Rational>(table, z, n_max);
  const auto h = self_convolution(g);
  auto sup = axis_sup(h);
  return {sup.value, sup.witness};
}

BubbleEstimate displacement_diagram(const SeriesQuery& q, std::span<const double> k) {
  require(static_cast<int>(k.size()) == q.dim(), "wave vector dimension mismatch");
  auto y = green_field<double>(q.table(), q.z(), q.n_max());
  for (std::int64_t i = 0; i < y.box.size(); ++i) {
    auto& v = y.values[static_cast<std::size_t>(i)];
    if (v == 0) continue;
    const Point x = y.box.point(i);
    double phase = 0;
    for (int j = 0; j < q.dim(); ++j) phase += k[static_cast<std::size_t>(j)] * x[j];
    v *= 1 - std::cos(phase);
  }
  const auto sup = axis_sup(y);
  // 1 - cos <= 2 and the indicator carries 1/d.
  return {sup.value, sup.witness, 2.0 * q.tail_bound() / q.dim()};
}

MuEstimate mu_estimate(const CoeffTable& table) {
  require(table.n_max() >= 4, "connective-constant estimate needs n_max >= 4");
  MuEstimate out;
  for (int n = 1; n <= table.n_max(); ++n) {
    require(table.total(n - 1) > 0, "zero total in ratio sequence");
    out.ratios.push_back(to_double(table.total(n) / table.total(n - 1)));
  }
  const std::size_t m = out.ratios.size();
  const double r0 = out.ratios[m - 3], r1 = out.ratios[m - 2], r2 = out.ratios[m - 1];
  const double d1 = r2 - r1, d0 = r1 - r0, dd = d1 - d0;
  // Aitken delta-squared on the last three ratios; fall back to the last
  // ratio when the sequence is not geometrically converging.
  if (dd != 0 && d0 * d1 > 0 && std::fabs(d1) < std::fabs(d0))
    out.extrapolated = r2 - d1 * d1 / dd;
  else
    out.extrapolated = r2;
  return out;
}

KConstant k_constant_estimate(const PiCoefficients& pi, int dim, double z) {
  require(dim >= 1 && dim <= kMaxDim, "dimension out of range");
  require(z >= 0, "z must be nonnegative");
  KConstant out;
  long double a = 0, kz = 0, kz_over_z = 0;
  for (std::size_t n = 0; n < pi.size(); ++n) {
    for (const auto& [x, v] : pi[n]) {
      check_same_dim(x, Point(dim));
      const long double val = to_double(v);
      if (n >= 1) {
        const long double zn1 = std::pow(static_cast<long double>(z), static_cast<long double>(n - 1));
        a += static_cast<long double>(n) * val * zn1;
        kz_over_z += static_cast<long double>(x.norm2()) * val * zn1;
        kz += static_cast<long double>(x.norm2()) * val * zn1 * z;
      }
    }
  }
  out.A0 = static_cast<double>(1 + a);
  out.Kz = static_cast<double>(kz);
  out.B_factor = static_cast<double>(1 + kz_over_z);
  out.K = out.A0 * out.B_factor / (2.0 * dim);
  return out;
}

Report bound_audit(const SeriesQuery& q, const PiTable& pi, int N) {
  const int d = q.dim();
  require(N == 1 || N == 2, "bound audit supports N = 1 or N = 2");
  require(pi.dim() == d && pi.lambda() == q.table().lambda(), "pi table does not match the coefficient table");
  require(pi.N_max() >= N, "pi table does not contain N = " + std::to_string(N));
  if (q.z() > 1.0 / (4.0 * d))
    throw ContractError("bound audit refused: z = " + std::to_string(q.z()) + " exceeds 1/(4d) = " +
                        std::to_string(1.0 / (4.0 * d)) + ", where truncation tails are not rigorously controlled");
  const double lambda = to_double(pi.lambda());
  const double z = q.z();
  const int n_pi = std::min(pi.n_max(), q.n_max());

  Report rep;
  rep.operation = "bound-audit";
  rep.inputs["d"] = d;
  rep.inputs["lambda"] = to_string(pi.lambda());
  rep.inputs["z"] = z;
  rep.inputs["n_max"] = q.n_max();
  rep.inputs["N"] = N;

  const auto bubble = bubble_truncated(q);
  const double B = bubble.value, B_up = bubble.value + bubble.tail_allowance;
  const double pref = std::pow(d * z * lambda, N);

  // sum_x [1 - cos(k.x)] Pi^(N)_z(x), truncated at n_pi; k = 0 gives the plain sum.
  auto lhs = [&](std::span<const double> k) {
    long double acc = 0;
    for (const auto& [key, v] : pi.entries()) {
      if (key.N != N || key.n > n_pi) continue;
      double weight = 1;
      if (!k.empty()) {
        double phase = 0;
        for (int j = 0; j < d; ++j) phase += k[static_cast<std::size_t>(j)] * key.x[j];
        weight = 1 - std::cos(phase);
      }
      acc += static_cast<long double>(to_double(v)) * weight * std::pow(static_cast<long double>(z), key.n);
    }
    return static_cast<double>(acc);
  };

  bool pass = true;
  {
    const double l = lhs({});
    const double rhs = pref * std::pow(B, N);
    const double allowance = pref * std::pow(B_up, N) - rhs;
    const bool ok = l <= rhs + allowance;
    pass = pass && ok;
    nlohmann::ordered_json row;
    row["lhs"] = l;
    row["rhs"] = rhs;
    row["allowance"] = allowance;
    row["bubble"] = B;
    row["pass"] = ok;
    rep.values["plain"] = row;
    rep.tail_allowance = allowance;
    rep.witness = bubble.y_witness.coords().size() ? nlohmann::ordered_json(std::vector<int>(
                                                         bubble.y_witness.coords().begin(), bubble.y_witness.coords().end()))
                                                   : nlohmann::ordered_json();
  }

  auto kgrid = nlohmann::ordered_json::array();
  for (double t : {0.1, 0.3, 1.0}) {
    for (int diag = 0; diag < 2; ++diag) {
      std::vector<double> k(static_cast<std::size_t>(d), 0.0);
      if (diag)
        std::fill(k.begin(), k.end(), t / std::sqrt(static_cast<double>(d)));
      else
        k[0] = t;
      const double l = lhs(k);
      const auto y = displacement_diagram(q, k);
      const double one_minus_d = 1 - d_hat(k);
      const double c1 = (3.0 * N - 1) * (2.0 * N - 1), c2 = (3.0 * N - 1) * N;
      const double rhs = pref * (c1 * y.value * std::pow(B, N - 1) + c2 * std::pow(B, N) * one_minus_d);
      const double rhs_up =
          pref * (c1 * (y.value + y.tail_allowance) * std::pow(B_up, N - 1) + c2 * std::pow(B_up, N) * one_minus_d);
      const bool ok = l <= rhs_up;
      pass = pass && ok;
      nlohmann::ordered_json row;
      row["k"] = k;
      row["lhs"] = l;
      row["rhs"] = rhs;
      row["allowance"] = rhs_up - rhs;
      row["displacement"] = y.value;
      row["pass"] = ok;
      kgrid.push_back(std::move(row));
    }
  }
  rep.values["cosine"] = std::move(kgrid);
  rep.pass = pass;
  return rep;
}

}  // namespace prudent
