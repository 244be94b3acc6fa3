#include <doctest.h>

#include <cmath>
#include <numbers>

#include "prudent/errors.hpp"
#include "prudent/fourier.hpp"

using namespace prudent;
using std::numbers::pi;

TEST_CASE("random-walk transforms") {
  const std::vector<double> zero{0, 0, 0}, corner{pi, pi, pi};
  CHECK(d_hat(zero) == 1.0);
  CHECK(d_hat(corner) == doctest::Approx(-1.0));
  CHECK(c_hat(0.1, zero) == doctest::Approx(1 / (1 - 0.6)));
  CHECK_THROWS_AS(c_hat(1.0 / 6, zero), ContractError);
  const double n = 1e4;
  const std::vector<double> k{1 / std::sqrt(n), 0};
  CHECK(std::fabs(n * (1 - d_hat(k)) - 0.25) < 1e-4);
}

TEST_CASE("truncated two-point transform") {
  const auto t = build_coeff_table(8, 2, 1);
  const SeriesQuery q(t, 0.15);
  const std::vector<double> zero{0, 0};
  CHECK(g_hat_truncated(q, zero) == doctest::Approx(susceptibility_truncated(q).value).epsilon(1e-14));

  // Space-side sum over the support.
  const std::vector<double> k{pi / 4, 0};
  double direct = 0;
  for (int x = -8; x <= 8; ++x)
    for (int y = -8; y <= 8; ++y) direct += green_truncated(q, Point{x, y}).value * std::cos(k[0] * x + k[1] * y);
  CHECK(g_hat_truncated(q, k) == doctest::Approx(direct).epsilon(1e-13));

  const auto srw = build_coeff_table(8, 2, 0);
  const SeriesQuery qs(srw, 0.1);
  const std::vector<double> k2{0.7, -1.1};
  double geo = 0;
  for (int m = 0; m <= 8; ++m) geo += std::pow(4 * 0.1 * d_hat(k2), m);
  CHECK(g_hat_truncated(qs, k2) == doctest::Approx(geo).epsilon(1e-13));
}

TEST_CASE("grid indexing and shifts") {
  const FourierGrid g(2, 8);
  CHECK(g.size() == 64);
  for (std::size_t a = 0; a < g.size(); ++a) {
    CHECK(g.flat(g.indices(a)) == a);
    for (std::size_t b = 0; b < g.size(); b += 7)
      for (int s : {+1, -1}) {
        const auto ka = g.point(a), kb = g.point(b), kc = g.point(g.shift(a, b, s));
        for (int i = 0; i < 2; ++i) {
          const double diff = std::remainder(ka[static_cast<std::size_t>(i)] + s * kb[static_cast<std::size_t>(i)] -
                                                 kc[static_cast<std::size_t>(i)],
                                             2 * pi);
          CHECK(std::fabs(diff) < 1e-12);
        }
      }
  }
  CHECK_THROWS_AS(FourierGrid(2, 7), ContractError);
}

TEST_CASE("grid transform agrees with pointwise evaluation") {
  const auto t = build_coeff_table(7, 3, Rational(1, 2));
  const SeriesQuery q(t, 0.1);
  const FourierGrid grid(3, 6);
  const auto g = g_hat_grid(q, grid);
  for (std::size_t f = 0; f < grid.size(); ++f)
    CHECK(g.values[f] == doctest::Approx(g_hat_truncated(q, grid.point(f))).epsilon(1e-12));
}

TEST_CASE("smoothed axis transform") {
  // Direct sum agrees with the transform of the smoothed indicator itself.
  const double R = 4;
  const std::vector<double> k{0.4, -1.3};
  double direct = 1;  // delta_0
  for (int axis = 0; axis < 2; ++axis)
    for (int w = -40; w <= 40; ++w) {
      Point x(2);
      x[axis] = w;
      direct += indicator_bot_smoothed(x, R) * std::cos(k[static_cast<std::size_t>(axis)] * w);
    }
  CHECK(smoothed_star_transform(R, k) == doctest::Approx(direct).epsilon(1e-13));

  for (double Rv : {1.0, 4.0, 16.0}) {
    const auto a0 = smoothed_axis_transform(Rv, 2, 0.0);
    CHECK(a0.value > 0);
    CHECK(smoothed_axis_transform(Rv, 2, 0.9).value == doctest::Approx(smoothed_axis_transform(Rv, 2, -0.9).value));
    for (int d = 1; d <= 4; ++d) {
      const FourierGrid grid(d, d <= 2 ? 32 : 8);
      for (std::size_t f = 0; f < grid.size(); ++f) CHECK(smoothed_star_transform(Rv, grid.point(f)) >= 0);
    }
  }
  const auto big = smoothed_axis_transform(400, 2, 0.0);
  CHECK(big.value == doctest::Approx(std::sqrt(pi * 400) / 2).epsilon(1e-10));
  CHECK(big.closed_form_poisson == doctest::Approx(big.value).epsilon(1e-10));
  CHECK_THROWS_AS(smoothed_axis_transform(0, 2, 0.0), ContractError);
}

TEST_CASE("bootstrap functions") {
  const auto t = build_coeff_table(8, 2, 1);
  const FourierGrid grid(2, 16), pairs(2, 8);
  CHECK(bootstrap_functions(SeriesQuery(t, 1.0 / 8), grid, pairs).f1 == doctest::Approx(0.5));
  const auto b0 = bootstrap_functions(SeriesQuery(t, 0.0), grid, pairs);
  CHECK(b0.chi == 1.0);
  CHECK(b0.p_of_z == 0.0);
  CHECK(b0.f2 == doctest::Approx(1.0));
  CHECK(b0.f3 == 0.0);

  // Simple random walk: G matches C_p with p = z up to the truncation tail.
  const auto srw = build_coeff_table(10, 2, 0);
  const SeriesQuery q(srw, 0.05);
  const auto b = bootstrap_functions(q, grid, pairs);
  CHECK(b.p_of_z == doctest::Approx(0.05).epsilon(1e-5));
  CHECK(std::fabs(b.f2 - 1) < 1e-5);
}

TEST_CASE("axis mass exact values") {
  for (int d = 1; d <= 6; ++d) CHECK(axis_mass(1, d) == Rational(1, d));
  CHECK(axis_mass(2, 2) == Rational(1, 8));
  CHECK(axis_mass(0, 3) == 0);
  // Odd lengths in one dimension never return; even ones subtract the return mass.
  CHECK(axis_mass(4, 1) == Rational(5, 8));  // 1 - 6/16
}

TEST_CASE("axis mass against step-distribution convolution") {
  for (int d : {2, 3}) {
    std::map<Point, Rational> dist{{Point(d), Rational(1)}};
    for (int n = 1; n <= 6; ++n) {
      std::map<Point, Rational> next;
      for (const auto& [x, p] : dist)
        for (int c = 0; c < 2 * d; ++c) next[x + UnitStep::from_code(c).vector(d)] += p / (2 * d);
      dist = std::move(next);
      Rational on_last_axis = 0;
      for (const auto& [x, p] : dist) {
        bool ok = x[d - 1] != 0;
        for (int i = 0; i < d - 1; ++i) ok = ok && x[i] == 0;
        if (ok) on_last_axis += p;
      }
      CHECK(axis_mass(n, d) == on_last_axis);
    }
  }
}

TEST_CASE("axis mass scaling") {
  for (int d : {3, 4}) {
    const auto seq = axis_mass_sequence(256, d);
    const double ratio = to_double(seq[256] / seq[64]);
    const double expected = std::pow(4.0, -(d - 1) / 2.0);
    CHECK(ratio >= 0.5 * expected);
    CHECK(ratio <= 2 * expected);
    const std::vector<int> ns{16, 32, 64, 128, 256};
    CHECK(axis_mass_scaling(ns, d).pass);
  }
}
