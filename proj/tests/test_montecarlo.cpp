#include <doctest.h>

#include <cmath>

#include "prudent/errors.hpp"
#include "prudent/fourier.hpp"
#include "prudent/montecarlo.hpp"

using namespace prudent;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using B = Philox4x32::Block;
  CHECK(Philox4x32::bijection({0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::bijection({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) == B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::bijection({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("bounded draws stay in range and streams differ") {
  CounterStream a(5, 0), b(5, 1);
  bool differ = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.below(6), y = b.below(6);
    CHECK(x < 6);
    differ = differ || x != y;
  }
  CHECK(differ);
}

TEST_CASE("simple random walk has zero variance") {
  for (int d = 1; d <= 4; ++d) {
    const SamplerConfig cfg{d, 0.0, 6, 1000, 11, 1};
    const auto r = rosenbluth_estimate(cfg);
    CHECK(r.c_n.estimate == std::pow(2.0 * d, 6));
    CHECK(r.c_n.standard_error == 0.0);
    CHECK(r.batches == kMinBatches);
  }
}

TEST_CASE("Rosenbluth estimates") {
  const auto r = rosenbluth_estimate({2, 1.0, 2, 100000, 2024, 0});
  CHECK(std::fabs(r.c_n.estimate - 12) <= 3 * r.c_n.standard_error);
  const auto s = rosenbluth_estimate({3, 0.0, 10, 40000, 9, 0});
  CHECK(std::fabs(s.mean_square.estimate - 10) <= 3 * s.mean_square.standard_error);
}

TEST_CASE("sampling is independent of the worker count") {
  const SamplerConfig one{2, 0.3, 12, 5000, 77, 1};
  SamplerConfig many = one;
  many.workers = 4;
  CHECK(rosenbluth_estimate(one).to_json().dump() == rosenbluth_estimate(many).to_json().dump());
  CHECK(mutual_seeing_mc(2, 16, 3000, 5, 1).to_json().dump() == mutual_seeing_mc(2, 16, 3000, 5, 3).to_json().dump());
}

TEST_CASE("zero total weight is flagged") {
  const auto r = rosenbluth_estimate({2, 1.0, 40, 16, 1, 1});
  CHECK(r.zero_weight);
  CHECK(r.c_n.estimate == 0.0);
  CHECK(std::isnan(r.mean_square.estimate));
}

TEST_CASE("exhaustive mode is exact") {
  for (const Rational& lambda : {Rational(0), Rational(1, 2), Rational(1)}) {
    const auto t = build_coeff_table(4, 2, lambda);
    for (int n = 0; n <= 4; ++n) CHECK(rosenbluth_exhaustive(n, 2, lambda) == t.total(n));
  }
}

TEST_CASE("mutual seeing: exact values") {
  for (int d = 1; d <= 6; ++d) CHECK(mutual_seeing_exact(d, 1)[1] == Rational(1, 2 * d));
  CHECK(mutual_seeing_exact(2, 1)[1] == Rational(1, 4));
  CHECK_THROWS_AS(mutual_seeing_exact(2, 0), ContractError);
  CHECK_THROWS_AS(mutual_seeing_exact(2, kAxisMassMaxN + 1), BudgetError);
}

TEST_CASE("mutual seeing: two-walk simulation agrees") {
  for (int d : {2, 3})
    for (int T : {8, 64}) {
      const auto exact = to_double(mutual_seeing_exact(d, T)[static_cast<std::size_t>(T)]);
      const auto mc = mutual_seeing_mc(d, T, T == 8 ? 50000 : 8000, 17 + static_cast<std::uint64_t>(d));
      CHECK(std::fabs(mc.estimate - exact) <= 3 * mc.standard_error);
    }
}

TEST_CASE("diffusive exponent") {
  const std::vector<int> ns{2, 3, 4, 5, 6};
  const auto srw = diffusive_exponent(moments_from_table(build_coeff_table(6, 2, 0), ns));
  CHECK(srw.values["slope"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(srw.pass);

  SamplerConfig cfg{2, 0.0, 1, 20000, 3, 0};
  const std::vector<int> mc_ns{8, 16, 32, 64};
  const auto mc = diffusive_exponent(moments_from_sampling(cfg, mc_ns));
  CHECK(mc.pass);
  const auto ci = mc.values["slope_ci95"];
  CHECK(ci[0].get<double>() < ci[1].get<double>());

  // Reported only: small-n exact moments of two-dimensional prudent walks.
  const std::vector<int> pr_ns{6, 8, 10, 12};
  const auto prudent2 = diffusive_exponent(moments_from_table(build_coeff_table(12, 2, 1), pr_ns));
  MESSAGE("d=2 prudent slope over n=6..12: " << prudent2.values["slope"].get<double>());
  CHECK(std::isfinite(prudent2.values["slope"].get<double>()));

  const std::vector<int> few{2, 4, 8};
  CHECK_THROWS_AS(diffusive_exponent(moments_from_table(build_coeff_table(8, 2, 0), few)), ContractError);
}
