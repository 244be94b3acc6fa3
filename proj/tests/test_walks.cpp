#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "prudent/errors.hpp"
#include "prudent/walks.hpp"

using namespace prudent;

using oracle::all_sequences;

namespace {

// Direct double loop over (s, t) with the pointwise seeing test.
long brute_seeing(const Walk& w) {
  long v = 0;
  for (int t = 1; t <= w.length(); ++t)
    for (int s = 0; s < t; ++s) v += sees(w[t], w.step(t), w[s]) ? 1 : 0;
  return v;
}

Walk path(std::vector<Point> pts) { return Walk(std::move(pts)); }

}  // namespace

TEST_CASE("prudence of small walks") {
  CHECK(is_prudent(path({{0, 0}, {1, 0}})));
  CHECK_FALSE(is_prudent(path({{0, 0}, {1, 0}, {0, 0}})));
  // Self-avoiding spiral whose last step sees the origin.
  const auto spiral = path({{0, 0}, {1, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}, {0, 1}});
  CHECK_FALSE(is_prudent(spiral));
  CHECK(spiral.sees_pair(0, 7));
}

TEST_CASE("seeing-pair counts") {
  CHECK(seeing_pair_count(path({{0, 0}, {1, 0}, {1, 1}})) == 0);
  CHECK(seeing_pair_count(path({{0, 0}, {1, 0}, {0, 0}})) == 1);
  all_sequences(6, 2, [](const std::vector<int>& c) {
    const auto w = Walk::from_step_codes(2, c);
    REQUIRE(seeing_pair_count(w) == brute_seeing(w));
  });
  all_sequences(4, 3, [](const std::vector<int>& c) {
    const auto w = Walk::from_step_codes(3, c);
    REQUIRE(seeing_pair_count(w) == brute_seeing(w));
  });
}

TEST_CASE("weights") {
  const auto back = path({{0, 0}, {1, 0}, {0, 0}});
  CHECK(phi_weight(back, Rational(1, 2)) == Rational(1, 2));
  CHECK(phi_weight(back, 0) == 1);
  CHECK(phi_weight(back, 1) == 0);
  CHECK(phi_weight(path({{0, 0}, {0, 1}, {1, 1}}), Rational(1, 3)) == 1);
  CHECK_THROWS_AS(phi_weight(back, Rational(3, 2)), ContractError);
}

TEST_CASE("walks must be nearest-neighbour paths") {
  CHECK_THROWS_AS(path({{0, 0}, {2, 0}}), ContractError);
}

TEST_CASE("visitor sees the right walks") {
  int count = 0;
  enumerate_walks(1, 2, 1, [&](const VisitedWalk&) { ++count; });
  CHECK(count == 4);
  count = 0;
  enumerate_walks(2, 2, 1, [&](const VisitedWalk&) { ++count; });
  CHECK(count == 12);
  count = 0;
  Rational total = 0;
  enumerate_walks(2, 2, Rational(1, 2), [&](const VisitedWalk& w) {
    ++count;
    total += w.weight;
  });
  CHECK(count == 16);
  CHECK(total == 14);
}

TEST_CASE("enumeration matches brute force over all step sequences") {
  for (int dim : {2, 3}) {
    for (const Rational& lambda : {Rational(0), Rational(1, 2), Rational(1)}) {
      const int n_max = dim == 2 ? 6 : 4;
      const auto table = build_coeff_table(n_max, dim, lambda);
      for (int n = 0; n <= n_max; ++n) {
        std::map<Point, Rational> brute;
        all_sequences(n, dim, [&](const std::vector<int>& c) {
          const auto w = Walk::from_step_codes(dim, c);
          const Rational phi = phi_weight(w, lambda);
          if (phi != 0) brute[w.endpoint()] += phi;
        });
        REQUIRE(table.row(n) == brute);
      }
    }
  }
}

TEST_CASE("frozen totals") {
  const std::vector<long> d2 = {1, 4, 12, 36, 100, 276, 748, 2012, 5356, 14172, 37276, 97604, 254508};
  const auto t2 = build_coeff_table(12, 2, 1);
  for (int n = 0; n <= 12; ++n) CHECK(t2.total(n) == d2[static_cast<std::size_t>(n)]);
  const std::vector<long> d3 = {1, 6, 30, 150, 726, 3510, 16734, 79518, 375246};
  const auto t3 = build_coeff_table(8, 3, 1);
  for (int n = 0; n <= 8; ++n) CHECK(t3.total(n) == d3[static_cast<std::size_t>(n)]);
  CHECK(t3.total(2) == 30);
}

TEST_CASE("simple random walk calibration") {
  for (int d = 1; d <= 4; ++d) {
    const int n_max = d <= 2 ? 8 : (d == 3 ? 6 : 5);
    const auto t = build_coeff_table(n_max, d, 0);
    Rational p = 1;
    for (int n = 0; n <= n_max; ++n, p *= 2 * d) {
      CHECK(t.total(n) == p);
      if (n == 0) continue;
      std::vector<double> k(static_cast<std::size_t>(d), 0.0);
      k[0] = 0.7;
      if (d > 1) k[1] = -0.3;
      const auto st = endpoint_statistics(t, n, 2, k);
      CHECK(*st.mean_square == n);
      double dhat = 0;
      for (double ki : k) dhat += std::cos(ki / std::sqrt(n));
      dhat /= d;
      CHECK(st.char_ratio == doctest::Approx(std::pow(dhat, n)).epsilon(1e-12));
      std::vector<double> zero(static_cast<std::size_t>(d), 0.0);
      CHECK(endpoint_statistics(t, n, 2, zero).char_ratio == doctest::Approx(1.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("table serialization round trip") {
  const auto t = build_coeff_table(5, 2, Rational(1, 3));
  CHECK(CoeffTable::from_json(t.to_json()) == t);
  CHECK(t.to_json().dump() == CoeffTable::from_json(nlohmann::json::parse(t.to_json().dump())).to_json().dump());
}

TEST_CASE("worker count does not change the table") {
  EnumerationOptions one, four;
  one.workers = 1;
  four.workers = 4;
  CHECK(build_coeff_table(9, 2, Rational(1, 2), one) == build_coeff_table(9, 2, Rational(1, 2), four));
  CHECK(build_coeff_table(7, 3, 1, one) == build_coeff_table(7, 3, 1, four));
}

TEST_CASE("node budget is enforced") {
  EnumerationOptions tiny;
  tiny.node_budget = 1000;
  CHECK_THROWS_AS(build_coeff_table(10, 2, 1, tiny), BudgetError);
}
