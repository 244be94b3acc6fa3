#include <doctest.h>

#include <cmath>

#include "prudent/errors.hpp"
#include "prudent/lattice.hpp"
#include "prudent/rational.hpp"

using namespace prudent;

TEST_CASE("seeing along the step direction") {
  const UnitStep e1{0, +1};
  CHECK(sees({1, 0}, e1, {3, 0}));
  CHECK(sees({1, 0}, e1, {1, 0}));
  CHECK_FALSE(sees({1, 0}, e1, {0, 0}));
  CHECK_FALSE(sees({1, 0}, e1, {3, 1}));
}

TEST_CASE("axis relation") {
  CHECK(bot({2, 0, 0}, {5, 0, 0}));
  CHECK_FALSE(bot({1, 1, 0}, {0, 0, 0}));
  CHECK(bot({4, -2}, {4, -2}));
}

TEST_CASE("axis indicator carries weight 1/d off the diagonal") {
  CHECK(indicator_bot({3, 0}, {0, 0}) == Rational(1, 2));
  CHECK(indicator_bot({3, 0}, {3, 0}) == 0);
  CHECK(indicator_bot({1, 1, 0}, {0, 0, 0}) == 0);
  CHECK(indicator_bot({0, 0, -4}, {0, 0, 0}) == Rational(1, 3));
}

TEST_CASE("smoothed indicator") {
  CHECK(indicator_bot_smoothed({0, 0}, 4.0) == 0.0);
  CHECK(indicator_bot_smoothed({2, 0}, 4.0) == doctest::Approx(0.5 * std::exp(-1.0)));
  CHECK(indicator_bot_smoothed({1, 0}, 1e12) == doctest::Approx(0.5));
  CHECK(indicator_bot_smoothed({1, 1}, 4.0) == 0.0);
}

TEST_CASE("segment indicator") {
  CHECK(segment_indicator({0, 0}, {3, 0}, {1, 0}) == Rational(1, 2));
  CHECK(segment_indicator({0, 0}, {3, 0}, {2, 0}) == 0);
  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y) CHECK(segment_indicator({0, 0}, {1, 1}, {x, y}) == 0);
  // Summing over x recovers the axis indicator.
  Rational sum = 0;
  for (int x = -5; x <= 5; ++x)
    for (int y = -5; y <= 5; ++y)
      for (int z = -5; z <= 5; ++z) sum += segment_indicator({0, 0, 0}, {0, -4, 0}, {x, y, z});
  CHECK(sum == indicator_bot({0, 0, 0}, {0, -4, 0}));
  CHECK(sum == Rational(1, 3));
}

TEST_CASE("step distribution") {
  CHECK(step_distribution({1, 0}) == Rational(1, 4));
  CHECK(step_distribution({0, 0}) == 0);
  CHECK(step_distribution({1, 1}) == 0);
  for (int d = 1; d <= 4; ++d) {
    Rational total = 0;
    for (int c = 0; c < 2 * d; ++c) total += step_distribution(UnitStep::from_code(c).vector(d));
    CHECK(total == 1);
  }
}

TEST_CASE("dimension mismatch is a contract error") {
  CHECK_THROWS_AS(bot({1, 0}, {1, 0, 0}), ContractError);
  CHECK_THROWS_AS(sees({0, 0}, UnitStep{2, 1}, {0, 0}), ContractError);
}

TEST_CASE("rational parsing and rendering") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-2") == -2);
  CHECK(to_string(Rational(4)) == "4/1");
  CHECK(to_string(Rational(0)) == "0/1");
  CHECK_THROWS_AS(parse_rational("1/0"), ContractError);
  CHECK_THROWS_AS(parse_rational("abc"), ContractError);
}

TEST_CASE("step codes round trip") {
  for (int c = 0; c < 2 * kMaxDim; ++c) CHECK(UnitStep::from_code(c).code() == c);
  CHECK(step_between({0, 0}, {0, -1}) == UnitStep{1, -1});
}
