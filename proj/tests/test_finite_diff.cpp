#include "doctest.h"

#include "dov/finite_diff.hpp"

#include <cmath>

using namespace dov;

TEST_CASE("decade ladder") {
  const auto s = decade_ladder(2, 5);
  REQUIRE(s.size() == 4);
  CHECK(s.front() == doctest::Approx(1e-2));
  CHECK(s.back() == doctest::Approx(1e-5));
}

TEST_CASE("one sided difference of exp") {
  const auto r = richardson_one_sided([](double e) { return std::exp(e); }, decade_ladder(1, 4));
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.order == doctest::Approx(1.0).epsilon(0.05));
  CHECK(r.raw.size() == 4);
}

TEST_CASE("centered difference of sin") {
  const auto r = richardson_centered([](double e) { return std::sin(0.7 + e); }, decade_ladder(1, 3));
  CHECK(r.value == doctest::Approx(std::cos(0.7)).epsilon(1e-10));
  CHECK(r.order == doctest::Approx(2.0).epsilon(0.05));
  CHECK(centered_difference([](double e) { return e * e + 3 * e; }, 1e-3) == doctest::Approx(3.0));
}

TEST_CASE("linear functions give exact differences") {
  const auto r = richardson_one_sided([](double e) { return 2.0 + 5.0 * e; }, decade_ladder(2, 4));
  CHECK(r.value == doctest::Approx(5.0).epsilon(1e-12));
}
