#include "doctest.h"

#include "dov/combine.hpp"
#include "dov/dualvol.hpp"

#include <cmath>

using namespace dov;

TEST_CASE("implicit combination for powers has a closed form") {
  const Vec fK = (Vec(3) << 1.0, 2.0, 0.5).finished(), fL = (Vec(3) << 3.0, 1.0, 0.5).finished();
  const OrliczFn p2 = make_power_phi(2.0);
  const Vec s = implicit_combo(fK, fL, p2, p2, 0.3);
  for (int j = 0; j < 3; ++j) CHECK(s[j] == doctest::Approx(std::sqrt(fK[j] * fK[j] + 0.3 * fL[j] * fL[j])));
  const OrliczFn m1 = make_power_phi(-1.0);
  const Vec r = implicit_combo(fK, fL, m1, m1, 2.0);
  for (int j = 0; j < 3; ++j) CHECK(1.0 / r[j] == doctest::Approx(1.0 / fK[j] + 2.0 / fL[j]));
  CHECK_THROWS_AS(implicit_combo(fK, fL, p2, m1, 1.0), ValidationError);
  CHECK_THROWS_AS(implicit_combo(fK, fL, p2, p2, -1.0), ValidationError);
}

TEST_CASE("hat combination") {
  const Vec f0 = (Vec(2) << 1.0, 2.0).finished(), g = (Vec(2) << 0.5, -1.0).finished();
  const Vec h = hat_combo(f0, g, make_log_phi(), 0.1);
  CHECK(h[0] == doctest::Approx(std::exp(0.05)));
  CHECK(h[1] == doctest::Approx(2.0 * std::exp(-0.1)));
  const Vec q = hat_combo(f0, g, make_power_phi(2.0), 0.1);
  CHECK(q[1] == doctest::Approx(std::sqrt(3.9)));
}

TEST_CASE("radial orlicz sum of balls") {
  const GridPtr g = make_grid(2, "circle:64");
  const StarBody s = radial_orlicz_sum({ball(2, 3.0), ball(2, 4.0)}, power_sum_phi(2.0), g);
  Vec u(2);
  u << 0.6, 0.8;
  CHECK(radial(s, u) == doctest::Approx(5.0));
  const StarBody h = radial_orlicz_sum({ball(2, 1.0), ball(2, 1.0)}, power_sum_phi(-1.0), g);
  CHECK(radial(h, u) == doctest::Approx(0.5));
}

TEST_CASE("radial combination of a body with itself is a dilate") {
  const GridPtr g = make_grid(2, "circle:128");
  const OrliczFn p3 = make_power_phi(3.0);
  const StarBody c = radial_combo(cube(2), cube(2), p3, p3, 7.0, g);
  CHECK(volume(c, *g) == doctest::Approx(4.0 * volume(cube(2), *g)).epsilon(1e-10));
}

TEST_CASE("solve_decreasing") {
  CHECK(solve_decreasing([](double s) { return 10.0 / s - 1.0; }, 1.0) == doctest::Approx(10.0));
  CHECK(solve_decreasing([](double s) { return std::exp(-s) - 0.5; }, 100.0) == doctest::Approx(std::log(2.0)));
}
