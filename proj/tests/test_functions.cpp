#include "doctest.h"

#include "dov/bodies.hpp"
#include "dov/functions.hpp"

#include <cmath>

using namespace dov;

TEST_CASE("power phi") {
  const OrliczFn p2 = make_power_phi(2.0), m1 = make_power_phi(-1.0);
  CHECK(p2.cls == OrliczClass::I);
  CHECK(m1.cls == OrliczClass::D);
  CHECK(p2(3.0) == doctest::Approx(9.0));
  CHECK(p2.deriv(3.0) == doctest::Approx(6.0));
  CHECK(p2.inverse(9.0) == doctest::Approx(3.0));
  CHECK(m1.inverse(m1(0.37)) == doctest::Approx(0.37));
  CHECK_THROWS_AS(make_power_phi(0.0), ValidationError);
}

TEST_CASE("log phi lies in J with a = -inf") {
  const OrliczFn l = make_log_phi();
  CHECK(l.cls == OrliczClass::J);
  CHECK(std::isinf(l.a));
  CHECK(l.inverse(1.0) == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("phi from psi") {
  const OrliczFn f = phi_from_psi(make_power_psi(2.0));
  CHECK(f(3.0) == doctest::Approx((9.0 - 1.0) / 2.0));
  CHECK(f.cls == OrliczClass::J);
  CHECK(f.a == doctest::Approx(-0.5));
  // psi = t phi'
  CHECK(3.0 * f.deriv(3.0) == doctest::Approx(9.0));
  const OrliczFn g = phi_from_psi(make_expr_psi(ScalarExpr::parse("t^2"), true));
  for (double t : {0.5, 1.0, 2.5}) CHECK(g(t) == doctest::Approx(f(t)).epsilon(1e-8));
}

TEST_CASE("expression phi is classified by sampling") {
  CHECK(make_expr_phi(ScalarExpr::parse("t^3")).cls == OrliczClass::I);
  CHECK(make_expr_phi(ScalarExpr::parse("1/t")).cls == OrliczClass::D);
  CHECK(make_expr_phi(ScalarExpr::parse("t + log(t)")).cls == OrliczClass::J);
}

TEST_CASE("self-similar phi scales like t^n but is not a power") {
  const OrliczFn f = make_self_similar_phi(2.0, 1.1);
  for (double t : {0.3, 1.03, 1.7, 4.2}) {
    CHECK(f(1.1 * t) == doctest::Approx(1.21 * f(t)).epsilon(1e-12));
  }
  CHECK(f(1.05) < 1.05 * 1.05);
  CHECK(f(1.0) == doctest::Approx(1.0));
  CHECK(f.increasing);
}

TEST_CASE("psi divergence") {
  CHECK(make_power_psi(0.5).diverges);
  CHECK(make_power_psi(0.0).diverges);
  CHECK_FALSE(make_power_psi(-0.5).diverges);
  CHECK(psi_divergence_probe(make_power_psi(-1.0), 1e6) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("G builders") {
  const StarBody B = ball(2);
  Vec u(2);
  u << 0.6, 0.8;
  const GFn G = make_G_qQ(2.0, B);
  CHECK(G(3.0, u) == doctest::Approx(4.5));
  CHECK(G.deriv_t(3.0, u) == doctest::Approx(3.0));
  CHECK(G.sign == GtSign::Positive);
  const GFn Ge = make_G_expr(ScalarExpr::parse("1/t"));
  CHECK(Ge.sign == GtSign::Negative);
  CHECK(Ge.deriv_t(2.0, u) == doctest::Approx(-0.25));
  const GFn Gl = make_G_log(B);
  CHECK(Gl(std::exp(2.0), u) == doctest::Approx(1.0));
}

TEST_CASE("density G matches the closed form") {
  const StarBody B = ball(3);
  Vec u(3);
  u << 0.0, 0.6, 0.8;
  // phi(x) = 2 |x|^{q-3}: tail integral 2 int_t^inf r^{q-1} dr = -2 t^q / q for q < 0
  const GFn tail = make_G_from_density(power_density(3, 2.0, -1.5, B), DensitySide::Tail);
  CHECK(tail(0.7, u) == doctest::Approx(2.0 * std::pow(0.7, -1.5) / 1.5).epsilon(1e-10));
  const GFn head = make_G_from_density(power_density(3, 1.0, 2.0, B), DensitySide::Head);
  CHECK(head(1.3, u) == doctest::Approx(1.69 / 2.0).epsilon(1e-10));
  // numerical path through a radial expression density
  const GFn num = make_G_from_density(expr_density(3, ScalarExpr::parse("exp(-t)")), DensitySide::Tail);
  const double t = 0.8;  // int_t^inf e^{-r} r^2 dr
  CHECK(num(t, u) == doctest::Approx(std::exp(-t) * (t * t + 2 * t + 2)).epsilon(1e-8));
  CHECK(num.deriv_t(t, u) == doctest::Approx(-std::exp(-t) * t * t).epsilon(1e-10));
}

TEST_CASE("sampled Gt sign") {
  const Mat dirs = Mat::Identity(2, 2);
  CHECK(sample_gt_sign(make_G_expr(ScalarExpr::parse("t^2")), dirs) == GtSign::Positive);
  CHECK(sample_gt_sign(make_G_expr(ScalarExpr::parse("(t-1)^2")), dirs) == GtSign::Mixed);
}
