#include "doctest.h"

#include "dov/verify.hpp"

#include "oracles.hpp"

#include <algorithm>

using namespace dov;

namespace {
bool has_flag(const CheckResult& r, const std::string& prefix) {
  return std::any_of(r.flags.begin(), r.flags.end(), [&](const std::string& f) { return f.rfind(prefix, 0) == 0; });
}
}  // namespace

TEST_CASE("shape and monotonicity sampling") {
  CHECK(sample_shape([](double t) { return t * t; }) == Shape::StrictlyConvex);
  CHECK(sample_shape([](double t) { return 2 * t + 1; }) == Shape::Affine);
  CHECK(is_concave(sample_shape([](double t) { return std::log(t); })));
  CHECK(sample_shape([](double t) { return std::sin(t); }) == Shape::Mixed);
  CHECK(sample_monotone([](double t) { return -t; }) == Monotone::Decreasing);
  const SphereGrid g = build_grid(2, "circle:64");
  CHECK(sample_Gq_monotone(make_G_qQ(2.0, ball(2)), 2.0, g) == Monotone::Constant);
  CHECK(sample_Gq_monotone(make_G_expr(ScalarExpr::parse("t^3")), 2.0, g) == Monotone::Increasing);
}

TEST_CASE("ball/ball radial variation gives 8 pi") {
  const GridPtr g = make_grid(3, "sphere:32x64");
  const OrliczFn sq = make_power_phi(2.0);
  const CheckResult r = check_variational_radial(ball(3), ball(3, 2.0), sq, sq, make_G_expr(ScalarExpr::parse("t^3/3")), g);
  CHECK(r.status == CheckStatus::Pass);
  CHECK(r.rhs == doctest::Approx(8 * oracle::pi).epsilon(1e-12));
  CHECK(r.lhs == doctest::Approx(8 * oracle::pi).epsilon(1e-6));
}

TEST_CASE("hat variation with log phi on the ball") {
  const GridPtr g = make_grid(2, "circle:512");
  const CheckResult r =
      check_variational_hat(ball(2), Vec::Ones(g->size()), make_log_phi(), make_G_qQ(2.0, ball(2)), g);
  // d/de (1/2) int e^{2e} = 2 pi
  CHECK(r.status == CheckStatus::Pass);
  CHECK(r.rhs == doctest::Approx(2 * oracle::pi).epsilon(1e-12));
  const CheckResult z = check_variational_hat(ball(2), Vec::Zero(g->size()), make_log_phi(), make_G_qQ(2.0, ball(2)), g);
  CHECK(z.status == CheckStatus::Pass);
  CHECK(std::abs(z.lhs) < 1e-12);
}

TEST_CASE("dilatates are equality cases") {
  const GridPtr g = make_grid(2, "circle:512");
  double ratio = 0.0;
  CHECK(dilatates(cube(2), cube(2, 1.5), *g, &ratio));
  CHECK(ratio == doctest::Approx(1.5));
  CHECK_FALSE(dilatates(cube(2), ball(2), *g));
  const CheckResult r = check_dual_minkowski(cube(2), cube(2, 1.5), ball(2), 1.0, scalar(make_power_phi(2.0)), g);
  CHECK(r.status == CheckStatus::Pass);
  CHECK(has_flag(r, "equality case"));
  CHECK(check_minkowski_first(ball(2), ellipsoid((Vec(2) << 2.0, 0.5).finished()), g).status == CheckStatus::Pass);
}

TEST_CASE("uniqueness probe with a self-similar phi is inconclusive with a dilation flag") {
  const GridPtr g = make_grid(2, "circle:512");
  const CheckResult r = check_uniqueness_probe(cube(2), cube(2, 1.1), 2.0, scalar(make_self_similar_phi(2.0, 1.1)),
                                               ball(2), g);
  CHECK(r.status == CheckStatus::Inconclusive);
  CHECK(has_flag(r, "dilation r="));
  const CheckResult p = check_uniqueness_probe(cube(2), cube(2, 1.1), 2.0, scalar(make_power_phi(3.0)), ball(2), g);
  CHECK(p.status == CheckStatus::Pass);
}

TEST_CASE("rotation invariance of a suite check") {
  const GridPtr g = make_grid(2, "circle:1024");
  auto rng = trial_rng(5, 0, 0);
  const HPolytope P = random_polygon(rng);
  const CheckResult a = check_minkowski_first(StarBody(P), ball(2), g);
  const CheckResult b = check_minkowski_first(StarBody(rotate2(P, 0.37)), ball(2), g);
  CHECK(a.status == CheckStatus::Pass);
  CHECK(b.status == CheckStatus::Pass);
  CHECK(a.lhs == doctest::Approx(b.lhs).epsilon(1e-3));
}

TEST_CASE("suites") {
  const GridPtr g = make_grid(2, "circle:512");
  CHECK(run_suite(1, 0, g, {"all"}).checks.empty());
  const SuiteReport a = run_suite(3, 2, g, {"all"});
  const SuiteReport b = run_suite(3, 2, g, {"all"});
  CHECK(a.count(CheckStatus::Fail) == 0);
  CHECK(dump17(report_json(a)) == dump17(report_json(b)));
  CHECK(report_csv(a).find("name") != std::string::npos);
  CHECK_THROWS_AS(run_suite(1, 1, g, {"nonsense"}), ValidationError);
  CHECK(suite_names().size() == 4);
}

TEST_CASE("trial streams are independent of each other and reproducible") {
  auto a = trial_rng(9, 3, 0), b = trial_rng(9, 3, 0), c = trial_rng(9, 4, 0);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
}
