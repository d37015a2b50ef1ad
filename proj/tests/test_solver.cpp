#include "doctest.h"

#include "dov/solver.hpp"
#include "dov/verify.hpp"

#include "oracles.hpp"

using namespace dov;

namespace {
DiscreteMeasure atoms(const std::vector<double>& angles) {
  DiscreteMeasure mu;
  mu.normals.resize(2, static_cast<Eigen::Index>(angles.size()));
  for (std::size_t i = 0; i < angles.size(); ++i) mu.normals.col(i) << std::cos(angles[i]), std::sin(angles[i]);
  mu.weights = Vec::Ones(static_cast<Eigen::Index>(angles.size()));
  return mu;
}
const GFn kInvT = make_G_expr(ScalarExpr::parse("1/t"));
}  // namespace

TEST_CASE("hypotheses are validated") {
  const SphereGrid g = build_grid(2, "circle:512");
  const DiscreteMeasure half = atoms({0.0, 1.0});
  CHECK_THROWS_AS(validate_problem(half, kInvT, make_power_psi(1.0), g), ValidationError);
  const DiscreteMeasure sq = atoms({0.0, oracle::pi / 2, oracle::pi, 3 * oracle::pi / 2});
  CHECK_THROWS_AS(validate_problem(sq, make_G_qQ(2.0, ball(2)), make_power_psi(1.0), g), ValidationError);
  const ProblemCheck c = validate_problem(sq, kInvT, make_power_psi(1.0), g);
  CHECK(c.margin == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(c.gt_sign == GtSign::Negative);
  CHECK(c.small_t_grows);
  CHECK(c.large_t_shrinks);
}

TEST_CASE("initial scale") {
  const SphereGrid g = build_grid(2, "circle:512");
  CHECK(initial_scale(kInvT, g, 4.0) == doctest::Approx(2 * oracle::pi / 4.0).epsilon(1e-9));
}

TEST_CASE("objective") {
  const DiscreteMeasure mu = atoms({0.0, 2.0, 4.0});
  const Vec h = (Vec(3) << 1.0, 2.0, 3.0).finished();
  const ValueGrad f = objective_F(h, mu, make_log_phi());
  CHECK(f.value == doctest::Approx(std::log(6.0) / 3.0));
  CHECK(f.grad[1] == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("constraint gradient matches differences") {
  const SphereGrid g = build_grid(2, "circle:2048");
  auto rng = trial_rng(31, 0, 0);
  const HPolytope P = random_polygon(rng);
  const ConstraintValue cv = constraint_V(P.supports, P.normals, kInvT, g);
  for (Eigen::Index i = 0; i < P.facets(); ++i) {
    const double d = 1e-7;
    Vec hp = P.supports, hm = P.supports;
    hp[i] += d;
    hm[i] -= d;
    const double fd = (constraint_V(hp, P.normals, kInvT, g).value - constraint_V(hm, P.normals, kInvT, g).value) / (2 * d);
    CHECK(cv.grad[i] == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("square and triangle") {
  const SphereGrid g = build_grid(2, "circle:1024");
  const DiscreteMeasure sq = atoms({0.0, oracle::pi / 2, oracle::pi, 3 * oracle::pi / 2});
  const SolveReport r = solve_minkowski(sq, kInvT, make_power_psi(1.0), g);
  CHECK(r.converged);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(r.polytope.supports[i] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
  CHECK(r.residuals.maxCoeff() < 1e-6);
  CHECK(r.grid_id == "circle:1024");

  const SphereGrid g3 = build_grid(2, "circle:1026");
  const DiscreteMeasure tri = atoms({oracle::pi / 2, oracle::pi / 2 + 2 * oracle::pi / 3, oracle::pi / 2 + 4 * oracle::pi / 3});
  const SolveReport t = solve_minkowski(tri, kInvT, make_power_psi(1.0), g3);
  CHECK(t.converged);
  CHECK(t.polytope.supports.maxCoeff() - t.polytope.supports.minCoeff() < 1e-6);
  const SolutionCheck chk = verify_solution(t, tri, kInvT, make_power_psi(1.0), build_grid(2, "circle:2052"));
  CHECK(chk.max_residual < 1e-5);
  CHECK(chk.tau_drift < 1e-5);
}

TEST_CASE("unequal weights move the supports") {
  const SphereGrid g = build_grid(2, "circle:2048");
  DiscreteMeasure mu = atoms({0.0, oracle::pi / 2, oracle::pi, 3 * oracle::pi / 2});
  mu.weights << 2.0, 1.0, 2.0, 1.0;
  SolveOptions opts;
  opts.tol = 1e-3;
  const SolveReport r = solve_minkowski(mu, kInvT, make_power_psi(1.0), g, opts);
  CHECK(r.iterations > 0);
  CHECK(r.residuals.maxCoeff() < 1e-2);
  CHECK(r.polytope.supports[0] == doctest::Approx(r.polytope.supports[2]).epsilon(1e-6));
  CHECK(r.polytope.supports[0] != doctest::Approx(r.polytope.supports[1]).epsilon(1e-3));
}
