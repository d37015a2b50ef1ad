#include "doctest.h"

#include "dov/dualvol.hpp"
#include "dov/verify.hpp"

#include "oracles.hpp"

using namespace dov;

TEST_CASE("ball volumes") {
  const SphereGrid c = build_grid(2, "circle:512"), s = build_grid(3, "sphere:32x64");
  CHECK(volume(ball(2, 1.5), c) == doctest::Approx(oracle::ball_volume(2, 1.5)).epsilon(1e-13));
  CHECK(volume(ball(3, 0.5), s) == doctest::Approx(oracle::ball_volume(3, 0.5)).epsilon(1e-13));
  CHECK(volume(ellipsoid((Vec(3) << 1, 2, 3).finished()), s) ==
        doctest::Approx(4 * oracle::pi * 2).epsilon(1e-6));
}

TEST_CASE("polygon area converges to the shoelace value") {
  const SphereGrid g = build_grid(2, "circle:65536");
  for (int t = 0; t < 5; ++t) {
    auto rng = trial_rng(11, t, 0);
    const HPolytope P = random_polygon(rng);
    CHECK(volume(StarBody(P), g) == doctest::Approx(oracle::polygon_area(P.normals, P.supports)).epsilon(1e-5));
  }
}

TEST_CASE("dual volume homogeneity and refinement estimate") {
  const SphereGrid g = build_grid(2, "circle:1024");
  auto rng = trial_rng(12, 0, 0);
  const StarBody K(random_polygon(rng));
  const StarBody Q = random_ellipsoid(rng, 2);
  for (double q : {-2.0, 0.5, 3.0}) {
    CHECK(dual_volume_q(scale(K, 1.7), Q, q, g) == doctest::Approx(std::pow(1.7, q) * dual_volume_q(K, Q, q, g)));
  }
  // q = n gives the volume whatever Q is
  CHECK(dual_volume_q(K, Q, 2.0, g) == doctest::Approx(volume(K, g)).epsilon(1e-13));
  const VolumeResult r = dual_volume(make_G_qQ(2.0, ball(2)), ball(2), g);
  CHECK(r.value == doctest::Approx(oracle::pi));
  CHECK(r.estimated_error < 1e-12);
  CHECK(r.grid_id == "circle:1024");
}

TEST_CASE("surface area measure of the square") {
  const SphereGrid g = build_grid(2, "circle:2048");
  const DiscreteMeasure S = surface_area_measure(*cube(2).polytope(), g);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(S.weights[i] == doctest::Approx(2.0).epsilon(1e-4));
  CHECK((S.normals * S.weights).norm() < 1e-12);
}

TEST_CASE("orlicz mixed volume reduces to the volume for phi = t and L = K") {
  const SphereGrid g = build_grid(2, "circle:4096");
  const StarBody body = cube(2);
  const HPolytope& sq = *body.polytope();
  CHECK(orlicz_mixed_volume(sq, cube(2), [](double t) { return t; }, g) ==
        doctest::Approx(volume(cube(2), g)).epsilon(1e-12));
  // h_L / h_K = 2 for L = 2K
  CHECK(orlicz_mixed_volume(sq, cube(2, 2.0), [](double t) { return t * t; }, g) ==
        doctest::Approx(4.0 * volume(cube(2), g)).epsilon(1e-12));
  CHECK(v1_radial(cube(2), cube(2, 3.0), g) == doctest::Approx(3.0 * volume(cube(2), g)).epsilon(1e-12));
}

TEST_CASE("mixed quantities on balls") {
  const SphereGrid g = build_grid(3, "sphere:16x32");
  const double v = oracle::ball_volume(3);
  CHECK(mixed_q_phi(ball(3), ball(3, 2.0), ball(3), 1.5, [](double t) { return t; }, g) ==
        doctest::Approx(2.0 * v).epsilon(1e-12));
  CHECK(mixed_pq(ball(3, 2.0), ball(3, 3.0), ball(3), 1.0, 2.0, g) ==
        doctest::Approx(1.5 * 4.0 * v).epsilon(1e-12));
}

TEST_CASE("dual entropy") {
  const SphereGrid g = build_grid(2, "circle:256");
  CHECK(dual_entropy(ball(2), std::nullopt, g) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(dual_entropy(ball(2, std::exp(1.0)), std::nullopt, g) == doctest::Approx(oracle::pi));
  CHECK(dual_entropy(ball(2, 2.0), ball(2, 2.0), g) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("non-finite integrands are rejected") {
  const SphereGrid g = build_grid(2, "circle:64");
  const GFn bad = make_G_expr(ScalarExpr::parse("sqrt(2-t)"));
  CHECK_THROWS_AS(dual_volume_value(bad, ball(2, 3.0), g), NumericalError);
}
