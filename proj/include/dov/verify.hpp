#pragma once

#include "dov/bodies.hpp"
#include "dov/combine.hpp"
#include "dov/finite_diff.hpp"
#include "dov/functions.hpp"
#include "dov/grid.hpp"
#include "dov/io.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace dov {

enum class CheckStatus { Pass, Fail, Inconclusive };
std::string to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Inconclusive;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;        // relative gap for identities, signed slack for inequalities
  double tolerance = 0.0;
  double order = 0.0;      // observed FD order (0 when not a FD check)
  int trial = -1;
  std::string note;
  std::vector<std::string> flags;
  Json witness;            // inputs, filled on failure
};

struct VerifyConfig {
  double fd_tol = 1e-3;          // relative gap for FD checks
  double equality_tol = 1e-6;    // relative, dilatate equality cases
  double slack = 1e-9;           // inequalities may fail by at most this (absolute)
  double probe_tol = 1e-9;       // relative, equality of mixed volumes in the uniqueness probe
  double distance_tol = 1e-6;    // relative radial distance counted as K = L
};

/// Sampled shape of a function on (0, inf)^m from midpoint second differences.
enum class Shape { StrictlyConvex, Convex, Affine, Concave, StrictlyConcave, Mixed };
std::string to_string(Shape s);
Shape sample_shape(const std::function<double(const Vec&)>& f, int m, std::uint64_t seed = 1);
Shape sample_shape(const std::function<double(double)>& f, std::uint64_t seed = 1);
bool is_convex(Shape s);
bool is_concave(Shape s);

enum class Monotone { Increasing, Decreasing, Constant, Mixed };
std::string to_string(Monotone m);
/// Monotonicity of t -> G(t,u)/t^q for each fixed u (sampled nodes, log ladder in t).
Monotone sample_Gq_monotone(const GFn& G, double q, const SphereGrid& grid);
Monotone sample_monotone(const std::function<double(double)>& f);

// Variational formulas

CheckResult check_variational_radial(const StarBody& K, const StarBody& L, const OrliczFn& phi1,
                                     const OrliczFn& phi2, const GFn& G, const GridPtr& grid,
                                     const VerifyConfig& cfg = {});
/// g sampled at the grid nodes.
CheckResult check_variational_hat(const StarBody& K, const Vec& g, const OrliczFn& phi, const GFn& G,
                                  const GridPtr& grid, const VerifyConfig& cfg = {});
/// g per facet normal of h0.
CheckResult check_variational_wulff(const HPolytope& h0, const Vec& g, const OrliczFn& phi, const GFn& G,
                                    const GridPtr& grid, const VerifyConfig& cfg = {});
/// h1, h2 supports on the normals of h1.
CheckResult check_variational_two(const HPolytope& h1, const Vec& h2, const OrliczFn& phi1, const OrliczFn& phi2,
                                  const GFn& G, const GridPtr& grid, const VerifyConfig& cfg = {});

// Inequalities

CheckResult check_dual_bm(const std::vector<StarBody>& bodies, const MultiPhi& phi, const GFn& G, double q,
                          const GridPtr& grid, const VerifyConfig& cfg = {});

struct ScalarFn {
  std::function<double(double)> f;
  std::string label;
};
ScalarFn scalar(const OrliczFn& phi);

CheckResult check_dual_minkowski(const StarBody& K, const StarBody& L, const StarBody& Q, double q,
                                 const ScalarFn& phi, const GridPtr& grid, const VerifyConfig& cfg = {});
CheckResult check_thm2(const StarBody& K, const StarBody& L, const StarBody& Q, const ScalarFn& phi,
                       const ScalarFn& psi, const GridPtr& grid, const VerifyConfig& cfg = {});
/// V_1(K,L) >= V_n(K)^{(n-1)/n} V_n(L)^{1/n}
CheckResult check_minkowski_first(const StarBody& K, const StarBody& L, const GridPtr& grid,
                                  const VerifyConfig& cfg = {});

/// Family M in {K, L, aK, aL : a in ladder}.
CheckResult check_uniqueness_probe(const StarBody& K, const StarBody& L, double q, const ScalarFn& phi,
                                   const StarBody& Q, const GridPtr& grid, const VerifyConfig& cfg = {},
                                   const std::vector<double>& ladder = {0.5, 0.8, 1.25, 2.0});

/// rho_L / rho_K constant on the grid (within 1e-12 relative); sets ratio.
bool dilatates(const StarBody& K, const StarBody& L, const SphereGrid& grid, double* ratio = nullptr);

// Random inputs

/// Stream for (seed, trial, stream id); independent of thread count.
std::mt19937_64 trial_rng(std::uint64_t seed, int trial, int stream);
/// Jittered regular fan of facets with supports in [0.6, 1.4].
HPolytope random_polygon(std::mt19937_64& rng, int min_facets = 5, int max_facets = 9);
/// n = 2: random_polygon; n = 3: fixed 14-normal fan (cube + octahedron
/// directions) with random supports in [0.7, 1.3].
HPolytope random_polytope(std::mt19937_64& rng, int n);
/// Axis-parallel ellipsoid with semiaxes in [0.6, 1.6].
StarBody random_ellipsoid(std::mt19937_64& rng, int n);
HPolytope rotate2(const HPolytope& P, double angle);

// Suites

struct SuiteReport {
  std::uint64_t seed = 0;
  int trials = 0;
  std::string grid_id;
  int dim = 0;
  std::vector<std::string> suites;
  std::vector<CheckResult> checks;

  int count(CheckStatus s) const;
};

/// Suites: variational, inequalities, uniqueness, valuation; "all" runs every one.
std::vector<std::string> suite_names();
SuiteReport run_suite(std::uint64_t seed, int trials, const GridPtr& grid, const std::vector<std::string>& suites,
                      const VerifyConfig& cfg = {});

Json to_json(const CheckResult& r);
Json report_json(const SuiteReport& rep);
std::string report_csv(const SuiteReport& rep);

}  // namespace dov
