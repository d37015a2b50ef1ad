#pragma once

#include "dov/bodies.hpp"
#include "dov/functions.hpp"
#include "dov/grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dov {

/// Hypothesis checks for the discrete Orlicz-Minkowski problem. Hard
/// violations throw ValidationError; the asymptotic probes only warn.
struct ProblemCheck {
  double margin = 0.0;                 // hemisphere margin of mu
  GtSign gt_sign = GtSign::Mixed;
  double small_t[2] = {0.0, 0.0};      // int_{Sigma_eps(v)} G(t,.) at t = 1e-3, 1e-6
  double large_t[2] = {0.0, 0.0};      // int G(t,.) at t = 1e3, 1e6
  bool small_t_grows = false;
  bool large_t_shrinks = false;
  bool psi_diverges = false;           // user claim
  double psi_probe = 0.0;              // int_1^{1e6} psi(s)/s ds
  std::vector<std::string> warnings;
};

ProblemCheck validate_problem(const DiscreteMeasure& mu, const GFn& G, const PsiFn& psi, const SphereGrid& grid);

/// r0 with V_G(r0 B) = target (G_t < 0).
double initial_scale(const GFn& G, const SphereGrid& grid, double target);

struct ValueGrad {
  double value = 0.0;
  Vec grad;
};

/// F(h) = (1/|mu|) sum c_i phi(h_i), gradient c_i phi'(h_i)/|mu|.
ValueGrad objective_F(const Vec& h, const DiscreteMeasure& mu, const OrliczFn& phi);

struct ConstraintValue {
  double value = 0.0;
  Vec grad;                                // dV/dh_i = (1/h_i) int_{R_i} rho G_t
  Vec region_integral;                     // int_{R_i} rho G_t(rho, u) du
  Vec rho;                                 // rho of [h] at the nodes
  std::vector<Eigen::Index> empty_regions;
};

/// V_G of the Wulff shape [h] on fixed normals, with gradient.
ConstraintValue constraint_V(const Vec& h, const Mat& normals, const GFn& G, const SphereGrid& grid);

struct SolveOptions {
  double tol = 1e-6;
  int max_iterations = 5000;
  double armijo = 1e-4;
  double backtrack = 0.5;
  double max_relative_step = 0.1;
  std::optional<Vec> warm_start;
};

struct TraceEntry {
  int iteration = 0;
  double objective = 0.0;
  double gap = 0.0;
  double max_residual = 0.0;
};

struct SolveReport {
  HPolytope polytope;
  double tau = 0.0;
  double objective = 0.0;
  double constraint_gap = 0.0;
  Vec residuals;                 // |c_i/|mu| - C_i / sum C|
  Vec curvature;                 // C_i on the solve grid
  int iterations = 0;
  bool converged = false;
  std::string status;            // converged | iteration cap | stagnated
  double r0 = 0.0;
  std::vector<Eigen::Index> unsatisfiable;  // atoms whose facet region is empty
  std::vector<TraceEntry> trace;
  ProblemCheck check;
  std::string grid_id;
};

/// Minimises F subject to V_G([h]) = |mu| by projected gradient in the
/// coordinates y = phi(h), restoring the constraint by radial rescaling.
SolveReport solve_minkowski(const DiscreteMeasure& mu, const GFn& G, const PsiFn& psi, const SphereGrid& grid,
                            const SolveOptions& opts = {});

/// Curvature atoms C_i of [h] (ties split equally) and the ratio residuals.
struct RatioState {
  Vec curvature;
  Vec residuals;
  double total = 0.0;
  double tau = 0.0;
};
RatioState ratio_state(const Vec& h, const DiscreteMeasure& mu, const GFn& G, const PsiFn& psi,
                       const SphereGrid& grid);

struct SolutionCheck {
  double max_residual = 0.0;
  double tau = 0.0;
  double tau_drift = 0.0;  // relative to the report
};

/// Recomputes the ratio residuals and tau of a report on `grid`.
SolutionCheck verify_solution(const SolveReport& report, const DiscreteMeasure& mu, const GFn& G,
                              const PsiFn& psi, const SphereGrid& grid);

}  // namespace dov
