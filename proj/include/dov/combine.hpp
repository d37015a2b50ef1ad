#pragma once

#include "dov/bodies.hpp"
#include "dov/functions.hpp"
#include "dov/grid.hpp"

#include <functional>
#include <string>
#include <vector>

namespace dov {

/// Root of a continuous function that is strictly decreasing in s > 0, by
/// bisection on a bracket grown geometrically (at most 60 doublings) from s0.
double solve_decreasing(const std::function<double(double)>& F, double s0);

/// Per node the unique s > 0 with phi1(fK/s) + eps phi2(fL/s) = 1.
/// phi1, phi2 both in I or both in D; eps > 0.
Vec implicit_combo(const Vec& fK, const Vec& fL, const OrliczFn& phi1, const OrliczFn& phi2, double eps);

/// Per node phi^{-1}(phi(f0) + eps g). phi in J_a; eps may be negative.
Vec hat_combo(const Vec& f0, const Vec& g, const OrliczFn& phi, double eps);

/// Radial Orlicz combination of K and L as a sampled body on `grid`.
StarBody radial_combo(const StarBody& K, const StarBody& L, const OrliczFn& phi1, const OrliczFn& phi2,
                      double eps, const GridPtr& grid);

/// m-variate function for the radial Orlicz sum. PhiBar: increasing in each
/// argument, phi(o)=0, phi(e_j)=1. Psi: decreasing in each argument.
struct MultiPhi {
  enum class Kind { PhiBar, Psi };
  std::function<double(const Vec&)> eval;
  Kind kind = Kind::PhiBar;
  std::string label;
};

/// sum_j x_j^p (PhiBar for p > 0, Psi for p < 0).
MultiPhi power_sum_phi(double p);

/// Per node s with phi(rho_1/s, ..., rho_m/s) = 1, checked against the
/// dominance inequalities (s > rho_j for PhiBar, s < rho_j for Psi).
StarBody radial_orlicz_sum(const std::vector<StarBody>& bodies, const MultiPhi& phi, const GridPtr& grid);

}  // namespace dov
