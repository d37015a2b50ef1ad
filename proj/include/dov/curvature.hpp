#pragma once

#include "dov/bodies.hpp"
#include "dov/dualvol.hpp"
#include "dov/functions.hpp"
#include "dov/grid.hpp"

#include <functional>
#include <optional>
#include <string>

namespace dov {

/// Atoms of a curvature measure on the facet normals of a polytope.
struct CurvatureAtoms {
  Mat normals;  // dim x m, the facet normals
  Vec masses;
  double total = 0.0;
  /// Weight of ridge nodes (argmin ties) and the bound |integrand| * weight / n
  /// on the mass they could move between facets.
  double tied_weight = 0.0;
  double tie_error_bound = 0.0;
  std::string grid_id;
};

using DirField = std::function<double(const DirRef&)>;

/// mass_i = (1/n) sum_{nodes in R_i} w rho G_t(rho, u) / psi(h_i).
CurvatureAtoms curvature_measure(const HPolytope& K, const GFn& G, const PsiFn& psi, const SphereGrid& grid);

/// (1/n) int g(alpha_K(u)) rho G_t(rho, u) / psi(h_K(alpha_K(u))) du.
double curvature_integral(const StarBody& K, const GFn& G, const PsiFn& psi, const DirField& g,
                          const SphereGrid& grid);

/// G with G_t(t,u) = t^{q-1} rho_Q(u)^{n-q} (valid for every real q).
GFn make_G_pq(double q, const StarBody& Q);

/// (p,q)-dual curvature measure: integrand (1/n) h_K(alpha)^{-p} rho_K^q rho_Q^{n-q}.
CurvatureAtoms curvature_pq(const HPolytope& K, const StarBody& Q, double p, double q, const SphereGrid& grid);

/// |int g dC(K_delta) - int g dC(K)| with every support raised by delta.
double weak_convergence_probe(const HPolytope& K, double delta, const GFn& G, const PsiFn& psi,
                              const DirField& g, const SphereGrid& grid);

/// K = P cap {<x,w> <= a}, L = P cap {<x,w> >= b}; returns
/// |I(K cap L) + I(K cup L) - I(K) - I(L)| with I the curvature integral.
double valuation_check(const HPolytope& P, const Vec& w, double a, double b, const GFn& G, const PsiFn& psi,
                       const DirField& g, const SphereGrid& grid);

/// Every facet carrying curvature mass has positive surface area on the grid.
/// nullopt for bodies without atoms (not applicable).
std::optional<bool> absolute_continuity_check(const StarBody& K, const GFn& G, const PsiFn& psi,
                                              const SphereGrid& grid);

}  // namespace dov
