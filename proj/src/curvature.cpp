#include "dov/curvature.hpp"

#include <cmath>

namespace dov {

namespace {

// rho G_t(rho, u) at every node
Vec radial_gt(const AlphaAssignment& A, const GFn& G, const SphereGrid& grid) {
  Vec out(grid.size());
  parallel_for(grid.size(), [&](std::ptrdiff_t j) { out[j] = A.rho[j] * G.deriv_t(A.rho[j], grid.node(j)); });
  return out;
}

HPolytope with_cut(const HPolytope& P, const Vec& normal, double h) {
  HPolytope out;
  out.normals.resize(P.dim(), P.facets() + 1);
  out.normals << P.normals, normal;
  out.supports.resize(P.facets() + 1);
  out.supports << P.supports, h;
  return out;
}

}  // namespace

CurvatureAtoms curvature_measure(const HPolytope& K, const GFn& G, const PsiFn& psi, const SphereGrid& grid) {
  const AlphaAssignment A = assign_alpha(StarBody(K), grid);
  const int n = grid.dim();
  const Vec f = radial_gt(A, G, grid);
  const Vec acc = alpha_accumulate(A, grid, f);
  CurvatureAtoms out;
  out.normals = K.normals;
  out.masses.resize(K.facets());
  for (Eigen::Index i = 0; i < K.facets(); ++i) {
    const double s = psi(K.supports[i]);
    if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("curvature: psi must be positive at the supports");
    out.masses[i] = acc[i] / (n * s);
  }
  out.total = out.masses.sum();
  out.tied_weight = A.tied_weight;
  double bound = 0.0;
  for (const auto& [j, ids] : A.ties) {
    for (auto i : ids) bound = std::max(bound, std::abs(f[j]) / psi(K.supports[i]));
  }
  out.tie_error_bound = bound * A.tied_weight / n;
  out.grid_id = grid.id();
  return out;
}

double curvature_integral(const StarBody& K, const GFn& G, const PsiFn& psi, const DirField& g,
                          const SphereGrid& grid) {
  const AlphaAssignment A = assign_alpha(K, grid);
  const Vec f = radial_gt(A, G, grid);
  Vec per_normal(A.normals.cols());
  parallel_for(per_normal.size(), [&](std::ptrdiff_t i) {
    per_normal[i] = g(A.normals.col(i)) / psi(A.support[i]);
  });
  return alpha_integral(A, grid, f, per_normal) / grid.dim();
}

GFn make_G_pq(double q, const StarBody& Q) {
  const int n = Q.dim();
  GFn G;
  G.dim = n;
  auto rho = [Q](const DirRef& u) { return radial(Q, Vec(u)); };
  if (q == 0.0) {
    G.eval = [=](double t, const DirRef& u) { return std::log(t) * std::pow(rho(u), n); };
  } else {
    G.eval = [=](double t, const DirRef& u) { return std::pow(t, q) / q * std::pow(rho(u), n - q); };
  }
  G.deriv_t = [=](double t, const DirRef& u) { return std::pow(t, q - 1.0) * std::pow(rho(u), n - q); };
  G.sign = GtSign::Positive;
  G.positive = q > 0.0;
  G.label = "pq(q=" + std::to_string(q) + ")";
  return G;
}

CurvatureAtoms curvature_pq(const HPolytope& K, const StarBody& Q, double p, double q, const SphereGrid& grid) {
  if (Q.dim() != K.dim()) throw ValidationError("curvature_pq: dimension mismatch");
  return curvature_measure(K, make_G_pq(q, Q), make_power_psi(p), grid);
}

double weak_convergence_probe(const HPolytope& K, double delta, const GFn& G, const PsiFn& psi,
                              const DirField& g, const SphereGrid& grid) {
  if (delta == 0.0) return 0.0;
  HPolytope moved{K.normals, K.supports.array() + delta};
  validate(moved);
  return std::abs(curvature_integral(StarBody(moved), G, psi, g, grid) -
                  curvature_integral(StarBody(K), G, psi, g, grid));
}

double valuation_check(const HPolytope& P, const Vec& w, double a, double b, const GFn& G, const PsiFn& psi,
                       const DirField& g, const SphereGrid& grid) {
  require_unit(w, "valuation cut direction");
  if (!(a > b)) throw ValidationError("valuation_check: need a > b");
  if (!(a > 0.0) || !(b < 0.0)) {
    throw ValidationError("valuation_check: the origin must be interior to both pieces (need b < 0 < a)");
  }
  const HPolytope K = with_cut(P, w, a);
  const HPolytope L = with_cut(P, -w, -b);
  HPolytope KL = with_cut(K, -w, -b);
  auto I = [&](const HPolytope& M) { return curvature_integral(StarBody(M), G, psi, g, grid); };
  return std::abs(I(KL) + I(P) - I(K) - I(L));
}

std::optional<bool> absolute_continuity_check(const StarBody& K, const GFn& G, const PsiFn& psi,
                                              const SphereGrid& grid) {
  const HPolytope* P = K.polytope();
  if (!P) return std::nullopt;
  const DiscreteMeasure S = surface_area_measure(*P, grid);
  const CurvatureAtoms C = curvature_measure(*P, G, psi, grid);
  for (Eigen::Index i = 0; i < P->facets(); ++i) {
    if (C.masses[i] != 0.0 && !(S.weights[i] > 0.0)) return false;
  }
  return true;
}

}  // namespace dov
