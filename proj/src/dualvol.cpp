#include "dov/dualvol.hpp"

#include <cmath>

namespace dov {

namespace {

void same_dim(const StarBody& K, const SphereGrid& grid, const char* what) {
  if (K.dim() != grid.dim()) {
    throw ValidationError(std::string(what) + ": body dimension " + std::to_string(K.dim()) +
                          " does not match grid dimension " + std::to_string(grid.dim()));
  }
}

}  // namespace

double dual_volume_value(const GFn& G, const Vec& rho, const SphereGrid& grid) {
  if (rho.size() != grid.size()) throw ValidationError("dual_volume: radial values do not match the grid");
  Vec values(grid.size());
  parallel_for(grid.size(), [&](std::ptrdiff_t j) { values[j] = G.eval(rho[j], grid.node(j)); });
  return integrate_values(grid, values);
}

double dual_volume_value(const GFn& G, const StarBody& K, const SphereGrid& grid) {
  same_dim(K, grid, "dual_volume");
  return dual_volume_value(G, radial_on_grid(K, grid), grid);
}

VolumeResult dual_volume(const GFn& G, const StarBody& K, const SphereGrid& grid) {
  VolumeResult r;
  r.value = dual_volume_value(G, K, grid);
  r.grid_id = grid.id();
  const SphereGrid fine = build_grid(grid.dim(), grid.spec().refined());
  r.estimated_error = std::abs(dual_volume_value(G, K, fine) - r.value);
  return r;
}

double volume(const StarBody& K, const SphereGrid& grid) {
  same_dim(K, grid, "volume");
  const int n = grid.dim();
  return integrate_values(grid, radial_on_grid(K, grid).array().pow(n).matrix()) / n;
}

double dual_volume_q(const StarBody& K, const StarBody& Q, double q, const SphereGrid& grid) {
  if (q == 0.0) throw ValidationError("dual_volume_q: q must be nonzero");
  same_dim(K, grid, "dual_volume_q");
  same_dim(Q, grid, "dual_volume_q");
  const int n = grid.dim();
  const Vec rk = radial_on_grid(K, grid);
  const Vec rq = radial_on_grid(Q, grid);
  const Vec f = (rk.array().pow(q) * rq.array().pow(n - q)).matrix();
  return integrate_values(grid, f) / n;
}

double dual_orlicz_mixed(const Density& phi, const std::function<double(double)>& phi2, const StarBody& K,
                         const StarBody& L, const SphereGrid& grid) {
  same_dim(K, grid, "dual_orlicz_mixed");
  same_dim(L, grid, "dual_orlicz_mixed");
  const int n = grid.dim();
  const Vec rk = radial_on_grid(K, grid);
  const Vec rl = radial_on_grid(L, grid);
  Vec f(grid.size());
  parallel_for(grid.size(), [&](std::ptrdiff_t j) {
    const Vec x = rk[j] * grid.node(j);
    f[j] = phi.eval(x) * phi2(rl[j] / rk[j]) * std::pow(rk[j], n);
  });
  return integrate_values(grid, f) / n;
}

double breve_mixed(const Density& phi, const std::function<double(double)>& varphi, const StarBody& K,
                   const Vec& g, const SphereGrid& grid) {
  same_dim(K, grid, "breve_mixed");
  if (g.size() != grid.size()) throw ValidationError("breve_mixed: field does not match the grid");
  const int n = grid.dim();
  const Vec rk = radial_on_grid(K, grid);
  Vec f(grid.size());
  parallel_for(grid.size(), [&](std::ptrdiff_t j) {
    const Vec x = rk[j] * grid.node(j);
    f[j] = phi.eval(x) * varphi(rk[j]) * g[j];
  });
  return integrate_values(grid, f) / n;
}

double mixed_q_phi(const StarBody& K, const StarBody& L, const StarBody& Q, double q,
                   const std::function<double(double)>& phi, const SphereGrid& grid) {
  if (q == 0.0) throw ValidationError("mixed_q_phi: q must be nonzero");
  same_dim(K, grid, "mixed_q_phi");
  same_dim(L, grid, "mixed_q_phi");
  same_dim(Q, grid, "mixed_q_phi");
  const int n = grid.dim();
  const Vec rk = radial_on_grid(K, grid);
  const Vec rl = radial_on_grid(L, grid);
  const Vec rq = radial_on_grid(Q, grid);
  Vec f(grid.size());
  for (Eigen::Index j = 0; j < f.size(); ++j) f[j] = phi(rl[j] / rk[j]) * std::pow(rk[j], q) * std::pow(rq[j], n - q);
  return integrate_values(grid, f) / n;
}

AlphaAssignment assign_alpha(const StarBody& K, const SphereGrid& grid) {
  same_dim(K, grid, "alpha map");
  AlphaAssignment A;
  if (const auto* p = K.polytope()) {
    PolytopeRays rays = trace_rays(*p, grid);
    A.rho = std::move(rays.rho);
    A.normals = p->normals;
    A.support = p->supports;
    A.index = std::move(rays.facet);
    A.ties = std::move(rays.ties);
    A.tied_weight = rays.tied_weight;
    A.atomic = true;
    return A;
  }
  const auto* a = K.analytic();
  if (!a || !a->gauss_map) throw ValidationError("alpha map requires polytope or Gauss map");
  const Eigen::Index N = grid.size();
  A.rho.resize(N);
  A.normals.resize(grid.dim(), N);
  A.support.resize(N);
  A.index.resize(N);
  parallel_for(N, [&](std::ptrdiff_t j) {
    const Vec u = grid.node(j);
    const double r = a->radial(u);
    const Vec x = r * u;
    const Vec nu = a->gauss_map(x);
    A.rho[j] = r;
    A.normals.col(j) = nu;
    A.support[j] = x.dot(nu);  // h_K(alpha(u)) = <rho(u) u, alpha(u)>
    A.index[j] = static_cast<int>(j);
  });
  return A;
}

double alpha_integral(const AlphaAssignment& A, const SphereGrid& grid, const Vec& node_values,
                      const Vec& per_normal) {
  Vec f(grid.size());
  for (Eigen::Index j = 0; j < f.size(); ++j) f[j] = node_values[j] * per_normal[A.index[j]];
  for (const auto& [j, ids] : A.ties) {
    double mean = 0.0;
    for (auto i : ids) mean += per_normal[i];
    f[j] = node_values[j] * mean / static_cast<double>(ids.size());
  }
  return integrate_values(grid, f);
}

Vec alpha_accumulate(const AlphaAssignment& A, const SphereGrid& grid, const Vec& node_values) {
  Vec out = Vec::Zero(A.normals.cols());
  std::vector<char> tied(grid.size(), 0);
  for (const auto& [j, ids] : A.ties) tied[j] = 1;
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    if (!std::isfinite(node_values[j])) throw NumericalError("non-finite integrand at node " + std::to_string(j));
    if (!tied[j]) out[A.index[j]] += grid.weight(j) * node_values[j];
  }
  for (const auto& [j, ids] : A.ties) {
    const double share = grid.weight(j) * node_values[j] / static_cast<double>(ids.size());
    for (auto i : ids) out[i] += share;
  }
  return out;
}

Vec support_at(const StarBody& L, const Mat& normals) {
  Vec out(normals.cols());
  parallel_for(normals.cols(), [&](std::ptrdiff_t i) { out[i] = support(L, Vec(normals.col(i))); });
  return out;
}

DiscreteMeasure surface_area_measure(const HPolytope& P, const SphereGrid& grid) {
  const AlphaAssignment A = assign_alpha(StarBody(P), grid);
  const int n = grid.dim();
  const Vec cone = alpha_accumulate(A, grid, A.rho.array().pow(n).matrix());
  DiscreteMeasure S;
  S.normals = P.normals;
  S.weights = cone.cwiseQuotient(P.supports);
  return S;
}

double orlicz_mixed_volume(const HPolytope& K, const StarBody& L, const std::function<double(double)>& phi,
                           const SphereGrid& grid) {
  if (L.dim() != K.dim()) throw ValidationError("orlicz_mixed_volume: dimension mismatch");
  const DiscreteMeasure S = surface_area_measure(K, grid);
  const Vec hl = support_at(L, K.normals);
  double total = 0.0;
  for (Eigen::Index i = 0; i < S.size(); ++i) {
    if (S.weights[i] == 0.0) continue;
    total += phi(hl[i] / K.supports[i]) * K.supports[i] * S.weights[i];
  }
  return total / grid.dim();
}

namespace {

// (1/n) int f(ratio, rho_K, rho_Q) with ratio = h_L/h_K at alpha_K(u); ridge nodes average their facets.
double alpha_mixed(const StarBody& K, const StarBody& L, const StarBody& Q, const SphereGrid& grid,
                   const std::function<double(double, double, double)>& f) {
  same_dim(L, grid, "mixed volume");
  same_dim(Q, grid, "mixed volume");
  const AlphaAssignment A = assign_alpha(K, grid);
  const Vec ratio = support_at(L, A.normals).cwiseQuotient(A.support);
  const Vec rq = radial_on_grid(Q, grid);
  Vec values(grid.size());
  for (Eigen::Index j = 0; j < values.size(); ++j) values[j] = f(ratio[A.index[j]], A.rho[j], rq[j]);
  for (const auto& [j, ids] : A.ties) {
    double mean = 0.0;
    for (auto i : ids) mean += f(ratio[i], A.rho[j], rq[j]);
    values[j] = mean / static_cast<double>(ids.size());
  }
  return integrate_values(grid, values) / grid.dim();
}

}  // namespace

double v1_radial(const StarBody& K, const StarBody& L, const SphereGrid& grid) {
  const int n = grid.dim();
  return alpha_mixed(K, L, K, grid, [n](double r, double rk, double) { return r * std::pow(rk, n); });
}

double mixed_pq(const StarBody& K, const StarBody& L, const StarBody& Q, double p, double q,
                const SphereGrid& grid) {
  const int n = grid.dim();
  return alpha_mixed(K, L, Q, grid, [=](double r, double rk, double rq) {
    return std::pow(r, p) * std::pow(rk / rq, q) * std::pow(rq, n);
  });
}

double mixed_phipsi(const StarBody& K, const StarBody& L, const StarBody& Q,
                    const std::function<double(double)>& phi, const std::function<double(double)>& psi,
                    const SphereGrid& grid) {
  const int n = grid.dim();
  return alpha_mixed(K, L, Q, grid, [&](double r, double rk, double rq) {
    return phi(psi(r) * std::pow(rk / rq, n)) * std::pow(rq, n);
  });
}

double dual_entropy(const StarBody& K, const std::optional<StarBody>& Q, const SphereGrid& grid) {
  same_dim(K, grid, "dual_entropy");
  const int n = grid.dim();
  const Vec rk = radial_on_grid(K, grid);
  if (!Q) return integrate_values(grid, rk.array().log().matrix()) / n;
  same_dim(*Q, grid, "dual_entropy");
  const Vec rq = radial_on_grid(*Q, grid);
  const Vec f = ((rk.array() / rq.array()).log() * rq.array().pow(n)).matrix();
  return integrate_values(grid, f) / n;
}

}  // namespace dov
