#include "dov/solver.hpp"

#include "dov/combine.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace dov {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// sum_{<u,v> >= eps} w G(t,u)
double cap_integral(const GFn& G, const SphereGrid& grid, const Vec& v, double eps, double t) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    if (grid.node(j).dot(v) >= eps) total += grid.weight(j) * G.eval(t, grid.node(j));
  }
  return total;
}

double sum_G(const GFn& G, const SphereGrid& grid, const Vec& rho, double t) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < grid.size(); ++j) total += grid.weight(j) * G.eval(t * rho[j], grid.node(j));
  return total;
}

// Rescales h so that V_G([t h]) = target; rho is homogeneous so one ray trace suffices.
Vec restore(const Vec& h, const Mat& normals, const GFn& G, const SphereGrid& grid, double target) {
  const PolytopeRays rays = trace_rays(HPolytope{normals, h}, grid);
  const double t = solve_decreasing([&](double s) { return sum_G(G, grid, rays.rho, s) - target; }, 1.0);
  return t * h;
}

}  // namespace

ProblemCheck validate_problem(const DiscreteMeasure& mu, const GFn& G, const PsiFn& psi, const SphereGrid& grid) {
  mu.validate();
  if (mu.dim() != grid.dim()) throw ValidationError("measure dimension does not match the grid");
  ProblemCheck c;
  c.margin = hemisphere_margin(mu, grid);
  if (!(c.margin > 1e-9)) {
    throw ValidationError("measure is concentrated on a closed hemisphere (hemisphere margin " + fmt(c.margin) +
                          "); the Minkowski problem needs int <u,v>_+ dmu(u) > 0 for every v");
  }
  Mat sample(grid.dim(), std::min<Eigen::Index>(64, grid.size()));
  const Eigen::Index stride = std::max<Eigen::Index>(1, grid.size() / sample.cols());
  for (Eigen::Index k = 0; k < sample.cols(); ++k) sample.col(k) = grid.node((k * stride) % grid.size());
  c.gt_sign = sample_gt_sign(G, sample);
  if (c.gt_sign != GtSign::Negative) {
    throw ValidationError("G_t must be negative on (0, inf) x S^{n-1} (sampled sign: " + to_string(c.gt_sign) +
                          "); the solver only covers decreasing G");
  }
  c.psi_diverges = psi.diverges;
  c.psi_probe = psi_divergence_probe(psi, 1e6);
  if (!psi.diverges) {
    throw ValidationError("psi must satisfy int_1^inf psi(s)/s ds = inf (divergence flag not set; probe to 1e6 = " +
                          fmt(c.psi_probe) + ")");
  }
  double lo_a = 0.0, lo_b = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const Vec v = mu.normals.col(i);
    const double a = cap_integral(G, grid, v, 0.5, 1e-3);
    const double b = cap_integral(G, grid, v, 0.5, 1e-6);
    if (i == 0 || b < lo_b) {
      lo_a = a;
      lo_b = b;
    }
  }
  c.small_t[0] = lo_a;
  c.small_t[1] = lo_b;
  c.small_t_grows = lo_b > lo_a && lo_a > 0.0;
  const Vec ones = Vec::Ones(grid.size());
  c.large_t[0] = sum_G(G, grid, ones, 1e3);
  c.large_t[1] = sum_G(G, grid, ones, 1e6);
  c.large_t_shrinks = std::abs(c.large_t[1]) < std::abs(c.large_t[0]);
  if (!c.small_t_grows) c.warnings.push_back("cap integral of G does not grow as t -> 0 (limit condition at 0 doubtful)");
  if (!c.large_t_shrinks) c.warnings.push_back("integral of G does not shrink as t -> inf (limit condition at inf doubtful)");
  return c;
}

double initial_scale(const GFn& G, const SphereGrid& grid, double target) {
  if (!(target > 0.0)) throw ValidationError("initial_scale: target must be positive");
  const Vec ones = Vec::Ones(grid.size());
  double r = 0.0;
  try {
    r = solve_decreasing([&](double s) { return sum_G(G, grid, ones, s) - target; }, 1.0);
  } catch (const NumericalError&) {
    throw NumericalError("initial_scale: no ball with V_G(rB) = " + fmt(target) +
                         " within 60 doublings (limit conditions on G violated in practice)");
  }
  const double gap = std::abs(sum_G(G, grid, ones, r) - target);
  if (gap > 1e-10 * target) throw NumericalError("initial_scale: residual " + fmt(gap) + " above 1e-10 relative");
  return r;
}

ValueGrad objective_F(const Vec& h, const DiscreteMeasure& mu, const OrliczFn& phi) {
  if (h.size() != mu.size()) throw ValidationError("objective_F: size mismatch");
  if (!(h.array() > 0.0).all()) throw ValidationError("objective_F: supports must be positive");
  const double total = mu.total();
  ValueGrad out;
  out.grad.resize(h.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    out.value += mu.weights[i] * phi(h[i]);
    out.grad[i] = mu.weights[i] * phi.deriv(h[i]) / total;
  }
  out.value /= total;
  return out;
}

ConstraintValue constraint_V(const Vec& h, const Mat& normals, const GFn& G, const SphereGrid& grid) {
  if (h.size() != normals.cols()) throw ValidationError("constraint_V: size mismatch");
  if (!(h.array() > 0.0).all()) throw ValidationError("constraint_V: supports must be positive");
  const PolytopeRays rays = trace_rays(HPolytope{normals, h}, grid);
  ConstraintValue out;
  out.rho = rays.rho;
  Vec g(grid.size()), f(grid.size());
  parallel_for(grid.size(), [&](std::ptrdiff_t j) {
    const double r = rays.rho[j];
    g[j] = G.eval(r, grid.node(j));
    f[j] = r * G.deriv_t(r, grid.node(j));
  });
  out.value = integrate_values(grid, g);
  std::vector<char> tied(grid.size(), 0);
  for (const auto& [j, ids] : rays.ties) tied[j] = 1;
  out.region_integral = Vec::Zero(h.size());
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    if (!tied[j]) out.region_integral[rays.facet[j]] += grid.weight(j) * f[j];
  }
  for (const auto& [j, ids] : rays.ties) {
    const double share = grid.weight(j) * f[j] / static_cast<double>(ids.size());
    for (auto i : ids) out.region_integral[i] += share;
  }
  out.grad = out.region_integral.cwiseQuotient(h);
  for (auto i : empty_facets(HPolytope{normals, h}, rays)) out.empty_regions.push_back(i);
  return out;
}

RatioState ratio_state(const Vec& h, const DiscreteMeasure& mu, const GFn& G, const PsiFn& psi,
                       const SphereGrid& grid) {
  const ConstraintValue cv = constraint_V(h, mu.normals, G, grid);
  const int n = grid.dim();
  RatioState s;
  s.curvature.resize(h.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) s.curvature[i] = cv.region_integral[i] / (n * psi(h[i]));
  s.total = s.curvature.sum();
  s.residuals = (mu.weights / mu.total() - s.curvature / s.total).cwiseAbs();
  s.tau = -mu.total() / (n * s.total);
  return s;
}

SolveReport solve_minkowski(const DiscreteMeasure& mu, const GFn& G, const PsiFn& psi, const SphereGrid& grid,
                            const SolveOptions& opts) {
  if (!(opts.tol > 0.0)) throw ValidationError("solve: tolerance must be positive");
  SolveReport rep;
  rep.check = validate_problem(mu, G, psi, grid);
  rep.grid_id = grid.id();
  const OrliczFn phi = phi_from_psi(psi);
  const double target = mu.total();
  const int n = grid.dim();
  const Eigen::Index m = mu.size();
  const Vec a = mu.weights / target;  // gradient of F in y = phi(h)

  rep.r0 = initial_scale(G, grid, target);
  Vec h = Vec::Constant(m, rep.r0);
  if (opts.warm_start) {
    if (opts.warm_start->size() != m || !(opts.warm_start->array() > 0.0).all()) {
      throw ValidationError("solve: warm start must hold one positive support per atom");
    }
    h = *opts.warm_start;
  }
  h = restore(h, mu.normals, G, grid, target);

  auto F_of = [&](const Vec& x) { return objective_F(x, mu, phi).value; };
  double F = F_of(h);
  double step = -1.0;
  double best_residual = std::numeric_limits<double>::infinity();
  int best_iteration = 0;
  rep.status = "iteration cap";

  for (int it = 0;; ++it) {
    const ConstraintValue cv = constraint_V(h, mu.normals, G, grid);
    Vec C(m);
    for (Eigen::Index i = 0; i < m; ++i) C[i] = cv.region_integral[i] / (n * psi(h[i]));
    const double total = C.sum();
    const Vec residuals = (a - C / total).cwiseAbs();
    const double worst = residuals.maxCoeff();
    rep.trace.push_back({it, F, std::abs(cv.value - target) / target, worst});
    rep.iterations = it;
    rep.residuals = residuals;
    rep.curvature = C;
    rep.constraint_gap = std::abs(cv.value - target) / target;
    rep.unsatisfiable = cv.empty_regions;
    if (worst < opts.tol) {
      rep.converged = true;
      rep.status = "converged";
      break;
    }
    if (it >= opts.max_iterations) break;
    if (worst < best_residual * (1.0 - 1e-3)) {
      best_residual = worst;
      best_iteration = it;
    } else if (it - best_iteration > 500) {
      rep.status = "stagnated";
      break;
    }

    // Projected gradient in y: b = dV/dy = n C.
    const Vec b = n * C;
    const Vec d = -(a - (a.dot(b) / b.squaredNorm()) * b);
    const double slope = a.dot(d);
    if (!(slope < 0.0)) {
      rep.status = "stagnated";
      break;
    }
    double rate = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) rate = std::max(rate, std::abs(d[i] / (phi.deriv(h[i]) * h[i])));
    const double cap = opts.max_relative_step / rate;
    double s = step > 0.0 ? std::min(cap, 2.0 * step) : cap;
    const Vec y = h.unaryExpr([&](double t) { return phi(t); });
    bool accepted = false;
    for (int k = 0; k < 80; ++k, s *= opts.backtrack) {
      const Vec y_new = y + s * d;
      if (!((y_new.array() > phi.range_lo).all() && (y_new.array() < phi.range_hi).all())) continue;
      Vec h_new = y_new.unaryExpr([&](double v) { return phi.inverse(v); });
      if (!(h_new.array() > 0.0).all() || !h_new.allFinite()) continue;
      h_new = restore(h_new, mu.normals, G, grid, target);
      const double F_new = F_of(h_new);
      if (F_new <= F + opts.armijo * s * slope) {
        h = h_new;
        F = F_new;
        step = s;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      rep.status = "stagnated";
      break;
    }
  }
  rep.polytope = HPolytope{mu.normals, h};
  rep.objective = F;
  rep.tau = -target / (n * rep.curvature.sum());
  return rep;
}

SolutionCheck verify_solution(const SolveReport& report, const DiscreteMeasure& mu, const GFn& G,
                              const PsiFn& psi, const SphereGrid& grid) {
  const RatioState s = ratio_state(report.polytope.supports, mu, G, psi, grid);
  SolutionCheck c;
  c.max_residual = s.residuals.maxCoeff();
  c.tau = s.tau;
  c.tau_drift = std::abs(s.tau - report.tau) / std::abs(report.tau);
  return c;
}

}  // namespace dov
