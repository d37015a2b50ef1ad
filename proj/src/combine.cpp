#include "dov/combine.hpp"

#include <cmath>
#include <cstdio>

namespace dov {

double solve_decreasing(const std::function<double(double)>& F, double s0) {
  if (!(s0 > 0.0) || !std::isfinite(s0)) throw NumericalError("root find: bad starting point");
  double lo = s0, hi = s0;
  double f0 = F(s0);
  if (std::isnan(f0)) throw NumericalError("root find: NaN at the starting point");
  if (f0 == 0.0) return s0;
  int k = 0;
  if (f0 > 0.0) {
    while (true) {
      lo = hi;
      hi *= 2.0;
      if (++k > 60) throw NumericalError("root find: bracket not found in 60 doublings (malformed function?)");
      if (F(hi) <= 0.0) break;
    }
  } else {
    while (true) {
      hi = lo;
      lo *= 0.5;
      if (++k > 60) throw NumericalError("root find: bracket not found in 60 doublings (malformed function?)");
      if (F(lo) > 0.0) break;
    }
  }
  for (int it = 0; it < 200 && hi > lo * (1.0 + 4e-16); ++it) {
    double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;
    const double v = F(mid);
    if (std::isnan(v)) throw NumericalError("root find: NaN inside the bracket");
    if (v > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

Vec implicit_combo(const Vec& fK, const Vec& fL, const OrliczFn& phi1, const OrliczFn& phi2, double eps) {
  if (fK.size() != fL.size()) throw ValidationError("implicit_combo: field sizes differ");
  if (!(eps > 0.0)) throw ValidationError("implicit_combo: eps must be positive");
  const bool incr = phi1.cls == OrliczClass::I && phi2.cls == OrliczClass::I;
  const bool decr = phi1.cls == OrliczClass::D && phi2.cls == OrliczClass::D;
  if (!incr && !decr) {
    throw ValidationError("implicit_combo: phi1 and phi2 must both be in I or both in D (got " +
                          to_string(phi1.cls) + ", " + to_string(phi2.cls) + ")");
  }
  if (!(fK.array() > 0.0).all() || !(fL.array() > 0.0).all()) {
    throw ValidationError("implicit_combo: fields must be positive");
  }
  Vec out(fK.size());
  parallel_for(fK.size(), [&](std::ptrdiff_t j) {
    const double a = fK[j], b = fL[j];
    // For I the left side decreases in s, for D it increases.
    auto F = [&](double s) {
      const double v = phi1(a / s) + eps * phi2(b / s) - 1.0;
      return incr ? v : -v;
    };
    out[j] = solve_decreasing(F, a);
  });
  return out;
}

Vec hat_combo(const Vec& f0, const Vec& g, const OrliczFn& phi, double eps) {
  if (f0.size() != g.size()) throw ValidationError("hat_combo: field sizes differ");
  if (phi.cls == OrliczClass::Monotone) {
    throw ValidationError("hat_combo: phi '" + phi.label + "' is not in J_a");
  }
  Vec out(f0.size());
  for (Eigen::Index j = 0; j < f0.size(); ++j) {
    const double y = phi(f0[j]) + eps * g[j];
    if (!(y > phi.range_lo && y < phi.range_hi)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "hat_combo: value %.17g at node %ld is outside the range of phi", y,
                    static_cast<long>(j));
      throw ValidationError(buf);
    }
    out[j] = eps == 0.0 ? f0[j] : phi.inverse(y);
  }
  return out;
}

StarBody radial_combo(const StarBody& K, const StarBody& L, const OrliczFn& phi1, const OrliczFn& phi2,
                      double eps, const GridPtr& grid) {
  const Vec rho = implicit_combo(radial_on_grid(K, *grid), radial_on_grid(L, *grid), phi1, phi2, eps);
  return StarBody(RadialSamples{grid, rho, false});
}

MultiPhi power_sum_phi(double p) {
  if (p == 0.0) throw ValidationError("power_sum_phi: p must be nonzero");
  MultiPhi phi;
  phi.eval = [p](const Vec& x) { return x.array().pow(p).sum(); };
  phi.kind = p > 0.0 ? MultiPhi::Kind::PhiBar : MultiPhi::Kind::Psi;
  char buf[64];
  std::snprintf(buf, sizeof buf, "sum x_j^%.17g", p);
  phi.label = buf;
  return phi;
}

StarBody radial_orlicz_sum(const std::vector<StarBody>& bodies, const MultiPhi& phi, const GridPtr& grid) {
  if (bodies.empty()) throw ValidationError("radial_orlicz_sum: no bodies");
  const Eigen::Index m = static_cast<Eigen::Index>(bodies.size());
  Mat rho(m, grid->size());
  for (Eigen::Index i = 0; i < m; ++i) rho.row(i) = radial_on_grid(bodies[i], *grid).transpose();
  const bool bar = phi.kind == MultiPhi::Kind::PhiBar;
  Vec out(grid->size());
  parallel_for(grid->size(), [&](std::ptrdiff_t j) {
    const Vec r = rho.col(j);
    auto F = [&](double s) {
      const double v = phi.eval(Vec(r / s)) - 1.0;
      return bar ? v : -v;
    };
    const double s = solve_decreasing(F, r.maxCoeff());
    for (Eigen::Index i = 0; i < m; ++i) {
      const bool ok = bar ? s > r[i] : s < r[i];
      if (m > 1 && !ok) {
        throw NumericalError("radial_orlicz_sum: dominance check failed at node " + std::to_string(j) +
                             " (malformed phi '" + phi.label + "')");
      }
    }
    out[j] = s;
  });
  return StarBody(RadialSamples{grid, out, false});
}

}  // namespace dov
