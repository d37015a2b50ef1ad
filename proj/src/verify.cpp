#include "dov/verify.hpp"

#include "dov/curvature.hpp"
#include "dov/dualvol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace dov {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double rel_gap(double lhs, double rhs) { return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-9); }

void fd_verdict(CheckResult& r, const FdEstimate& e, double rhs, const VerifyConfig& cfg) {
  r.lhs = e.value;
  r.rhs = rhs;
  r.order = e.order;
  r.gap = rel_gap(e.value, rhs);
  r.tolerance = cfg.fd_tol;
  r.status = r.gap < cfg.fd_tol ? CheckStatus::Pass : CheckStatus::Fail;
  r.note = "richardson error " + fmt(e.error);
}

Json grid_json(const GridPtr& grid) { return Json(grid->id()); }

// t ladder 1e-3 .. 1e3
std::vector<double> t_ladder() {
  std::vector<double> out;
  for (int k = -24; k <= 24; ++k) out.push_back(std::pow(10.0, k / 8.0));
  return out;
}

Monotone classify_sequence(const std::vector<double>& v) {
  bool up = false, down = false;
  for (std::size_t k = 1; k < v.size(); ++k) {
    const double tol = 1e-12 * std::max(std::abs(v[k]), std::abs(v[k - 1]));
    if (v[k] > v[k - 1] + tol) up = true;
    else if (v[k] < v[k - 1] - tol) down = true;
  }
  if (up && down) return Monotone::Mixed;
  if (up) return Monotone::Increasing;
  if (down) return Monotone::Decreasing;
  return Monotone::Constant;
}

Monotone merge(Monotone a, Monotone b) {
  if (a == b) return a;
  if (a == Monotone::Constant) return b;
  if (b == Monotone::Constant) return a;
  return Monotone::Mixed;
}

bool strict(Shape s) { return s == Shape::StrictlyConvex || s == Shape::StrictlyConcave; }

double uniform(std::mt19937_64& rng, double a, double b) {
  return a + (b - a) * std::generate_canonical<double, 53>(rng);
}

double signed_uniform(std::mt19937_64& rng, double a, double b) {
  const double x = uniform(rng, a, b);
  return uniform(rng, 0.0, 1.0) < 0.5 ? -x : x;
}

}  // namespace

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(Shape s) {
  switch (s) {
    case Shape::StrictlyConvex: return "strictly convex";
    case Shape::Convex: return "convex";
    case Shape::Affine: return "affine";
    case Shape::Concave: return "concave";
    case Shape::StrictlyConcave: return "strictly concave";
    case Shape::Mixed: return "mixed";
  }
  return "?";
}

std::string to_string(Monotone m) {
  switch (m) {
    case Monotone::Increasing: return "increasing";
    case Monotone::Decreasing: return "decreasing";
    case Monotone::Constant: return "constant";
    case Monotone::Mixed: return "mixed";
  }
  return "?";
}

bool is_convex(Shape s) { return s == Shape::StrictlyConvex || s == Shape::Convex || s == Shape::Affine; }
bool is_concave(Shape s) { return s == Shape::StrictlyConcave || s == Shape::Concave || s == Shape::Affine; }

Shape sample_shape(const std::function<double(const Vec&)>& f, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int pos = 0, neg = 0, zero = 0;
  for (int k = 0; k < 512; ++k) {
    Vec x(m), y(m);
    for (int i = 0; i < m; ++i) {
      x[i] = std::pow(10.0, uniform(rng, -2.0, 2.0));
      // half wide pairs, half close pairs to catch local wiggles
      const double spread = k % 2 == 0 ? uniform(rng, -2.0, 2.0) : uniform(rng, -0.1, 0.1);
      y[i] = x[i] * std::pow(10.0, spread);
    }
    const double fx = f(x), fy = f(y), fm = f(0.5 * (x + y));
    if (!std::isfinite(fx) || !std::isfinite(fy) || !std::isfinite(fm)) continue;
    const double d = 0.5 * (fx + fy) - fm;
    const double tol = 1e-11 * (std::abs(fx) + std::abs(fy) + std::abs(fm));
    if (d > tol) ++pos;
    else if (d < -tol) ++neg;
    else ++zero;
  }
  if (pos > 0 && neg > 0) return Shape::Mixed;
  if (pos == 0 && neg == 0) return Shape::Affine;
  if (neg == 0) return zero == 0 ? Shape::StrictlyConvex : Shape::Convex;
  return zero == 0 ? Shape::StrictlyConcave : Shape::Concave;
}

Shape sample_shape(const std::function<double(double)>& f, std::uint64_t seed) {
  return sample_shape([&](const Vec& x) { return f(x[0]); }, 1, seed);
}

Monotone sample_monotone(const std::function<double(double)>& f) {
  std::vector<double> v;
  for (double t : t_ladder()) v.push_back(f(t));
  return classify_sequence(v);
}

Monotone sample_Gq_monotone(const GFn& G, double q, const SphereGrid& grid) {
  const Eigen::Index count = std::min<Eigen::Index>(16, grid.size());
  const Eigen::Index stride = std::max<Eigen::Index>(1, grid.size() / count);
  Monotone out = Monotone::Constant;
  for (Eigen::Index k = 0; k < count; ++k) {
    const Vec u = grid.node((k * stride) % grid.size());
    std::vector<double> v;
    for (double t : t_ladder()) v.push_back(G.eval(t, u) / std::pow(t, q));
    out = merge(out, classify_sequence(v));
    if (out == Monotone::Mixed) break;
  }
  return out;
}

bool dilatates(const StarBody& K, const StarBody& L, const SphereGrid& grid, double* ratio) {
  const Vec rk = radial_on_grid(K, grid);
  const Vec rl = radial_on_grid(L, grid);
  const Vec q = rl.cwiseQuotient(rk);
  const double mean = q.mean();
  if (ratio) *ratio = mean;
  return (q.maxCoeff() - q.minCoeff()) <= 1e-10 * mean;
}

ScalarFn scalar(const OrliczFn& phi) { return {phi.eval, phi.label}; }

// ---------------------------------------------------------------------------
// Variational formulas

CheckResult check_variational_radial(const StarBody& K, const StarBody& L, const OrliczFn& phi1,
                                     const OrliczFn& phi2, const GFn& G, const GridPtr& grid,
                                     const VerifyConfig& cfg) {
  const double d1 = phi1.deriv(1.0);
  if (!(std::abs(d1) > 1e-14)) throw ValidationError("variational radial: derivative of phi1 at 1 vanishes");
  const SphereGrid& gr = *grid;
  const Vec rk = radial_on_grid(K, gr);
  const Vec rl = radial_on_grid(L, gr);
  auto V = [&](double eps) {
    if (eps == 0.0) return dual_volume_value(G, rk, gr);
    return dual_volume_value(G, implicit_combo(rk, rl, phi1, phi2, eps), gr);
  };
  const FdEstimate e = richardson_one_sided(V, decade_ladder(2, 5));
  double rhs = 0.0;
  for (Eigen::Index j = 0; j < gr.size(); ++j) {
    rhs += gr.weight(j) * phi2(rl[j] / rk[j]) * rk[j] * G.deriv_t(rk[j], gr.node(j));
  }
  rhs /= d1;
  CheckResult r;
  r.name = "variational_radial";
  fd_verdict(r, e, rhs, cfg);
  if (r.status == CheckStatus::Fail) {
    r.witness = Json{{"K", body_to_json(K)}, {"L", body_to_json(L)}, {"phi1", phi1.label}, {"phi2", phi2.label},
                     {"G", G.label}, {"grid", grid_json(grid)}};
  }
  return r;
}

CheckResult check_variational_hat(const StarBody& K, const Vec& g, const OrliczFn& phi, const GFn& G,
                                  const GridPtr& grid, const VerifyConfig& cfg) {
  const SphereGrid& gr = *grid;
  if (g.size() != gr.size()) throw ValidationError("variational hat: g must have one value per grid node");
  const Vec rk = radial_on_grid(K, gr);
  for (Eigen::Index j = 0; j < gr.size(); ++j) {
    if (!(std::abs(phi.deriv(rk[j])) > 0.0)) throw ValidationError("variational hat: phi' vanishes at rho_K");
  }
  auto V = [&](double eps) {
    if (eps == 0.0) return dual_volume_value(G, rk, gr);
    return dual_volume_value(G, hat_combo(rk, g, phi, eps), gr);
  };
  const FdEstimate e = richardson_centered(V, decade_ladder(2, 5));
  double rhs = 0.0;
  for (Eigen::Index j = 0; j < gr.size(); ++j) {
    rhs += gr.weight(j) * g[j] * G.deriv_t(rk[j], gr.node(j)) / phi.deriv(rk[j]);
  }
  CheckResult r;
  r.name = "variational_hat";
  fd_verdict(r, e, rhs, cfg);
  if (r.status == CheckStatus::Fail) {
    r.witness = Json{{"K", body_to_json(K)}, {"g", to_json(g)}, {"phi", phi.label}, {"G", G.label},
                     {"grid", grid_json(grid)}};
  }
  return r;
}

CheckResult check_variational_wulff(const HPolytope& h0, const Vec& g, const OrliczFn& phi, const GFn& G,
                                    const GridPtr& grid, const VerifyConfig& cfg) {
  validate(h0);
  const SphereGrid& gr = *grid;
  if (g.size() != h0.facets()) throw ValidationError("variational wulff: g must have one value per facet");
  for (Eigen::Index i = 0; i < h0.facets(); ++i) {
    if (!(std::abs(phi.deriv(h0.supports[i])) > 0.0)) throw ValidationError("variational wulff: phi' vanishes at h0");
  }
  auto V = [&](double eps) {
    const Vec h = eps == 0.0 ? h0.supports : hat_combo(h0.supports, g, phi, eps);
    return dual_volume_value(G, trace_rays(HPolytope{h0.normals, h}, gr).rho, gr);
  };
  const FdEstimate e = richardson_centered(V, decade_ladder(3, 6));
  PsiFn psi;
  psi.eval = [&phi](double t) { return t * phi.deriv(t); };
  psi.label = "t phi'(t)";
  const CurvatureAtoms C = curvature_measure(h0, G, psi, gr);
  const double rhs = gr.dim() * g.dot(C.masses);
  CheckResult r;
  r.name = "variational_wulff";
  fd_verdict(r, e, rhs, cfg);
  if (r.status == CheckStatus::Fail) {
    r.witness = Json{{"h0", body_to_json(StarBody(h0))}, {"g", to_json(g)}, {"phi", phi.label}, {"G", G.label},
                     {"grid", grid_json(grid)}};
  }
  return r;
}

CheckResult check_variational_two(const HPolytope& h1, const Vec& h2, const OrliczFn& phi1, const OrliczFn& phi2,
                                  const GFn& G, const GridPtr& grid, const VerifyConfig& cfg) {
  validate(h1);
  const SphereGrid& gr = *grid;
  if (h2.size() != h1.facets() || !(h2.array() > 0.0).all()) {
    throw ValidationError("variational two: h2 must hold one positive value per facet");
  }
  const double d1 = phi1.deriv(1.0);
  if (!(std::abs(d1) > 1e-14)) throw ValidationError("variational two: derivative of phi1 at 1 vanishes");
  auto V = [&](double eps) {
    const Vec h = eps == 0.0 ? h1.supports : implicit_combo(h1.supports, h2, phi1, phi2, eps);
    return dual_volume_value(G, trace_rays(HPolytope{h1.normals, h}, gr).rho, gr);
  };
  const FdEstimate e = richardson_one_sided(V, decade_ladder(3, 6));
  PsiFn one;
  one.eval = [](double) { return 1.0; };
  one.label = "1";
  const CurvatureAtoms C = curvature_measure(h1, G, one, gr);
  double rhs = 0.0;
  for (Eigen::Index i = 0; i < h1.facets(); ++i) rhs += phi2(h2[i] / h1.supports[i]) * C.masses[i];
  rhs *= gr.dim() / d1;
  CheckResult r;
  r.name = "variational_two";
  fd_verdict(r, e, rhs, cfg);
  if (r.status == CheckStatus::Fail) {
    r.witness = Json{{"h1", body_to_json(StarBody(h1))}, {"h2", to_json(h2)}, {"phi1", phi1.label},
                     {"phi2", phi2.label}, {"G", G.label}, {"grid", grid_json(grid)}};
  }
  return r;
}

// ---------------------------------------------------------------------------
// Inequalities

namespace {

// ">=" : gap = lhs - rhs, "<=" : gap = rhs - lhs, equality : relative |lhs - rhs|.
enum class Relation { Ge, Le, Eq };

void inequality_verdict(CheckResult& r, Relation rel, const VerifyConfig& cfg) {
  switch (rel) {
    case Relation::Ge:
      r.gap = r.lhs - r.rhs;
      r.tolerance = cfg.slack;
      r.status = r.gap >= -cfg.slack ? CheckStatus::Pass : CheckStatus::Fail;
      if (r.gap > cfg.slack) r.flags.push_back("strict");
      break;
    case Relation::Le:
      r.gap = r.rhs - r.lhs;
      r.tolerance = cfg.slack;
      r.status = r.gap >= -cfg.slack ? CheckStatus::Pass : CheckStatus::Fail;
      if (r.gap > cfg.slack) r.flags.push_back("strict");
      break;
    case Relation::Eq:
      r.gap = std::abs(r.lhs - r.rhs) / std::max(std::abs(r.rhs), 1e-300);
      r.tolerance = cfg.equality_tol;
      r.status = r.gap <= cfg.equality_tol ? CheckStatus::Pass : CheckStatus::Fail;
      r.flags.push_back("equality case");
      break;
  }
}

std::string relation_text(Relation rel) {
  switch (rel) {
    case Relation::Ge: return "lhs >= rhs";
    case Relation::Le: return "lhs <= rhs";
    case Relation::Eq: return "lhs = rhs";
  }
  return "";
}

}  // namespace

CheckResult check_dual_bm(const std::vector<StarBody>& bodies, const MultiPhi& phi, const GFn& G, double q,
                          const GridPtr& grid, const VerifyConfig& cfg) {
  if (q == 0.0 || !std::isfinite(q)) throw ValidationError("dual BM: q must be a nonzero finite number");
  if (bodies.size() < 2) throw ValidationError("dual BM: need at least two bodies");
  if (!G.positive) throw ValidationError("dual BM: G must be positive");
  const SphereGrid& gr = *grid;
  const int m = static_cast<int>(bodies.size());
  CheckResult r;
  r.name = "dual_bm";
  const Shape shape = sample_shape([&](const Vec& x) { return phi.eval(x.array().pow(1.0 / q).matrix()); }, m);
  const Monotone mono = sample_Gq_monotone(G, q, gr);
  r.flags.push_back("phi_q " + to_string(shape));
  r.flags.push_back("G_q " + to_string(mono));
  const bool inc = mono == Monotone::Increasing || mono == Monotone::Constant;
  const bool dec = mono == Monotone::Decreasing || mono == Monotone::Constant;
  const bool ge = is_convex(shape) && ((q > 0 && inc) || (q < 0 && dec));
  const bool le = is_concave(shape) && ((q > 0 && dec) || (q < 0 && inc));
  if (!ge && !le) {
    r.status = CheckStatus::Inconclusive;
    r.note = "inapplicable: phi_q is " + to_string(shape) + " and G_q is " + to_string(mono) + " for q = " + fmt(q);
    return r;
  }
  const StarBody sum = radial_orlicz_sum(bodies, phi, grid);
  const double vsum = dual_volume_value(G, sum, gr);
  Vec x(m);
  bool dil = true;
  for (int j = 0; j < m; ++j) {
    x[j] = std::pow(dual_volume_value(G, bodies[j], gr) / vsum, 1.0 / q);
    if (j > 0 && !dilatates(bodies[0], bodies[j], gr)) dil = false;
  }
  if (dil) r.flags.push_back("dilatates");
  r.lhs = 1.0;
  r.rhs = phi.eval(x);
  Relation rel = ge ? Relation::Ge : Relation::Le;
  if ((ge && le) || (dil && mono == Monotone::Constant)) rel = Relation::Eq;
  inequality_verdict(r, rel, cfg);
  r.note = relation_text(rel);
  if (r.status == CheckStatus::Fail) {
    Json bs = Json::array();
    for (const auto& b : bodies) bs.push_back(body_to_json(b));
    r.witness = Json{{"bodies", bs}, {"phi", phi.label}, {"G", G.label}, {"q", q}, {"grid", grid_json(grid)}};
  }
  return r;
}

CheckResult check_dual_minkowski(const StarBody& K, const StarBody& L, const StarBody& Q, double q,
                                 const ScalarFn& phi, const GridPtr& grid, const VerifyConfig& cfg) {
  if (q == 0.0 || !std::isfinite(q)) throw ValidationError("dual Minkowski: q must be a nonzero finite number");
  const SphereGrid& gr = *grid;
  CheckResult r;
  r.name = "dual_minkowski";
  const Shape shape = sample_shape([&](double t) { return phi.f(std::pow(t, 1.0 / q)); });
  r.flags.push_back("phi_q " + to_string(shape));
  if (shape == Shape::Mixed) {
    r.status = CheckStatus::Inconclusive;
    r.note = "inapplicable: phi_q is neither convex nor concave";
    return r;
  }
  const double vk = dual_volume_q(K, Q, q, gr);
  const double vl = dual_volume_q(L, Q, q, gr);
  r.lhs = mixed_q_phi(K, L, Q, q, phi.f, gr);
  r.rhs = vk * phi.f(std::pow(vl / vk, 1.0 / q));
  const bool dil = dilatates(K, L, gr);
  if (dil) r.flags.push_back("dilatates");
  Relation rel = shape == Shape::Affine || dil ? Relation::Eq : is_convex(shape) ? Relation::Ge : Relation::Le;
  inequality_verdict(r, rel, cfg);
  r.note = relation_text(rel);
  if (r.status == CheckStatus::Fail) {
    r.witness = Json{{"K", body_to_json(K)}, {"L", body_to_json(L)}, {"Q", body_to_json(Q)}, {"q", q},
                     {"phi", phi.label}, {"grid", grid_json(grid)}};
  }
  return r;
}

CheckResult check_thm2(const StarBody& K, const StarBody& L, const StarBody& Q, const ScalarFn& phi,
                       const ScalarFn& psi, const GridPtr& grid, const VerifyConfig& cfg) {
  if (!K.is_convex() || !L.is_convex()) throw ValidationError("phi-psi inequality: K and L must be convex");
  const SphereGrid& gr = *grid;
  const int n = gr.dim();
  CheckResult r;
  r.name = "phi_psi_minkowski";
  const Shape sphi = sample_shape(phi.f), spsi = sample_shape(psi.f);
  const Monotone mphi = sample_monotone(phi.f), mpsi = sample_monotone(psi.f);
  r.flags.push_back("phi " + to_string(sphi) + ", " + to_string(mphi));
  r.flags.push_back("psi " + to_string(spsi) + ", " + to_string(mpsi));
  if (!is_convex(sphi) || !is_convex(spsi) || mphi != Monotone::Increasing || mpsi != Monotone::Increasing) {
    r.status = CheckStatus::Inconclusive;
    r.note = "inapplicable: phi and psi must be increasing and convex";
    return r;
  }
  const double vk = volume(K, gr), vl = volume(L, gr), vq = volume(Q, gr);
  r.lhs = mixed_phipsi(K, L, Q, phi.f, psi.f, gr);
  r.rhs = phi.f(vk / vq * psi.f(std::pow(vl / vk, 1.0 / n))) * vq;
  const bool dil = dilatates(K, L, gr) && dilatates(K, Q, gr);
  if (dil) r.flags.push_back("dilatates");
  const Relation rel = dil ? Relation::Eq : Relation::Ge;
  inequality_verdict(r, rel, cfg);
  r.note = relation_text(rel);
  if (r.status == CheckStatus::Fail) {
    r.witness = Json{{"K", body_to_json(K)}, {"L", body_to_json(L)}, {"Q", body_to_json(Q)}, {"phi", phi.label},
                     {"psi", psi.label}, {"grid", grid_json(grid)}};
  }
  return r;
}

CheckResult check_minkowski_first(const StarBody& K, const StarBody& L, const GridPtr& grid,
                                  const VerifyConfig& cfg) {
  if (!K.is_convex() || !L.is_convex()) throw ValidationError("Minkowski first inequality: bodies must be convex");
  const SphereGrid& gr = *grid;
  const int n = gr.dim();
  CheckResult r;
  r.name = "minkowski_first";
  const double vk = volume(K, gr), vl = volume(L, gr);
  r.lhs = v1_radial(K, L, gr);
  r.rhs = std::pow(vk, (n - 1.0) / n) * std::pow(vl, 1.0 / n);
  double ratio = 0.0;
  const bool dil = dilatates(K, L, gr, &ratio);
  if (dil) r.flags.push_back("dilatates");
  const Relation rel = dil ? Relation::Eq : Relation::Ge;
  inequality_verdict(r, rel, cfg);
  r.note = relation_text(rel);
  if (r.status == CheckStatus::Fail) {
    r.witness = Json{{"K", body_to_json(K)}, {"L", body_to_json(L)}, {"grid", grid_json(grid)}};
  }
  return r;
}

CheckResult check_uniqueness_probe(const StarBody& K, const StarBody& L, double q, const ScalarFn& phi,
                                   const StarBody& Q, const GridPtr& grid, const VerifyConfig& cfg,
                                   const std::vector<double>& ladder) {
  if (q == 0.0 || !std::isfinite(q)) throw ValidationError("uniqueness probe: q must be a nonzero finite number");
  const SphereGrid& gr = *grid;
  CheckResult r;
  r.name = "uniqueness_probe";
  const Shape shape = sample_shape([&](double t) { return phi.f(std::pow(t, 1.0 / q)); });
  r.flags.push_back("phi_q " + to_string(shape));

  std::vector<std::pair<std::string, StarBody>> family{{"K", K}, {"L", L}};
  for (double a : ladder) {
    family.emplace_back(fmt(a) + "K", scale(K, a));
    family.emplace_back(fmt(a) + "L", scale(L, a));
  }
  double worst = -1.0;
  std::string worst_label;
  for (const auto& [label, M] : family) {
    const double a = mixed_q_phi(K, M, Q, q, phi.f, gr);
    const double b = mixed_q_phi(L, M, Q, q, phi.f, gr);
    const double d = std::abs(a - b) / std::max(std::abs(a), std::abs(b));
    if (d > worst) {
      worst = d;
      worst_label = label;
      r.lhs = a;
      r.rhs = b;
    }
  }
  const Vec rk = radial_on_grid(K, gr), rl = radial_on_grid(L, gr);
  const double dist = (rk - rl).cwiseAbs().maxCoeff() / rk.maxCoeff();
  r.gap = worst;
  r.tolerance = cfg.probe_tol;
  double ratio = 1.0;
  const bool dil = dilatates(K, L, gr, &ratio);
  if (worst > cfg.probe_tol) {
    r.status = CheckStatus::Pass;
    r.note = "hypothesis fails on M = " + worst_label + " (relative gap " + fmt(worst) + "); no constraint on K, L";
  } else if (dist <= cfg.distance_tol) {
    r.status = CheckStatus::Pass;
    r.note = "hypothesis holds on the family and K = L (radial distance " + fmt(dist) + ")";
  } else if (strict(shape)) {
    r.status = CheckStatus::Fail;
    r.note = "hypothesis holds on the family with K != L although phi_q is " + to_string(shape);
  } else {
    r.status = CheckStatus::Inconclusive;
    r.note = "hypothesis holds on the family yet K != L (radial distance " + fmt(dist) + "); phi_q is " +
             to_string(shape);
  }
  if (dil && dist > cfg.distance_tol) r.flags.push_back("dilation r=" + fmt(ratio));
  if (r.status == CheckStatus::Fail) {
    r.witness = Json{{"K", body_to_json(K)}, {"L", body_to_json(L)}, {"Q", body_to_json(Q)}, {"q", q},
                     {"phi", phi.label}, {"grid", grid_json(grid)}};
  }
  return r;
}

// ---------------------------------------------------------------------------
// Random inputs

std::mt19937_64 trial_rng(std::uint64_t seed, int trial, int stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

HPolytope random_polygon(std::mt19937_64& rng, int min_facets, int max_facets) {
  if (min_facets < 3 || max_facets < min_facets) throw ValidationError("random polygon: bad facet range");
  const int m = min_facets + static_cast<int>(uniform(rng, 0.0, 1.0) * (max_facets - min_facets + 1) * 0.999999);
  const double phase = uniform(rng, 0.0, 2.0 * kPi);
  const double step = 2.0 * kPi / m;
  HPolytope P;
  P.normals.resize(2, m);
  P.supports.resize(m);
  for (int k = 0; k < m; ++k) {
    const double a = phase + k * step + uniform(rng, -0.25, 0.25) * step;
    P.normals.col(k) << std::cos(a), std::sin(a);
    P.supports[k] = uniform(rng, 0.6, 1.4);
  }
  return P;
}

HPolytope random_polytope(std::mt19937_64& rng, int n) {
  if (n == 2) return random_polygon(rng);
  if (n != 3) throw ValidationError("random polytope: n must be 2 or 3");
  HPolytope P;
  P.normals.resize(3, 14);
  int c = 0;
  for (int i = 0; i < 3; ++i) {
    for (double s : {1.0, -1.0}) {
      Vec v = Vec::Zero(3);
      v[i] = s;
      P.normals.col(c++) = v;
    }
  }
  for (double a : {1.0, -1.0})
    for (double b : {1.0, -1.0})
      for (double d : {1.0, -1.0}) P.normals.col(c++) = Vec((Vec(3) << a, b, d).finished() / std::sqrt(3.0));
  P.supports.resize(14);
  for (int i = 0; i < 14; ++i) P.supports[i] = uniform(rng, 0.7, 1.3);
  return P;
}

StarBody random_ellipsoid(std::mt19937_64& rng, int n) {
  Vec a(n);
  for (int i = 0; i < n; ++i) a[i] = uniform(rng, 0.6, 1.6);
  return ellipsoid(a);
}

HPolytope rotate2(const HPolytope& P, double angle) {
  if (P.dim() != 2) throw ValidationError("rotate2: planar polytope expected");
  Eigen::Matrix2d R;
  R << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return HPolytope{R * P.normals, P.supports};
}

// ---------------------------------------------------------------------------
// Suites

namespace {

StarBody random_body(std::mt19937_64& rng, int n, int trial) {
  if (trial % 2 == 0) return StarBody(random_polytope(rng, n));
  return random_ellipsoid(rng, n);
}

GFn random_G(std::mt19937_64& rng, int n) {
  double q = uniform(rng, -2.0, 4.0);
  if (std::abs(q) < 0.3) q = 0.3 + std::abs(q);
  return make_G_qQ(q, random_ellipsoid(rng, n));
}

// G = (1/n) t^q rho_Q^{n-q} (1 + beta t)^gamma; G_q monotone with the sign of gamma.
GFn tilted_G(double q, const StarBody& Q, double beta, double gamma) {
  const GFn base = make_G_qQ(q, Q);
  GFn G = base;
  G.eval = [base, beta, gamma](double t, const DirRef& u) {
    return base.eval(t, u) * std::pow(1.0 + beta * t, gamma);
  };
  G.deriv_t = [base, beta, gamma](double t, const DirRef& u) {
    const double f = std::pow(1.0 + beta * t, gamma);
    return base.deriv_t(t, u) * f + base.eval(t, u) * gamma * beta * f / (1.0 + beta * t);
  };
  G.sign = GtSign::Mixed;
  G.positive = true;
  G.label = base.label + " (1+" + fmt(beta) + "t)^" + fmt(gamma);
  return G;
}

Vec random_field(std::mt19937_64& rng, const SphereGrid& grid) {
  const int n = grid.dim();
  Vec a(n);
  for (int i = 0; i < n; ++i) a[i] = uniform(rng, -0.5, 0.5);
  Mat B = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) B(i, k) = uniform(rng, -0.3, 0.3);
  const double c = uniform(rng, -0.5, 1.0);
  Vec g(grid.size());
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const Vec u = grid.node(j);
    g[j] = c + a.dot(u) + u.dot(B * u);
  }
  return g;
}

void tag(CheckResult& r, int trial, std::vector<CheckResult>& out) {
  r.trial = trial;
  out.push_back(std::move(r));
}

template <class F>
void guarded(const std::string& name, int trial, std::vector<CheckResult>& out, F&& f) {
  try {
    CheckResult r = f();
    tag(r, trial, out);
  } catch (const std::exception& e) {
    CheckResult r;
    r.name = name;
    r.status = CheckStatus::Fail;
    r.note = std::string("exception: ") + e.what();
    tag(r, trial, out);
  }
}

void variational_trial(std::uint64_t seed, int t, const GridPtr& grid, const VerifyConfig& cfg,
                       std::vector<CheckResult>& out) {
  const int n = grid->dim();
  guarded("variational_radial", t, out, [&] {
    auto rng = trial_rng(seed, t, 1);
    const StarBody K = random_body(rng, n, t), L = random_body(rng, n, t + 1);
    const bool dec = t % 4 == 3;
    const double p1 = uniform(rng, 1.0, 3.0), p2 = uniform(rng, 1.0, 3.0);
    const OrliczFn phi1 = make_power_phi(dec ? -p1 : p1), phi2 = make_power_phi(dec ? -p2 : p2);
    return check_variational_radial(K, L, phi1, phi2, random_G(rng, n), grid, cfg);
  });
  guarded("variational_hat", t, out, [&] {
    auto rng = trial_rng(seed, t, 2);
    const StarBody K = random_body(rng, n, t);
    const OrliczFn phi = t % 3 == 0 ? make_log_phi() : phi_from_psi(make_power_psi(uniform(rng, 0.5, 2.0)));
    const Vec g = random_field(rng, *grid);
    return check_variational_hat(K, g, phi, random_G(rng, n), grid, cfg);
  });
  guarded("variational_wulff", t, out, [&] {
    auto rng = trial_rng(seed, t, 3);
    const HPolytope P = random_polytope(rng, n);
    Vec g(P.facets());
    for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = uniform(rng, -1.0, 1.0);
    const OrliczFn phi = t % 3 == 0 ? make_log_phi() : phi_from_psi(make_power_psi(uniform(rng, 0.2, 2.0)));
    return check_variational_wulff(P, g, phi, random_G(rng, n), grid, cfg);
  });
  guarded("variational_two", t, out, [&] {
    auto rng = trial_rng(seed, t, 4);
    const HPolytope P = random_polytope(rng, n);
    Vec h2(P.facets());
    for (Eigen::Index i = 0; i < h2.size(); ++i) h2[i] = uniform(rng, 0.6, 1.4);
    const OrliczFn phi1 = make_power_phi(uniform(rng, 1.0, 3.0)), phi2 = make_power_phi(uniform(rng, 1.0, 3.0));
    return check_variational_two(P, h2, phi1, phi2, random_G(rng, n), grid, cfg);
  });
}

void inequality_trial(std::uint64_t seed, int t, const GridPtr& grid, const VerifyConfig& cfg,
                      std::vector<CheckResult>& out) {
  const int n = grid->dim();
  const bool equality_trial = t % 10 == 0;
  guarded("dual_bm", t, out, [&] {
    auto rng = trial_rng(seed, t, 11);
    const double q = signed_uniform(rng, 0.5, 3.0);
    double p = signed_uniform(rng, 0.5, 3.0);
    if (std::abs(p / q - 1.0) < 0.1) p *= 1.5;
    const double a = p / q;
    const bool convex = a > 1.0 || a < 0.0;
    // pick the G_q monotonicity that puts the trial in an applicable sign case
    const bool increasing = convex ? q > 0 : q < 0;
    const double gamma = equality_trial ? 0.0 : (increasing ? 1.0 : -1.0) * uniform(rng, 0.2, 1.0);
    const GFn G = tilted_G(q, random_ellipsoid(rng, n), uniform(rng, 0.5, 2.0), gamma);
    std::vector<StarBody> bodies;
    const int m = 2 + static_cast<int>(t % 2);
    if (equality_trial) {
      const StarBody K = random_body(rng, n, t);
      for (int j = 0; j < m; ++j) bodies.push_back(scale(K, 0.7 + 0.3 * j));
    } else {
      for (int j = 0; j < m; ++j) bodies.push_back(random_body(rng, n, t + j));
    }
    return check_dual_bm(bodies, power_sum_phi(p), G, q, grid, cfg);
  });
  guarded("dual_minkowski", t, out, [&] {
    auto rng = trial_rng(seed, t, 12);
    const double q = signed_uniform(rng, 0.5, 3.0);
    double p = signed_uniform(rng, 0.5, 4.0);
    if (std::abs(p / q - 1.0) < 0.1) p *= 1.5;
    const StarBody K = random_body(rng, n, t);
    const StarBody L = equality_trial ? scale(K, uniform(rng, 0.5, 2.0)) : random_body(rng, n, t + 1);
    const StarBody Q = random_ellipsoid(rng, n);
    return check_dual_minkowski(K, L, Q, q, scalar(make_power_phi(p)), grid, cfg);
  });
  guarded("phi_psi_minkowski", t, out, [&] {
    auto rng = trial_rng(seed, t, 13);
    const StarBody K = random_body(rng, n, t);
    const StarBody L = equality_trial ? scale(K, 1.2) : random_body(rng, n, t + 1);
    const StarBody Q = equality_trial ? scale(K, 0.9) : random_ellipsoid(rng, n);
    const double a = uniform(rng, 1.0, 3.0), b = uniform(rng, 1.0, 3.0);
    const ScalarFn phi = t % 2 == 0 ? scalar(make_power_phi(a)) : ScalarFn{[](double s) { return std::expm1(s); }, "e^t-1"};
    return check_thm2(K, L, Q, phi, scalar(make_power_phi(b)), grid, cfg);
  });
  guarded("minkowski_first", t, out, [&] {
    auto rng = trial_rng(seed, t, 14);
    const StarBody K(random_polytope(rng, n));
    const StarBody L = equality_trial ? scale(K, 1.5) : StarBody(random_polytope(rng, n));
    return check_minkowski_first(K, L, grid, cfg);
  });
}

void uniqueness_trial(std::uint64_t seed, int t, const GridPtr& grid, const VerifyConfig& cfg,
                      std::vector<CheckResult>& out) {
  const int n = grid->dim();
  guarded("uniqueness_probe", t, out, [&] {
    auto rng = trial_rng(seed, t, 21);
    const HPolytope P = random_polytope(rng, n);
    const StarBody K(P);
    const StarBody Q = random_ellipsoid(rng, n);
    switch (t % 3) {
      case 0: {
        const double q = uniform(rng, 0.5, 3.0);
        return check_uniqueness_probe(K, K, q, scalar(make_power_phi(2.0 * q)), Q, grid, cfg);
      }
      case 1:
        return check_uniqueness_probe(K, scale(K, 1.1), n, scalar(make_self_similar_phi(n, 1.1)), Q, grid, cfg);
      default: {
        const double q = uniform(rng, 0.5, 3.0);
        const StarBody L = n == 2 ? StarBody(rotate2(P, uniform(rng, 0.1, 0.5))) : StarBody(random_polytope(rng, n));
        return check_uniqueness_probe(K, L, q, scalar(make_power_phi(2.0 * q)), Q, grid, cfg);
      }
    }
  });
}

void valuation_trial(std::uint64_t seed, int t, const GridPtr& grid, const VerifyConfig& cfg,
                     std::vector<CheckResult>& out) {
  const int n = grid->dim();
  guarded("valuation", t, out, [&] {
    auto rng = trial_rng(seed, t, 31);
    const HPolytope P = random_polytope(rng, n);
    Vec w(n);
    for (int i = 0; i < n; ++i) w[i] = uniform(rng, -1.0, 1.0);
    w.normalize();
    const double a = uniform(rng, 0.1, 0.4), b = -uniform(rng, 0.1, 0.4);
    const GFn G = make_G_qQ(uniform(rng, 1.0, 3.0), ball(n));
    const PsiFn psi = make_power_psi(uniform(rng, 0.0, 2.0));
    Vec c(n);
    for (int i = 0; i < n; ++i) c[i] = uniform(rng, -0.5, 0.5);
    const DirField g = [c](const DirRef& u) { return 1.0 + c.dot(u) + 0.3 * u[0] * u[0]; };
    CheckResult r;
    r.name = "valuation";
    r.lhs = valuation_check(P, w, a, b, G, psi, g, *grid);
    r.rhs = 0.0;
    r.gap = r.lhs;
    r.tolerance = 1e-6;
    r.status = r.gap < r.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
    r.note = "|I(K cap L) + I(K cup L) - I(K) - I(L)|";
    if (r.status == CheckStatus::Fail) {
      r.witness = Json{{"P", body_to_json(StarBody(P))}, {"w", to_json(w)}, {"a", a}, {"b", b},
                       {"G", G.label}, {"psi", psi.label}, {"grid", grid->id()}};
    }
    (void)cfg;
    return r;
  });
}

}  // namespace

int SuiteReport::count(CheckStatus s) const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [s](const CheckResult& r) { return r.status == s; }));
}

std::vector<std::string> suite_names() { return {"variational", "inequalities", "uniqueness", "valuation"}; }

SuiteReport run_suite(std::uint64_t seed, int trials, const GridPtr& grid, const std::vector<std::string>& suites,
                      const VerifyConfig& cfg) {
  if (trials < 0) throw ValidationError("verify: trials must be non-negative");
  if (!grid) throw ValidationError("verify: no grid");
  if (!(cfg.fd_tol > 0.0) || !(cfg.equality_tol > 0.0) || !(cfg.slack > 0.0) || !(cfg.probe_tol > 0.0) ||
      !(cfg.distance_tol > 0.0)) {
    throw ValidationError("verify: tolerances must be positive");
  }
  std::vector<std::string> chosen;
  for (const auto& s : suites) {
    if (s == "all") {
      chosen = suite_names();
      break;
    }
    const auto names = suite_names();
    if (std::find(names.begin(), names.end(), s) == names.end()) {
      throw ValidationError("verify: unknown suite '" + s + "' (expected all, variational, inequalities, uniqueness, valuation)");
    }
    if (std::find(chosen.begin(), chosen.end(), s) == chosen.end()) chosen.push_back(s);
  }
  SuiteReport rep;
  rep.seed = seed;
  rep.trials = trials;
  rep.grid_id = grid->id();
  rep.dim = grid->dim();
  rep.suites = chosen;
  for (const auto& s : chosen) {
    for (int t = 0; t < trials; ++t) {
      if (s == "variational") variational_trial(seed, t, grid, cfg, rep.checks);
      else if (s == "inequalities") inequality_trial(seed, t, grid, cfg, rep.checks);
      else if (s == "uniqueness") uniqueness_trial(seed, t, grid, cfg, rep.checks);
      else valuation_trial(seed, t, grid, cfg, rep.checks);
    }
  }
  return rep;
}

Json to_json(const CheckResult& r) {
  Json j{{"name", r.name},   {"status", to_string(r.status)}, {"lhs", r.lhs},     {"rhs", r.rhs},
         {"gap", r.gap},     {"tolerance", r.tolerance},      {"order", r.order}, {"trial", r.trial},
         {"note", r.note},   {"flags", r.flags}};
  j["witness"] = r.witness.is_null() ? Json() : r.witness;
  return j;
}

Json report_json(const SuiteReport& rep) {
  Json checks = Json::array();
  for (const auto& c : rep.checks) checks.push_back(to_json(c));
  return Json{{"schema", "dov-verify-report/1"},
              {"seed", rep.seed},
              {"trials", rep.trials},
              {"grid", rep.grid_id},
              {"dim", rep.dim},
              {"suites", rep.suites},
              {"summary",
               {{"pass", rep.count(CheckStatus::Pass)},
                {"fail", rep.count(CheckStatus::Fail)},
                {"inconclusive", rep.count(CheckStatus::Inconclusive)}}},
              {"checks", checks}};
}

std::string report_csv(const SuiteReport& rep) {
  std::ostringstream os;
  os << "name,trial,status,lhs,rhs,gap,tolerance,order,note\n";
  for (const auto& c : rep.checks) {
    std::string note = c.note;
    std::replace(note.begin(), note.end(), '"', '\'');
    os << c.name << ',' << c.trial << ',' << to_string(c.status) << ',' << fmt17(c.lhs) << ',' << fmt17(c.rhs) << ','
       << fmt17(c.gap) << ',' << fmt17(c.tolerance) << ',' << fmt17(c.order) << ",\"" << note << "\"\n";
  }
  return os.str();
}

}  // namespace dov
