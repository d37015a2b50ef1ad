#include "dov/bodies.hpp"

#include "dov/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dov {

StarBody::StarBody(AnalyticBody b) : rep_(std::move(b)) {}
StarBody::StarBody(RadialSamples b) : rep_(std::move(b)) {
  const auto& s = std::get<RadialSamples>(rep_);
  if (!s.grid) throw ValidationError("radial samples: missing grid");
  if (s.values.size() != s.grid->size()) throw ValidationError("radial samples: value count does not match grid");
  if (!(s.values.array() > 0.0).all() || !s.values.allFinite()) {
    throw ValidationError("radial samples: radial values must be positive and finite");
  }
}
StarBody::StarBody(HPolytope b) : rep_(std::move(b)) { validate(std::get<HPolytope>(rep_)); }
StarBody::StarBody(PointHull b) : rep_(std::move(b)) {
  const auto& h = std::get<PointHull>(rep_);
  if (h.points.cols() == 0) throw ValidationError("point hull: no points");
  Mat dirs = h.points;
  for (Eigen::Index j = 0; j < dirs.cols(); ++j) {
    const double r = dirs.col(j).norm();
    if (!(r > 0.0)) throw ValidationError("point hull: point at the origin");
    dirs.col(j) /= r;
  }
  if (!is_bounded(dirs)) throw ValidationError("point hull: origin is not an interior point");
}

int StarBody::dim() const {
  return std::visit(
      [](const auto& b) -> int {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, AnalyticBody>) return b.dim;
        else if constexpr (std::is_same_v<T, RadialSamples>) return b.grid->dim();
        else if constexpr (std::is_same_v<T, HPolytope>) return b.dim();
        else return static_cast<int>(b.points.rows());
      },
      rep_);
}

bool StarBody::is_convex() const {
  return std::visit(
      [](const auto& b) -> bool {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, AnalyticBody>) return static_cast<bool>(b.support);
        else if constexpr (std::is_same_v<T, RadialSamples>) return b.convex;
        else return true;
      },
      rep_);
}

namespace {

void check_dim(const StarBody& body, const Vec& u, const char* what) {
  if (u.size() != body.dim()) {
    throw ValidationError(std::string(what) + ": direction has dimension " + std::to_string(u.size()) +
                          ", body has " + std::to_string(body.dim()));
  }
}

// 1 / gauge of conv{x_j} at u, via min sum(mu) s.t. X mu = u, mu >= 0.
double hull_radial(const PointHull& h, const Vec& u) {
  LpResult r = solve_standard_lp(h.points, u, Vec::Ones(h.points.cols()));
  if (r.status != LpStatus::Optimal || !(r.value > 0.0)) {
    throw NumericalError("point hull radial: gauge program failed at u=" + format_vec(u));
  }
  return 1.0 / r.value;
}

}  // namespace

double radial(const HPolytope& p, const Vec& u) {
  const Vec dots = p.normals.transpose() * u;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < dots.size(); ++i) {
    if (dots[i] > kPositiveDenominator) best = std::min(best, p.supports[i] / dots[i]);
  }
  if (!std::isfinite(best)) throw NumericalError("polytope radial: no facet faces u=" + format_vec(u));
  return best;
}

double support(const HPolytope& p, const Vec& u) {
  LpResult r = solve_standard_lp(p.normals, u, p.supports);
  if (r.status != LpStatus::Optimal) {
    throw NumericalError("polytope support: infeasible program at u=" + format_vec(u) + " (unbounded polytope?)");
  }
  return r.value;
}

double radial(const StarBody& body, const Vec& u) {
  check_dim(body, u, "radial");
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, AnalyticBody>) return b.radial(u);
        else if constexpr (std::is_same_v<T, RadialSamples>) return b.values[b.grid->nearest(u)];
        else if constexpr (std::is_same_v<T, HPolytope>) return radial(b, u);
        else return hull_radial(b, u);
      },
      body.rep());
}

double support(const StarBody& body, const Vec& u) {
  check_dim(body, u, "support");
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, AnalyticBody>) {
          if (!b.support) throw ValidationError("support: body '" + b.label + "' is not marked convex");
          return b.support(u);
        } else if constexpr (std::is_same_v<T, RadialSamples>) {
          if (!b.convex) throw ValidationError("support: radial samples are not marked convex");
          return (b.grid->nodes().transpose() * u).cwiseProduct(b.values).maxCoeff();
        } else if constexpr (std::is_same_v<T, HPolytope>) {
          return support(b, u);
        } else {
          return (b.points.transpose() * u).maxCoeff();
        }
      },
      body.rep());
}

Vec radial_on_grid(const StarBody& body, const SphereGrid& grid) {
  if (body.dim() != grid.dim()) throw ValidationError("radial_on_grid: dimension mismatch");
  if (const auto* s = body.samples()) {
    if (s->grid.get() == &grid || (s->grid->spec().str() == grid.spec().str() && s->grid->size() == grid.size())) {
      return s->values;
    }
  }
  if (const auto* p = body.polytope()) return trace_rays(*p, grid).rho;
  return eval_on_grid(grid, [&](const auto& u) { return radial(body, Vec(u)); });
}

bool is_bounded(const Mat& normals) {
  const Eigen::Index n = normals.rows();
  const Vec zeros = Vec::Zero(normals.cols());
  for (Eigen::Index k = 0; k < n; ++k) {
    for (double s : {1.0, -1.0}) {
      Vec e = Vec::Zero(n);
      e[k] = s;
      if (solve_standard_lp(normals, e, zeros).status != LpStatus::Optimal) return false;
    }
  }
  return true;
}

void validate(const HPolytope& p) {
  if (p.normals.cols() != p.supports.size()) throw ValidationError("polytope: normal and support counts differ");
  if (p.dim() < 2) throw ValidationError("polytope: dimension must be >= 2");
  for (Eigen::Index i = 0; i < p.facets(); ++i) {
    require_unit(p.normals.col(i), "polytope normal");
    if (!(p.supports[i] > 0.0) || !std::isfinite(p.supports[i])) {
      throw ValidationError("polytope: support " + std::to_string(i) + " must be positive");
    }
  }
  if (!is_bounded(p.normals)) {
    throw ValidationError("polytope: normals lie in a closed hemisphere (unbounded polytope)");
  }
}

StarBody ball(int n, double r) {
  if (n < 2) throw ValidationError("ball: dimension must be >= 2");
  return ellipsoid(Vec::Constant(n, r));
}

StarBody ellipsoid(const Vec& semiaxes) {
  if (semiaxes.size() < 2) throw ValidationError("ellipsoid: dimension must be >= 2");
  if (!(semiaxes.array() > 0.0).all()) throw ValidationError("ellipsoid: semiaxes must be positive");
  AnalyticBody b;
  b.dim = static_cast<int>(semiaxes.size());
  const Vec inv2 = semiaxes.array().square().inverse();
  const Vec a2 = semiaxes.array().square();
  const bool round = (semiaxes.array() == semiaxes[0]).all();
  if (round) {
    const double r = semiaxes[0];
    b.radial = [r](const Vec&) { return r; };
    b.support = [r](const Vec&) { return r; };
    b.gauss_map = [](const Vec& x) -> Vec { return x.normalized(); };
    b.label = "ball";
  } else {
    b.radial = [inv2](const Vec& u) { return 1.0 / std::sqrt(u.cwiseAbs2().dot(inv2)); };
    b.support = [a2](const Vec& u) { return std::sqrt(u.cwiseAbs2().dot(a2)); };
    b.gauss_map = [inv2](const Vec& x) -> Vec { return x.cwiseProduct(inv2).normalized(); };
    b.label = "ellipsoid";
  }
  b.semiaxes = semiaxes;
  return StarBody(std::move(b));
}

StarBody cube(int n, double a) {
  Mat normals = Mat::Zero(n, 2 * n);
  for (int k = 0; k < n; ++k) {
    normals(k, 2 * k) = 1.0;
    normals(k, 2 * k + 1) = -1.0;
  }
  return hpolytope(std::move(normals), Vec::Constant(2 * n, a));
}

StarBody regular_polygon(int m, double h, double phase) {
  if (m < 3) throw ValidationError("regular_polygon: need at least 3 facets");
  Mat normals(2, m);
  for (int k = 0; k < m; ++k) {
    const double a = phase + 2.0 * kPi * k / m;
    normals(0, k) = std::cos(a);
    normals(1, k) = std::sin(a);
  }
  return hpolytope(std::move(normals), Vec::Constant(m, h));
}

StarBody hpolytope(Mat normals, Vec supports) { return StarBody(HPolytope{std::move(normals), std::move(supports)}); }

StarBody scale(const StarBody& body, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("scale: factor must be positive");
  return std::visit(
      [&](const auto& b) -> StarBody {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, AnalyticBody>) {
          if (b.semiaxes) return ellipsoid(*b.semiaxes * r);
          AnalyticBody s = b;
          s.radial = [f = b.radial, r](const Vec& u) { return r * f(u); };
          if (b.support) s.support = [f = b.support, r](const Vec& u) { return r * f(u); };
          if (b.gauss_map) s.gauss_map = [f = b.gauss_map, r](const Vec& x) { return f(x / r); };
          return StarBody(std::move(s));
        } else if constexpr (std::is_same_v<T, RadialSamples>) {
          return StarBody(RadialSamples{b.grid, b.values * r, b.convex});
        } else if constexpr (std::is_same_v<T, HPolytope>) {
          return StarBody(HPolytope{b.normals, b.supports * r});
        } else {
          return StarBody(PointHull{b.points * r});
        }
      },
      body.rep());
}

StarBody polar(const StarBody& body) {
  if (!body.is_convex()) throw ValidationError("polar: body is not convex");
  return std::visit(
      [&](const auto& b) -> StarBody {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, AnalyticBody>) {
          if (b.semiaxes) return ellipsoid(b.semiaxes->cwiseInverse());
          AnalyticBody p;
          p.dim = b.dim;
          p.radial = [f = b.support](const Vec& u) { return 1.0 / f(u); };
          p.support = [f = b.radial](const Vec& u) { return 1.0 / f(u); };
          p.label = "polar(" + b.label + ")";
          return StarBody(std::move(p));
        } else if constexpr (std::is_same_v<T, RadialSamples>) {
          // conv{rho_j u_j}, whose polar is the Wulff shape of 1/rho
          return wulff(b.grid->nodes(), b.values.cwiseInverse());
        } else if constexpr (std::is_same_v<T, HPolytope>) {
          Mat pts = b.normals;
          for (Eigen::Index i = 0; i < pts.cols(); ++i) pts.col(i) /= b.supports[i];
          return StarBody(PointHull{std::move(pts)});
        } else {
          Mat normals = b.points;
          Vec supports(b.points.cols());
          for (Eigen::Index j = 0; j < normals.cols(); ++j) {
            const double r = normals.col(j).norm();
            normals.col(j) /= r;
            supports[j] = 1.0 / r;
          }
          return StarBody(HPolytope{std::move(normals), std::move(supports)});
        }
      },
      body.rep());
}

StarBody wulff(const Mat& normals, const Vec& f) {
  if (normals.cols() != f.size()) throw ValidationError("wulff: field size does not match normals");
  if (!(f.array() > 0.0).all()) throw ValidationError("wulff: field must be positive");
  return StarBody(HPolytope{normals, f});
}

StarBody wulff(const SphereGrid& grid, const Vec& f) { return wulff(grid.nodes(), f); }

StarBody hull(const Mat& directions, const Vec& f) {
  if (directions.cols() != f.size()) throw ValidationError("hull: field size does not match directions");
  if (!(f.array() > 0.0).all()) throw ValidationError("hull: field must be positive");
  return StarBody(PointHull{directions * f.asDiagonal()});
}

StarBody hull(const SphereGrid& grid, const Vec& f) { return hull(grid.nodes(), f); }

double check_polar_hull_relation(const Vec& f, const SphereGrid& grid, const SphereGrid& probe) {
  if (probe.dim() != grid.dim()) throw ValidationError("check_polar_hull_relation: dimension mismatch");
  // Pipeline 1: [f] sampled at the nodes, polar support 1/rho at the nearest node.
  const StarBody shape = wulff(grid, f);
  auto sampled_grid = std::make_shared<const SphereGrid>(grid);
  const StarBody sampled(RadialSamples{sampled_grid, radial_on_grid(shape, grid), true});
  // Pipeline 2: support of <1/f> directly.
  const StarBody inverse_hull = hull(grid, f.cwiseInverse());
  double worst = 0.0;
  for (Eigen::Index j = 0; j < probe.size(); ++j) {
    const Vec v = probe.node(j);
    const double lhs = 1.0 / radial(sampled, v);
    const double rhs = support(inverse_hull, v);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

bool has_alpha_map(const StarBody& body) {
  if (body.polytope()) return true;
  if (const auto* a = body.analytic()) return static_cast<bool>(a->gauss_map);
  return false;
}

namespace {

// Lowest-index argmin of h_i / <v_i, u> with relative tie tolerance.
Eigen::Index polytope_argmin(const HPolytope& p, const Vec& u, double* rho_out) {
  const Vec dots = p.normals.transpose() * u;
  Eigen::Index best = -1;
  double value = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < dots.size(); ++i) {
    if (dots[i] <= kPositiveDenominator) continue;
    const double r = p.supports[i] / dots[i];
    if (best < 0 || r < value * (1.0 - 1e-12)) {
      best = i;
      value = std::min(value, r);
    } else {
      value = std::min(value, r);
    }
  }
  if (best < 0) throw NumericalError("alpha map: no facet faces u=" + format_vec(u));
  if (rho_out) *rho_out = value;
  return best;
}

}  // namespace

AlphaValue alpha_map(const StarBody& body, const Vec& u) {
  check_dim(body, u, "alpha_map");
  if (const auto* p = body.polytope()) {
    const Eigen::Index i = polytope_argmin(*p, u, nullptr);
    return AlphaValue{p->normals.col(i), i};
  }
  if (const auto* a = body.analytic(); a && a->gauss_map) {
    const Vec x = a->radial(u) * u;
    return AlphaValue{a->gauss_map(x), std::nullopt};
  }
  throw ValidationError("alpha map requires polytope or Gauss map");
}

BoundaryPoint boundary_point(const StarBody& body, const Vec& u) {
  BoundaryPoint bp;
  bp.direction = u;
  if (const auto* p = body.polytope()) {
    double rho = 0.0;
    bp.facet = polytope_argmin(*p, u, &rho);
    bp.radius = rho;
  } else {
    bp.radius = radial(body, u);
  }
  return bp;
}

PolytopeRays trace_rays(const HPolytope& p, const SphereGrid& grid) {
  if (p.dim() != grid.dim()) throw ValidationError("trace_rays: dimension mismatch");
  const Eigen::Index n = grid.size();
  const Mat dots = p.normals.transpose() * grid.nodes();  // m x N
  PolytopeRays out;
  out.rho.resize(n);
  out.facet.resize(n);
  std::vector<std::vector<Eigen::Index>> tied(n);
  parallel_for(n, [&](std::ptrdiff_t j) {
    Eigen::Index best = -1;
    double value = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < dots.rows(); ++i) {
      const double d = dots(i, j);
      if (d <= kPositiveDenominator) continue;
      const double r = p.supports[i] / d;
      if (r < value) {
        value = r;
        best = i;
      }
    }
    if (best < 0) throw NumericalError("trace_rays: no facet faces node " + std::to_string(j));
    std::vector<Eigen::Index> ties;
    for (Eigen::Index i = 0; i < dots.rows(); ++i) {
      const double d = dots(i, j);
      if (d <= kPositiveDenominator) continue;
      if (p.supports[i] / d <= value * (1.0 + 1e-12)) ties.push_back(i);
    }
    out.rho[j] = value;
    out.facet[j] = static_cast<int>(ties.front());
    if (ties.size() > 1) tied[j] = std::move(ties);
  });
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!tied[j].empty()) {
      out.tied_weight += grid.weight(j);
      out.ties.emplace_back(j, std::move(tied[j]));
    }
  }
  return out;
}

std::vector<Eigen::Index> empty_facets(const HPolytope& p, const PolytopeRays& rays) {
  std::vector<char> seen(p.facets(), 0);
  for (Eigen::Index j = 0; j < rays.facet.size(); ++j) seen[rays.facet[j]] = 1;
  for (const auto& [j, ids] : rays.ties)
    for (auto i : ids) seen[i] = 1;
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < p.facets(); ++i)
    if (!seen[i]) out.push_back(i);
  return out;
}

}  // namespace dov
