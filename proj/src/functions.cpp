#include "dov/functions.hpp"

#include "dov/bodies.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>

namespace dov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// sign-aware limit of f along t_k = 10^{k*dir}, k = 4..8
double ladder_limit(const std::function<double(double)>& f, int dir) {
  double v[5];
  for (int k = 0; k < 5; ++k) v[k] = f(std::pow(10.0, dir * (4.0 + k)));
  for (double x : v) {
    if (std::isnan(x)) return std::nan("");
  }
  if (std::isinf(v[4])) return v[4];
  double d[4];
  for (int k = 0; k < 4; ++k) d[k] = v[k + 1] - v[k];
  if (d[3] == 0.0) return v[4];
  const double scale = std::max(1.0, std::abs(v[4]));
  if (std::abs(d[3]) < 1e-14 * scale) return v[4];
  const double r1 = d[2] / d[1];
  const double r2 = d[3] / d[2];
  if (r1 > 0.0 && r2 > 0.0 && r1 < 1.0 - 1e-6 && r2 < 1.0 - 1e-6) {
    return v[4] + d[3] * r2 / (1.0 - r2);
  }
  if (r2 <= 0.0) return v[4];  // oscillating at rounding level
  return d[3] > 0.0 ? kInf : -kInf;
}

double gk_integral(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  double err = 0.0;
  const double sign = b < a ? -1.0 : 1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, 1e-13, &err);
  if (!std::isfinite(value)) throw NumericalError("quadrature produced a non-finite value");
  return sign * value;
}

void fill_class(OrliczFn& phi) {
  const MonotoneProfile prof = sample_profile(phi.eval);
  if (!prof.increasing && !prof.decreasing) {
    throw ValidationError("function '" + phi.label + "' is not strictly monotone on (0, inf)");
  }
  phi.increasing = prof.increasing;
  phi.cls = classify(prof);
  phi.range_lo = prof.increasing ? prof.limit_zero : prof.limit_inf;
  phi.range_hi = prof.increasing ? prof.limit_inf : prof.limit_zero;
  phi.a = phi.range_lo;
}

}  // namespace

std::string to_string(OrliczClass c) {
  switch (c) {
    case OrliczClass::I: return "I";
    case OrliczClass::D: return "D";
    case OrliczClass::J: return "J";
    case OrliczClass::Monotone: return "monotone";
  }
  return "?";
}

std::string to_string(GtSign s) {
  switch (s) {
    case GtSign::Negative: return "negative";
    case GtSign::Positive: return "positive";
    case GtSign::Mixed: return "mixed";
  }
  return "?";
}

MonotoneProfile sample_profile(const std::function<double(double)>& f) {
  MonotoneProfile p;
  bool inc = true, dec = true;
  double prev = 0.0, first = 0.0;
  for (int k = -80; k <= 80; ++k) {
    const double v = f(std::pow(10.0, k / 10.0));
    if (std::isnan(v)) {
      inc = dec = false;
      break;
    }
    if (k == -80) first = v;
    if (k > -80 && !(std::isinf(v) && v == prev)) {
      // steps below rounding (e.g. near a finite limit) count as ties
      const double tie = 1e-13 * std::max(std::abs(v), std::abs(prev));
      if (!(v > prev - tie)) inc = false;
      if (!(v < prev + tie)) dec = false;
    }
    prev = v;
  }
  p.increasing = inc && prev > first;
  p.decreasing = dec && prev < first;
  p.at_one = f(1.0);
  p.limit_zero = ladder_limit(f, -1);
  p.limit_inf = ladder_limit(f, 1);
  return p;
}

OrliczClass classify(const MonotoneProfile& p) {
  const bool one = std::abs(p.at_one - 1.0) < 1e-6;
  if (p.increasing && one && std::abs(p.limit_zero) < 1e-3 && p.limit_inf == kInf) return OrliczClass::I;
  if (p.decreasing && one && p.limit_zero == kInf && std::abs(p.limit_inf) < 1e-3) return OrliczClass::D;
  if (p.increasing && p.limit_inf == kInf) return OrliczClass::J;
  if (p.decreasing && p.limit_zero == kInf) return OrliczClass::J;
  return OrliczClass::Monotone;
}

double bisect_inverse(const std::function<double(double)>& f, bool increasing, double y) {
  if (!std::isfinite(y)) throw NumericalError("inverse: non-finite argument");
  auto g = [&](double t) { return increasing ? f(t) - y : y - f(t); };
  double lo = 1.0, hi = 1.0;
  if (g(1.0) < 0.0) {
    int k = 0;
    while (!(g(hi) >= 0.0)) {
      lo = hi;
      hi *= 2.0;
      if (++k > 1000) throw NumericalError("inverse: value " + fmt(y) + " outside the range");
    }
  } else {
    int k = 0;
    while (!(g(lo) <= 0.0)) {
      hi = lo;
      lo *= 0.5;
      if (++k > 1000) throw NumericalError("inverse: value " + fmt(y) + " outside the range");
    }
  }
  for (int it = 0; it < 200 && hi > lo * (1.0 + 4e-16); ++it) {
    double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (g(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

OrliczFn make_power_phi(double p) {
  if (p == 0.0 || !std::isfinite(p)) throw ValidationError("power phi: exponent must be a nonzero finite number");
  OrliczFn phi;
  phi.eval = [p](double t) { return std::pow(t, p); };
  phi.deriv = [p](double t) { return p * std::pow(t, p - 1.0); };
  phi.inverse = [p](double y) { return std::pow(y, 1.0 / p); };
  phi.increasing = p > 0.0;
  phi.cls = p > 0.0 ? OrliczClass::I : OrliczClass::D;
  phi.a = 0.0;
  phi.range_lo = 0.0;
  phi.range_hi = kInf;
  phi.label = p == 1.0 ? "t" : "t^" + fmt(p);
  return phi;
}

OrliczFn make_identity_phi() { return make_power_phi(1.0); }

OrliczFn make_log_phi() {
  OrliczFn phi;
  phi.eval = [](double t) { return std::log(t); };
  phi.deriv = [](double t) { return 1.0 / t; };
  phi.inverse = [](double y) { return std::exp(y); };
  phi.increasing = true;
  phi.cls = OrliczClass::J;
  phi.a = -kInf;
  phi.range_lo = -kInf;
  phi.range_hi = kInf;
  phi.label = "log";
  return phi;
}

OrliczFn make_self_similar_phi(double n, double r) {
  if (!(n >= 2.0) || !(r > 1.0) || !std::isfinite(r)) throw ValidationError("self-similar phi: need n >= 2 and r > 1");
  const double L = r - 1.0;
  const double c = n * (n - 1.0) / (4.0 * L * L);
  const double logr = std::log(r);
  // t = r^k s with s in [1, r)
  auto split = [r, logr](double t, double& s) {
    double k = std::floor(std::log(t) / logr);
    s = t / std::pow(r, k);
    if (s >= r) { s /= r; k += 1.0; }
    if (s < 1.0) { s *= r; k -= 1.0; }
    return k;
  };
  auto eval = [=](double t) {
    double s = 0.0;
    const double k = split(t, s);
    const double b = (s - 1.0) * (s - 1.0) * (r - s) * (r - s);
    return std::pow(r, k * n) * (std::pow(s, n) - c * b);
  };
  auto deriv = [=](double t) {
    double s = 0.0;
    const double k = split(t, s);
    const double db = 2.0 * (s - 1.0) * (r - s) * (r + 1.0 - 2.0 * s);
    return std::pow(r, k * (n - 1.0)) * (n * std::pow(s, n - 1.0) - c * db);
  };
  return make_sampled_phi(eval, deriv, "self-similar(n=" + fmt(n) + ",r=" + fmt(r) + ")");
}

OrliczFn make_sampled_phi(std::function<double(double)> eval, std::function<double(double)> deriv,
                          std::string label) {
  OrliczFn phi;
  phi.eval = std::move(eval);
  phi.deriv = std::move(deriv);
  phi.label = std::move(label);
  fill_class(phi);
  phi.inverse = [f = phi.eval, inc = phi.increasing](double y) { return bisect_inverse(f, inc, y); };
  return phi;
}

OrliczFn make_expr_phi(const ScalarExpr& e) {
  if (!std::isfinite(e(1.0))) throw ValidationError("expression '" + e.source() + "' is not finite at t=1");
  const ScalarExpr d = e.derivative();
  return make_sampled_phi([e](double t) { return e(t); }, [d](double t) { return d(t); }, e.source());
}

PsiFn make_power_psi(double p) {
  PsiFn psi;
  psi.eval = [p](double t) { return std::pow(t, p); };
  psi.power = p;
  psi.diverges = p >= 0.0;
  psi.label = p == 0.0 ? "1" : (p == 1.0 ? "t" : "t^" + fmt(p));
  return psi;
}

PsiFn make_expr_psi(const ScalarExpr& e, bool diverges_claim) {
  PsiFn psi;
  psi.eval = [e](double t) { return e(t); };
  psi.diverges = diverges_claim;
  psi.label = e.source();
  return psi;
}

double psi_divergence_probe(const PsiFn& psi, double horizon) {
  if (!(horizon > 1.0)) throw ValidationError("psi_divergence_probe: horizon must exceed 1");
  // s = e^x turns psi(s)/s ds into psi(e^x) dx
  return gk_integral([&](double x) { return psi.eval(std::exp(x)); }, 0.0, std::log(horizon));
}

OrliczFn phi_from_psi(const PsiFn& psi) {
  for (int k = -30; k <= 30; ++k) {
    const double t = std::pow(10.0, k / 10.0);
    const double v = psi.eval(t);
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError("psi '" + psi.label + "' is not positive at t=" + fmt(t));
    }
  }
  if (psi.power) {
    const double p = *psi.power;
    if (p == 0.0) return make_log_phi();
    OrliczFn phi;
    phi.eval = [p](double t) { return (std::pow(t, p) - 1.0) / p; };
    phi.deriv = [p](double t) { return std::pow(t, p - 1.0); };
    phi.inverse = [p](double y) { return std::pow(1.0 + p * y, 1.0 / p); };
    phi.increasing = true;
    if (p > 0.0) {
      phi.cls = OrliczClass::J;
      phi.range_lo = phi.a = -1.0 / p;
      phi.range_hi = kInf;
    } else {
      phi.cls = OrliczClass::Monotone;
      phi.range_lo = phi.a = -kInf;
      phi.range_hi = -1.0 / p;
    }
    phi.label = "(t^" + fmt(p) + "-1)/" + fmt(p);
    return phi;
  }
  auto f = psi.eval;
  OrliczFn phi = make_sampled_phi(
      [f](double t) { return gk_integral([&](double x) { return f(std::exp(x)); }, 0.0, std::log(t)); },
      [f](double t) { return f(t) / t; }, "int_1^t (" + psi.label + ")/s ds");
  return phi;
}

namespace {

double rho_of(const StarBody& Q, const DirRef& u) { return radial(Q, Vec(u)); }

std::function<double(const DirRef&)> rho_closure(const StarBody& Q) {
  if (const auto* a = Q.analytic(); a && a->semiaxes && (a->semiaxes->array() == (*a->semiaxes)[0]).all()) {
    const double r = (*a->semiaxes)[0];
    return [r](const DirRef&) { return r; };
  }
  return [Q](const DirRef& u) { return rho_of(Q, u); };
}

bool is_unit_ball(const StarBody& Q) {
  const auto* a = Q.analytic();
  return a && a->semiaxes && (a->semiaxes->array() == 1.0).all();
}

GtSign sign_on_ladder(const std::function<double(double)>& f) {
  bool neg = true, pos = true;
  for (int k = -30; k <= 30; ++k) {
    const double v = f(std::pow(10.0, k / 10.0));
    if (!(v < 0.0)) neg = false;
    if (!(v > 0.0)) pos = false;
  }
  return neg ? GtSign::Negative : (pos ? GtSign::Positive : GtSign::Mixed);
}

}  // namespace

GFn make_G_qQ(double q, const StarBody& Q) {
  if (q == 0.0 || !std::isfinite(q)) throw ValidationError("G_qQ: q must be nonzero (use the log G for q = 0)");
  const int n = Q.dim();
  auto rho = rho_closure(Q);
  GFn G;
  G.dim = n;
  G.eval = [q, n, rho](double t, const DirRef& u) { return std::pow(t, q) * std::pow(rho(u), n - q) / n; };
  G.deriv_t = [q, n, rho](double t, const DirRef& u) {
    return q / n * std::pow(t, q - 1.0) * std::pow(rho(u), n - q);
  };
  G.sign = q < 0.0 ? GtSign::Negative : GtSign::Positive;
  G.positive = true;
  G.label = is_unit_ball(Q) ? "t^" + fmt(q) + "/" + std::to_string(n) : "qQ(q=" + fmt(q) + ")";
  return G;
}

GFn make_G_log(const StarBody& Q) {
  const int n = Q.dim();
  auto rho = rho_closure(Q);
  GFn G;
  G.dim = n;
  G.eval = [n, rho](double t, const DirRef& u) {
    const double r = rho(u);
    return std::log(t / r) * std::pow(r, n) / n;
  };
  G.deriv_t = [n, rho](double t, const DirRef& u) { return std::pow(rho(u), n) / (n * t); };
  G.sign = GtSign::Positive;
  G.positive = false;
  G.label = is_unit_ball(Q) ? "log(t)/" + std::to_string(n) : "log(t/rho_Q) rho_Q^n/n";
  return G;
}

GFn make_G_expr(const ScalarExpr& e) {
  if (!std::isfinite(e(1.0))) throw ValidationError("expression '" + e.source() + "' is not finite at t=1");
  const ScalarExpr d = e.derivative();
  GFn G;
  G.eval = [e](double t, const DirRef&) { return e(t); };
  G.deriv_t = [d](double t, const DirRef&) { return d(t); };
  G.sign = sign_on_ladder([d](double t) { return d(t); });
  G.positive = sign_on_ladder([e](double t) { return e(t); }) == GtSign::Positive;
  G.label = e.source();
  return G;
}

Density power_density(int n, double c, double q, const StarBody& Q) {
  if (!(c > 0.0)) throw ValidationError("power density: coefficient must be positive");
  if (Q.dim() != n) throw ValidationError("power density: Q has the wrong dimension");
  Density d;
  d.dim = n;
  auto rho = rho_closure(Q);
  d.power = Density::Power{c, q, rho};
  d.eval = [=](const Vec& x) {
    const double r = x.norm();
    const Vec u = x / r;
    return c * std::pow(r, q - n) * std::pow(rho(u), n - q);
  };
  d.label = fmt(c) + "|x|^" + fmt(q - n) + " rho_Q^" + fmt(n - q);
  return d;
}

Density expr_density(int n, const ScalarExpr& e) {
  if (n < 2) throw ValidationError("density: dimension must be >= 2");
  Density d;
  d.dim = n;
  d.eval = [e](const Vec& x) { return e(x.norm()); };
  d.label = e.source();
  return d;
}

GFn make_G_from_density(const Density& density, DensitySide side) {
  const int n = density.dim;
  if (n < 2) throw ValidationError("density: dimension must be >= 2");
  GFn G;
  G.dim = n;
  G.positive = true;
  G.sign = side == DensitySide::Tail ? GtSign::Negative : GtSign::Positive;
  const bool tail = side == DensitySide::Tail;
  G.label = std::string(tail ? "tail" : "head") + "[" + density.label + "]";
  if (density.power) {
    const double c = density.power->c, q = density.power->q;
    auto rho = density.power->rho_q;
    if (tail && !(q < 0.0)) throw ValidationError("tail density |x|^{q-n}: needs q < 0 for integrability at infinity");
    if (!tail && !(q > 0.0)) throw ValidationError("head density |x|^{q-n}: needs q > 0 for integrability at 0");
    const double k = tail ? -1.0 / q : 1.0 / q;
    G.eval = [=](double t, const DirRef& u) { return c * k * std::pow(t, q) * std::pow(rho(u), n - q); };
    G.deriv_t = [=](double t, const DirRef& u) {
      return (tail ? -c : c) * std::pow(t, q - 1.0) * std::pow(rho(u), n - q);
    };
    return G;
  }
  auto phi = density.eval;
  G.deriv_t = [=](double t, const DirRef& u) {
    const double v = phi(Vec(t * u)) * std::pow(t, n - 1);
    return tail ? -v : v;
  };
  G.eval = [=](double t, const DirRef& u) {
    const Vec dir = u;
    auto f = [&](double r) -> double { return phi(Vec(r * dir)) * std::pow(r, n - 1); };
    double err = 0.0, l1 = 0.0, value = 0.0;
    if (tail) {
      thread_local boost::math::quadrature::exp_sinh<double> integrator;
      value = integrator.integrate(f, t, kInf, 1e-10, &err, &l1);
    } else {
      thread_local boost::math::quadrature::tanh_sinh<double> integrator;
      value = integrator.integrate(f, 0.0, t, 1e-10, &err, &l1);
    }
    if (!std::isfinite(value) || err > 1e-6 * std::max(1.0, l1)) {
      throw NumericalError("density quadrature did not converge along the ray u=" + format_vec(dir) +
                           " at t=" + fmt(t));
    }
    return value;
  };
  return G;
}

GtSign sample_gt_sign(const GFn& G, const Mat& directions) {
  bool neg = true, pos = true;
  for (Eigen::Index j = 0; j < directions.cols(); ++j) {
    const Vec u = directions.col(j);
    for (int k = -30; k <= 30; k += 3) {
      const double v = G.deriv_t(std::pow(10.0, k / 10.0), u);
      if (!(v < 0.0)) neg = false;
      if (!(v > 0.0)) pos = false;
    }
  }
  return neg ? GtSign::Negative : (pos ? GtSign::Positive : GtSign::Mixed);
}

}  // namespace dov
