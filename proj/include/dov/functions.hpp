#pragma once

#include "dov/common.hpp"
#include "dov/expr.hpp"

#include <functional>
#include <optional>
#include <string>

namespace dov {

class StarBody;

/// I: increasing, phi(1)=1, phi(0+)=0, phi(inf)=inf.
/// D: decreasing, phi(1)=1, phi(0+)=inf, phi(inf)=0.
/// J: strictly monotone with inf = a and sup = inf (a may be -inf).
/// Monotone: strictly monotone, none of the above.
enum class OrliczClass { I, D, J, Monotone };

std::string to_string(OrliczClass c);

/// Strictly monotone scalar function on (0, inf) with derivative and inverse.
struct OrliczFn {
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  std::function<double(double)> inverse;
  OrliczClass cls = OrliczClass::Monotone;
  bool increasing = true;
  double a = 0.0;          // J: infimum of the range
  double range_lo = 0.0;   // inf / sup of phi over (0, inf)
  double range_hi = 0.0;
  std::string label;

  double operator()(double t) const { return eval(t); }
};

/// Positive function on (0, inf), e.g. psi(t) = t phi'(t).
struct PsiFn {
  std::function<double(double)> eval;
  bool diverges = false;          // user claim: int_1^inf psi(s)/s ds = inf
  std::optional<double> power;    // set when psi(t) = t^p
  std::string label;

  double operator()(double t) const { return eval(t); }
};

enum class GtSign { Negative, Positive, Mixed };
std::string to_string(GtSign s);

/// G(t, u) on (0, inf) x S^{n-1} with partial derivative in t.
struct GFn {
  std::function<double(double, const DirRef&)> eval;
  std::function<double(double, const DirRef&)> deriv_t;
  GtSign sign = GtSign::Mixed;
  bool positive = true;
  int dim = 0;  // 0 when G does not depend on the dimension
  std::string label;

  double operator()(double t, const DirRef& u) const { return eval(t, u); }
};

// Orlicz functions

OrliczFn make_power_phi(double p);
OrliczFn make_log_phi();
OrliczFn make_identity_phi();

/// phi with phi(r t) = r^n phi(t) that differs from t^n: on [1, r] it is
/// t^n - c (t-1)^2 (r-t)^2, extended to (0, inf) by the scaling rule.
/// Increasing and strictly convex; r > 1, n >= 2.
OrliczFn make_self_similar_phi(double n, double r);

/// phi from an expression in t: symbolic derivative, bisection inverse,
/// class decided by sampling.
OrliczFn make_expr_phi(const ScalarExpr& e);

/// Builds an OrliczFn from eval/deriv closures; inverse by bisection and class
/// by sampling.
OrliczFn make_sampled_phi(std::function<double(double)> eval, std::function<double(double)> deriv,
                          std::string label);

/// phi(t) = int_1^t psi(s)/s ds. Closed form for psi = t^p.
OrliczFn phi_from_psi(const PsiFn& psi);

/// psi(t) = t^p; int_1^inf s^{p-1} ds diverges exactly when p >= 0.
PsiFn make_power_psi(double p);
PsiFn make_expr_psi(const ScalarExpr& e, bool diverges_claim);

/// int_1^horizon psi(s)/s ds.
double psi_divergence_probe(const PsiFn& psi, double horizon);

/// Result of sampling a scalar function on a log ladder in [1e-8, 1e8].
struct MonotoneProfile {
  bool increasing = false;
  bool decreasing = false;
  double at_one = 0.0;
  double limit_zero = 0.0;  // +-inf when the increments do not saturate
  double limit_inf = 0.0;
};

MonotoneProfile sample_profile(const std::function<double(double)>& f);

/// Class tag from a profile (thresholds 1e-6 on phi(1)=1 and 1e-3 on limits).
OrliczClass classify(const MonotoneProfile& p);

/// Monotone inverse by bisection on a bracket grown geometrically from t=1.
double bisect_inverse(const std::function<double(double)>& f, bool increasing, double y);

// G builders

/// G(t,u) = (1/n) t^q rho_Q(u)^{n-q}.
GFn make_G_qQ(double q, const StarBody& Q);

/// G(t,u) = (1/n) log(t / rho_Q(u)) rho_Q(u)^n; for the unit ball (1/n) log t.
GFn make_G_log(const StarBody& Q);

/// G(t,u) = e(t), independent of u.
GFn make_G_expr(const ScalarExpr& e);

enum class DensitySide { Tail, Head };

/// Density phi on R^n \ {o}. `power` is set when phi(x) = c |x|^{q-n} rho_Q(x/|x|)^{n-q}.
struct Density {
  std::function<double(const Vec&)> eval;
  int dim = 0;
  struct Power {
    double c;
    double q;
    std::function<double(const DirRef&)> rho_q;  // rho_Q
  };
  std::optional<Power> power;
  std::string label;
};

Density power_density(int n, double c, double q, const StarBody& Q);
/// Radial density phi(x) = e(|x|).
Density expr_density(int n, const ScalarExpr& e);

/// Tail: G(t,u) = int_t^inf phi(r u) r^{n-1} dr. Head: int_0^t.
GFn make_G_from_density(const Density& density, DensitySide side);

/// Samples G_t on a ladder of t and the given directions.
GtSign sample_gt_sign(const GFn& G, const Mat& directions);

}  // namespace dov
