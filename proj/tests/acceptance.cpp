// Acceptance run: one line per criterion.
#include "dov/curvature.hpp"
#include "dov/dualvol.hpp"
#include "dov/io.hpp"
#include "dov/solver.hpp"
#include "dov/verify.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include <sys/wait.h>
#include <unistd.h>

using namespace dov;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("criterion %2d: %s  %s | %s\n", id, ok ? "PASS" : "FAIL", what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Vec random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> N(0.0, 1.0);
  Vec u(n);
  for (int i = 0; i < n; ++i) u[i] = N(rng);
  return u.normalized();
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_radial = 0.0, worst_bipolar = 0.0, worst_dual = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int n = t < 25 ? 2 : 3;
    auto rng = trial_rng(101, t, 0);
    const HPolytope P = random_polytope(rng, n);
    const StarBody K(P);
    const auto verts = oracle::vertices(P.normals, P.supports);
    const StarBody Kp = polar(K);
    const StarBody Kpp = polar(Kp);
    for (int k = 0; k < 200; ++k) {
      const Vec u = random_unit(rng, n);
      const double rho = oracle::radial(P.normals, P.supports, u);
      const double h = oracle::support(verts, u);
      worst_radial = std::max({worst_radial, std::abs(radial(K, u) - rho) / rho, std::abs(support(K, u) - h) / h});
      worst_bipolar = std::max({worst_bipolar, std::abs(radial(Kpp, u) - rho) / rho, std::abs(support(Kpp, u) - h) / h});
      worst_dual = std::max({worst_dual, std::abs(rho * support(Kp, u) - 1.0), std::abs(h * radial(Kp, u) - 1.0)});
    }
  }
  const double secs = seconds_since(t0);
  const double worst = std::max({worst_radial, worst_bipolar, worst_dual});
  report(1, worst < 1e-8 && secs < 30.0, "bipolar identity and rho*h duality, 50 polytopes x 200 directions",
         "kernel vs oracle " + sci(worst_radial) + ", bipolar " + sci(worst_bipolar) + ", duality " +
             sci(worst_dual) + ", " + sci(secs) + " s");
}

void criterion2() {
  const GridPtr coarse = make_grid(2, "circle:2048"), fine = make_grid(2, "circle:4096");
  const GridPtr probe = make_grid(2, "circle:20011");
  bool ok = true;
  double worst_ratio_dev = 0.0, worst_rel = 0.0;
  for (int t = 0; t < 20; ++t) {
    auto rng = trial_rng(202, t, 0);
    double a[3], ph[3], total = 0.0;
    for (int k = 0; k < 3; ++k) {
      a[k] = std::generate_canonical<double, 53>(rng);
      ph[k] = 2.0 * oracle::pi * std::generate_canonical<double, 53>(rng);
      total += a[k];
    }
    for (double& x : a) x *= 0.3 / total;
    auto field = [&](const SphereGrid& g) {
      Vec f(g.size());
      for (Eigen::Index j = 0; j < g.size(); ++j) {
        const double th = std::atan2(g.node(j)[1], g.node(j)[0]);
        f[j] = 1.0 + a[0] * std::cos(th + ph[0]) + a[1] * std::cos(2 * th + ph[1]) + a[2] * std::cos(3 * th + ph[2]);
      }
      return f;
    };
    const double d1 = check_polar_hull_relation(field(*coarse), *coarse, *probe);
    const double d2 = check_polar_hull_relation(field(*fine), *fine, *probe);
    const double ratio = d2 / d1;
    worst_rel = std::max(worst_rel, d1 / coarse->spacing());
    worst_ratio_dev = std::max(worst_ratio_dev, std::abs(ratio - 0.5) / 0.5);
    if (!(d1 < 2.0 * coarse->spacing()) || !(std::abs(ratio - 0.5) <= 0.3 * 0.5)) ok = false;
  }
  report(2, ok, "[f]* = <1/f> on circle:2048, 20 random fields, halving under refinement",
         "max deviation/spacing " + sci(worst_rel) + " (< 2), max |ratio-0.5|/0.5 " + sci(worst_ratio_dev) +
             " (<= 0.3)");
}

void criterion3() {
  const GridPtr g = make_grid(3, "sphere:64x128");
  const double v = dual_volume_value(make_G_expr(ScalarExpr::parse("t^3/3")), ball(3), *g);
  const double err_ball = std::abs(v - oracle::ball_volume(3));
  double worst_h = 0.0;
  for (int t = 0; t < 6; ++t) {
    auto rng = trial_rng(303, t, 0);
    const StarBody K = t % 2 == 0 ? StarBody(random_polytope(rng, 3)) : random_ellipsoid(rng, 3);
    const StarBody Q = random_ellipsoid(rng, 3);
    for (double q : {-1.5, 0.7, 2.5}) {
      const double base = dual_volume_q(K, Q, q, *g);
      for (double r : {0.5, 2.0}) {
        const double scaled = dual_volume_q(scale(K, r), Q, q, *g);
        worst_h = std::max(worst_h, std::abs(scaled - std::pow(r, q) * base) / std::abs(std::pow(r, q) * base));
      }
    }
  }
  report(3, err_ball < 1e-6 && worst_h < 1e-8, "V_G(B^3) with G=t^3/3 and r^q homogeneity",
         "|V - 4pi/3| = " + sci(err_ball) + ", homogeneity " + sci(worst_h));
}

void criterion4() {
  const GridPtr g2 = make_grid(2, "circle:2048"), g3 = make_grid(3, "sphere:64x128");
  const PsiFn one = make_power_psi(0.0);
  double worst_mass = 0.0, closed_sym = 0.0, closed_rand = 0.0, exact_dev = 0.0;
  auto run = [&](const HPolytope& P, const GridPtr& g, bool symmetric, double exact) {
    const int n = P.dim();
    const CurvatureAtoms C = curvature_measure(P, make_G_qQ(n, ball(n)), one, *g);
    const double V = volume(StarBody(P), *g);
    worst_mass = std::max(worst_mass, std::abs(C.total - V) / V);
    if (exact > 0.0) exact_dev = std::max(exact_dev, std::abs(C.total - exact) / exact);
    const DiscreteMeasure S = surface_area_measure(P, *g);
    const double c = (S.normals * S.weights).norm();
    if (symmetric) closed_sym = std::max(closed_sym, c);
    else closed_rand = std::max(closed_rand, c);
  };
  run(*cube(2).polytope(), g2, true, 4.0);
  run(*cube(3).polytope(), g3, true, 8.0);
  for (int t = 0; t < 20; ++t) {
    auto rng = trial_rng(404, t, 0);
    const int n = t < 10 ? 2 : 3;
    const HPolytope P = random_polytope(rng, n);
    run(P, n == 2 ? g2 : g3, false, n == 2 ? oracle::polygon_area(P.normals, P.supports) : 0.0);
  }
  report(4, worst_mass < 1e-6 && closed_sym < 1e-6,
         "total curvature mass = V_n(K) (square, cube, 20 random); closedness on square and cube",
         "mass vs grid volume " + sci(worst_mass) + ", closedness square/cube " + sci(closed_sym) +
             "; diagnostics: mass vs exact volume " + sci(exact_dev) + ", random-polytope closedness " +
             sci(closed_rand) + " (first order in grid spacing)");
}

void criterion5() {
  const GridPtr g3 = make_grid(3, "sphere:64x128");
  const OrliczFn sq = make_power_phi(2.0);
  const CheckResult bb = check_variational_radial(ball(3), ball(3, 2.0), sq, sq,
                                                  make_G_expr(ScalarExpr::parse("t^3/3")), g3);
  const double rel = std::abs(bb.lhs - 8.0 * oracle::pi) / (8.0 * oracle::pi);
  const SuiteReport rep = run_suite(505, 20, make_grid(2, "circle:2048"), {"variational"});
  double worst = 0.0;
  int fails = 0;
  for (const auto& c : rep.checks) {
    worst = std::max(worst, c.gap);
    if (c.status != CheckStatus::Pass) ++fails;
  }
  report(5, rel < 1e-4 && bb.status == CheckStatus::Pass && fails == 0 && rep.checks.size() == 80,
         "variational formulas, ball/ball 8pi and 4 x 20 random cases",
         "ball/ball FD " + fmt17(bb.lhs) + " vs 8pi (rel " + sci(rel) + "), random: " + std::to_string(fails) +
             " failing of " + std::to_string(rep.checks.size()) + ", worst gap " + sci(worst));
}

void criterion6() {
  const GridPtr g = make_grid(2, "circle:2048");
  const SphereGrid fine = build_grid(2, g->spec().refined());
  double worst_ratio = 0.0;
  bool ok = true;
  for (int t = 0; t < 20; ++t) {
    auto rng = trial_rng(606, t, 0);
    const HPolytope P = random_polygon(rng);
    const GFn G = t % 2 == 0 ? make_G_expr(ScalarExpr::parse("1/t"))
                             : make_G_qQ(1.0 + std::generate_canonical<double, 53>(rng) * 3.0, random_ellipsoid(rng, 2));
    const ConstraintValue cv = constraint_V(P.supports, P.normals, G, *g);
    const double grid_err = std::abs(constraint_V(P.supports, P.normals, G, fine).value - cv.value) / std::abs(cv.value);
    double err = 0.0;
    for (Eigen::Index i = 0; i < P.facets(); ++i) {
      const double d = 1e-7 * P.supports[i];
      Vec hp = P.supports, hm = P.supports;
      hp[i] += d;
      hm[i] -= d;
      const double fd = (constraint_V(hp, P.normals, G, *g).value - constraint_V(hm, P.normals, G, *g).value) / (2 * d);
      err = std::max(err, std::abs(fd - cv.grad[i]));
    }
    err /= cv.grad.cwiseAbs().maxCoeff();
    const double tol = std::max(1e-5, 10.0 * grid_err);
    worst_ratio = std::max(worst_ratio, err / tol);
    if (!(err < tol)) ok = false;
  }
  report(6, ok, "analytic dV/dh_i vs centered differences, 20 random polygons",
         "max error / tolerance " + sci(worst_ratio));
}

struct SolveCase {
  SolveReport rep;
  DiscreteMeasure mu;
  double secs = 0.0;
};

SolveCase solve_case(const Vec& angles, const std::string& grid) {
  DiscreteMeasure mu;
  mu.normals.resize(2, angles.size());
  for (Eigen::Index i = 0; i < angles.size(); ++i) mu.normals.col(i) << std::cos(angles[i]), std::sin(angles[i]);
  mu.weights = Vec::Ones(angles.size());
  const auto t0 = std::chrono::steady_clock::now();
  SolveCase s{solve_minkowski(mu, make_G_expr(ScalarExpr::parse("1/t")), make_power_psi(1.0), build_grid(2, grid)), mu};
  s.secs = seconds_since(t0);
  return s;
}

SolveCase square_case, triangle_case;

void criterion7() {
  square_case = solve_case((Vec(4) << 0.0, oracle::pi / 2, oracle::pi, 3 * oracle::pi / 2).finished(), "circle:4096");
  const auto& r = square_case.rep;
  const double dev = (r.polytope.supports.array() - std::sqrt(2.0)).abs().maxCoeff();
  triangle_case = solve_case(
      (Vec(3) << oracle::pi / 2, oracle::pi / 2 + 2 * oracle::pi / 3, oracle::pi / 2 + 4 * oracle::pi / 3).finished(),
      "circle:4098");
  const auto& tr = triangle_case.rep;
  const double spread = tr.polytope.supports.maxCoeff() - tr.polytope.supports.minCoeff();
  const bool ok = dev < 1e-4 && r.residuals.maxCoeff() < 1e-6 && r.converged && r.iterations < 500 &&
                  square_case.secs < 60.0 && spread < 1e-6 && tr.converged;
  report(7, ok, "symmetric Minkowski problems (square on circle:4096, triangle on circle:4098)",
         "square max|h-sqrt2| " + sci(dev) + ", residual " + sci(r.residuals.maxCoeff()) + ", " +
             std::to_string(r.iterations) + " iterations, " + sci(square_case.secs) + " s; triangle support spread " +
             sci(spread) + ", residual " + sci(tr.residuals.maxCoeff()));
}

void criterion8() {
  const GFn G = make_G_expr(ScalarExpr::parse("1/t"));
  const PsiFn psi = make_power_psi(1.0);
  const SolutionCheck a = verify_solution(square_case.rep, square_case.mu, G, psi, build_grid(2, "circle:8192"));
  const SolutionCheck b = verify_solution(triangle_case.rep, triangle_case.mu, G, psi, build_grid(2, "circle:8196"));
  const bool ok = a.max_residual < 1e-5 && b.max_residual < 1e-5 && a.tau_drift < 1e-6 && b.tau_drift < 1e-6;
  report(8, ok, "verify_solution on a 2x finer grid",
         "square residual " + sci(a.max_residual) + ", tau drift " + sci(a.tau_drift) + "; triangle residual " +
             sci(b.max_residual) + ", tau drift " + sci(b.tau_drift));
}

void criterion9() {
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport rep = run_suite(42, 100, make_grid(2, "circle:2048"), {"inequalities"});
  const double secs = seconds_since(t0);
  int violations = 0, equality = 0, equality_ok = 0, strict = 0, other = 0;
  double worst_slack = std::numeric_limits<double>::infinity(), worst_eq = 0.0;
  for (const auto& c : rep.checks) {
    const bool eq = std::find(c.flags.begin(), c.flags.end(), "equality case") != c.flags.end();
    if (eq) {
      ++equality;
      worst_eq = std::max(worst_eq, c.gap);
      if (c.status == CheckStatus::Pass) ++equality_ok;
    } else if (c.status == CheckStatus::Fail) {
      ++violations;
    } else if (c.status != CheckStatus::Pass) {
      ++other;
    } else {
      worst_slack = std::min(worst_slack, c.gap);
      if (std::find(c.flags.begin(), c.flags.end(), "strict") != c.flags.end()) ++strict;
    }
  }
  const auto t1 = std::chrono::steady_clock::now();
  const SuiteReport all = run_suite(42, 100, make_grid(2, "circle:2048"), {"all"});
  const double all_secs = seconds_since(t1);
  const bool ok = violations == 0 && other == 0 && equality > 0 && equality_ok == equality && all_secs < 300.0 &&
                  rep.checks.size() == 400;
  report(9, ok, "inequality suites, 100 seeded trials each",
         std::to_string(violations) + " violations in " + std::to_string(rep.checks.size()) + " checks (min slack " +
             sci(worst_slack) + ", strict " + std::to_string(strict) + "), equality cases " +
             std::to_string(equality_ok) + "/" + std::to_string(equality) + " tight (worst " + sci(worst_eq) +
             "), inequalities " + sci(secs) + " s, full suite " + sci(all_secs) + " s with " +
             std::to_string(all.count(CheckStatus::Fail)) + " failures");
}

void criterion10() {
  const SuiteReport rep = run_suite(1010, 10, make_grid(2, "circle:2048"), {"valuation"});
  double worst = 0.0;
  bool ok = rep.checks.size() == 10;
  for (const auto& c : rep.checks) {
    worst = std::max(worst, c.gap);
    if (c.status != CheckStatus::Pass) ok = false;
  }
  report(10, ok && worst < 1e-6, "valuation inclusion-exclusion, 10 random splits", "max residual " + sci(worst));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& cmd) { return std::system((cmd + " > /dev/null 2>&1").c_str()); }

void criterion11() {
  const std::string bin = DOV_BINARY;
  const auto dir = std::filesystem::temp_directory_path() / ("dov_accept_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::string verify = bin + " verify --suite all --trials 10 --seed 42 --grid circle:1024";
  const std::string solve = bin +
      " solve --measure '{\"angles\":[0,1.5707963267948966,3.141592653589793,4.71238898038469],"
      "\"weights\":[1,1,1,1]}' --grid circle:1024 --seed 42";
  bool ok = true;
  std::string detail;
  for (const auto& [name, cmd] : {std::pair{std::string("verify"), verify}, std::pair{std::string("solve"), solve}}) {
    const std::string a = (dir / (name + "_1.json")).string(), b = (dir / (name + "_2.json")).string();
    const int ea = run(cmd + " --out " + a), eb = run(cmd + " --out " + b);
    const std::string ta = slurp(a), tb = slurp(b);
    const bool same = ea == eb && !ta.empty() && ta == tb;
    if (!same) ok = false;
    detail += name + ": " + (same ? "identical" : "DIFFERENT") + " (" + std::to_string(ta.size()) + " bytes, exit " +
              std::to_string(WEXITSTATUS(ea)) + "); ";
  }
  std::filesystem::remove_all(dir);
  report(11, ok, "byte-identical reports for repeated runs with the same seed", detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
