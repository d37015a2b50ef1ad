#include "dov/cli.hpp"

#include "dov/curvature.hpp"
#include "dov/dualvol.hpp"
#include "dov/io.hpp"
#include "dov/solver.hpp"
#include "dov/verify.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <optional>
#include <sstream>

namespace dov {

namespace {

struct Common {
  std::string grid;
  double tol = 1e-6;
  std::uint64_t seed = 42;
  int threads = 0;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--grid", c.grid, "quadrature grid, e.g. circle:2048, sphere:64x128, mc:100000:seed=7");
  sub->add_option("--tol", c.tol, "tolerance (solver residual, default 1e-6)");
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--threads", c.threads, "worker threads (fallback: DOV_THREADS)");
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

GridPtr grid_for(const Common& c, int dim) {
  if (c.grid.empty()) return std::make_shared<const SphereGrid>(build_grid(dim, default_grid_spec(dim)));
  return make_grid(dim, c.grid);
}

int grid_dim(const std::string& spec, int fallback) {
  if (spec.rfind("circle", 0) == 0) return 2;
  if (spec.rfind("sphere", 0) == 0) return 3;
  return fallback;
}

struct Emitter {
  const Common& c;
  std::ostream& out;

  void emit(const Json& j, const std::string& csv) const {
    const std::string body = c.format == "csv" ? csv : dump17(j) + "\n";
    if (c.out.empty()) {
      out << body;
      out.flush();
    } else {
      write_text(body, c.out);
    }
  }
};

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string row;
  for (const auto& s : cells) row += (row.empty() ? "" : ",") + s;
  return row + "\n";
}

std::string vec_cells(const Vec& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt17(v[i]);
  return s;
}

Json solve_report_json(const SolveReport& rep) {
  Json trace = Json::array();
  for (const auto& t : rep.trace) {
    trace.push_back({{"iteration", t.iteration}, {"objective", t.objective}, {"gap", t.gap},
                     {"max_residual", t.max_residual}});
  }
  Json unsat = Json::array();
  for (auto i : rep.unsatisfiable) unsat.push_back(i);
  Json warnings = rep.check.warnings;
  return Json{{"command", "solve"},
              {"status", rep.status},
              {"converged", rep.converged},
              {"iterations", rep.iterations},
              {"grid", rep.grid_id},
              {"tau", rep.tau},
              {"objective", rep.objective},
              {"constraint_gap", rep.constraint_gap},
              {"max_residual", rep.residuals.size() ? rep.residuals.maxCoeff() : 0.0},
              {"r0", rep.r0},
              {"polytope", body_to_json(StarBody(rep.polytope))},
              {"residuals", to_json(rep.residuals)},
              {"curvature", to_json(rep.curvature)},
              {"unsatisfiable", unsat},
              {"hypotheses",
               {{"hemisphere_margin", rep.check.margin},
                {"gt_sign", to_string(rep.check.gt_sign)},
                {"small_t_cap_integrals", {rep.check.small_t[0], rep.check.small_t[1]}},
                {"large_t_integrals", {rep.check.large_t[0], rep.check.large_t[1]}},
                {"psi_divergence_probe", rep.check.psi_probe},
                {"warnings", warnings}}},
              {"trace", trace}};
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"dov: dual Orlicz-Brunn-Minkowski toolkit"};
  app.require_subcommand(1);
  Common c;

  auto* vol = app.add_subcommand("volume", "general dual volume of a body");
  std::string body_arg, g_arg, q_body;
  double vol_q = 0.0;
  bool refine = false;
  vol->add_option("--body", body_arg, "body JSON (inline or file)")->required();
  vol->add_option("--g", g_arg, "G JSON (default: volume, kind qQ with q = n)");
  vol->add_option("--q", vol_q, "q-th dual volume (1/n) int rho_K^q rho_Q^{n-q} instead of --g");
  vol->add_option("--Q", q_body, "Q for --q (default unit ball)");
  vol->add_flag("--refine", refine, "also report the gap to one grid refinement");
  add_common(vol, c);

  auto* sum = app.add_subcommand("sum", "radial Orlicz sum or two-body radial Orlicz combination");
  std::string bodies_arg, multi_arg, phi1_arg, phi2_arg, k_arg, l_arg, sum_kind;
  double eps = 0.0;
  sum->add_option("--kind", sum_kind, "radial (K +_eps L) or orlicz (m-body radial Orlicz sum)")
      ->check(CLI::IsMember({"radial", "orlicz"}));
  sum->add_option("--bodies", bodies_arg, "JSON array of bodies");
  sum->add_option("--K", k_arg, "first body (with --L)");
  sum->add_option("--L", l_arg, "second body (with --K)");
  sum->add_option("--phi", multi_arg, "multi phi JSON for the m-body sum, e.g. {\"kind\":\"power_sum\",\"p\":2}");
  sum->add_option("--eps", eps, "combination parameter for K +_eps L");
  sum->add_option("--phi1", phi1_arg, "phi1 for the combination (JSON or p:<x>, log)");
  sum->add_option("--phi2", phi2_arg, "phi2 for the combination (JSON or p:<x>, log)");
  add_common(sum, c);

  auto* curv = app.add_subcommand("curvature", "dual Orlicz curvature measure of a polytope");
  std::string psi_arg;
  std::vector<double> pq;
  curv->add_option("--body", body_arg, "polytope JSON")->required();
  curv->add_option("--g", g_arg, "G JSON (default: kind qQ with q = n)");
  curv->add_option("--psi", psi_arg, "psi JSON or p:<x> (default: constant 1)");
  curv->add_option("--pq", pq, "p q: (p,q)-dual curvature measure instead of G/psi")->expected(2);
  curv->add_option("--Q", q_body, "Q for --pq (default unit ball)");
  add_common(curv, c);

  auto* solve = app.add_subcommand("solve", "discrete Orlicz-Minkowski problem");
  std::string measure_arg;
  int max_iter = 5000;
  bool check_refined = false;
  solve->add_option("--measure", measure_arg, "measure JSON")->required();
  solve->add_option("--g", g_arg, "G JSON (G_t < 0), default {\"kind\":\"expr\",\"source\":\"1/t\"}");
  solve->add_option("--psi", psi_arg, "psi JSON or p:<x>, default p:1");
  solve->add_option("--max-iter", max_iter, "iteration cap");
  solve->add_flag("--check-refined", check_refined, "re-verify the solution on one grid refinement");
  add_common(solve, c);

  auto* ver = app.add_subcommand("verify", "randomized verification suites");
  std::vector<std::string> suites{"all"};
  int trials = 100, dim = 2;
  VerifyConfig vcfg;
  ver->add_option("--suite", suites, "all | variational | inequalities | uniqueness | valuation")->delimiter(',');
  ver->add_option("--trials", trials, "trials per suite");
  ver->add_option("--dim", dim, "dimension when --grid does not imply it");
  ver->add_option("--equality-tol", vcfg.equality_tol, "relative tolerance for equality cases");
  ver->add_option("--slack", vcfg.slack, "allowed absolute inequality violation");
  ver->add_option("--fd-tol", vcfg.fd_tol, "relative tolerance for finite-difference checks");
  add_common(ver, c);

  auto* sch = app.add_subcommand("schema", "print a JSON schema");
  std::string schema_name;
  sch->add_option("name", schema_name, "body | phi | psi | multi_phi | G | measure | report")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  const Emitter emit{c, out};
  try {
    if (c.threads > 0) set_num_threads(c.threads);
    if (!(c.tol > 0.0)) throw ValidationError("--tol must be positive");

    if (*sch) {
      emit.emit(schema(schema_name), "");
      return kExitOk;
    }

    if (*vol) {
      const StarBody K = parse_body(load_json(body_arg), c.grid.empty() ? nullptr : make_grid(grid_dim(c.grid, 3), c.grid));
      const int n = K.dim();
      const GridPtr grid = grid_for(c, n);
      if (vol->count("--q") && !g_arg.empty()) throw ValidationError("give either --g or --q, not both");
      if (q_body.size() && !vol->count("--q")) throw ValidationError("--Q needs --q");
      GFn G;
      if (vol->count("--q")) {
        G = make_G_qQ(vol_q, q_body.empty() ? ball(n) : parse_body(load_json(q_body)));
      } else {
        G = g_arg.empty() ? make_G_qQ(n, ball(n)) : parse_G(load_json(g_arg), n);
      }
      Json j{{"command", "volume"}, {"grid", grid->id()}, {"G", G.label}};
      std::string csv = csv_row({"value", "grid", "estimated_error"});
      if (refine) {
        const VolumeResult v = dual_volume(G, K, *grid);
        j["value"] = v.value;
        j["estimated_error"] = v.estimated_error;
        csv += csv_row({fmt17(v.value), grid->id(), fmt17(v.estimated_error)});
      } else {
        const double v = dual_volume_value(G, K, *grid);
        j["value"] = v;
        csv += csv_row({fmt17(v), grid->id(), ""});
      }
      emit.emit(j, csv);
      return kExitOk;
    }

    if (*sum) {
      std::vector<StarBody> bodies;
      if (!bodies_arg.empty()) {
        if (!k_arg.empty() || !l_arg.empty()) throw ValidationError("give either --bodies or --K/--L");
        const Json arr = load_json(bodies_arg);
        if (!arr.is_array() || arr.empty()) throw ValidationError("--bodies must be a non-empty JSON array");
        for (const auto& b : arr) bodies.push_back(parse_body(b));
      } else {
        if (k_arg.empty() || l_arg.empty()) throw ValidationError("sum needs --bodies or both --K and --L");
        bodies.push_back(parse_body(load_json(k_arg)));
        bodies.push_back(parse_body(load_json(l_arg)));
      }
      const int n = bodies.front().dim();
      for (const auto& b : bodies) {
        if (b.dim() != n) throw ValidationError("bodies differ in dimension");
      }
      const GridPtr grid = grid_for(c, n);
      std::optional<StarBody> result;
      Json j{{"command", "sum"}, {"grid", grid->id()}};
      const bool combination = sum_kind.empty() ? sum->count("--eps") > 0 : sum_kind == "radial";
      if (combination) {
        if (bodies.size() != 2) throw ValidationError("--eps combines exactly two bodies");
        if (!sum->count("--eps")) throw ValidationError("the radial combination needs --eps");
        if (phi1_arg.empty() || phi2_arg.empty()) throw ValidationError("the radial combination needs --phi1 and --phi2");
        const OrliczFn p1 = parse_phi(load_function_arg(phi1_arg)), p2 = parse_phi(load_function_arg(phi2_arg));
        result = radial_combo(bodies[0], bodies[1], p1, p2, eps, grid);
        j["operation"] = "combination";
        j["eps"] = eps;
      } else {
        if (multi_arg.empty()) throw ValidationError("the radial Orlicz sum needs --phi");
        result = radial_orlicz_sum(bodies, parse_multi_phi(load_json(multi_arg)), grid);
        j["operation"] = "radial_orlicz_sum";
      }
      j["volume"] = volume(*result, *grid);
      j["body"] = body_to_json(*result);
      std::string csv = csv_row({"node", "rho"});
      const Vec& rho = result->samples()->values;
      for (Eigen::Index i = 0; i < rho.size(); ++i) csv += csv_row({std::to_string(i), fmt17(rho[i])});
      emit.emit(j, csv);
      return kExitOk;
    }

    if (*curv) {
      const StarBody K = parse_body(load_json(body_arg));
      const HPolytope* P = K.polytope();
      if (!P) throw ValidationError("curvature: body must be a polytope (atoms live on facet normals)");
      const int n = K.dim();
      const GridPtr grid = grid_for(c, n);
      CurvatureAtoms atoms;
      Json j{{"command", "curvature"}, {"grid", grid->id()}};
      if (!pq.empty()) {
        const StarBody Q = q_body.empty() ? ball(n) : parse_body(load_json(q_body));
        atoms = curvature_pq(*P, Q, pq[0], pq[1], *grid);
        j["p"] = pq[0];
        j["q"] = pq[1];
      } else {
        const GFn G = g_arg.empty() ? make_G_qQ(n, ball(n)) : parse_G(load_json(g_arg), n);
        const PsiFn psi = psi_arg.empty() ? make_power_psi(0.0) : parse_psi(load_function_arg(psi_arg));
        atoms = curvature_measure(*P, G, psi, *grid);
        j["G"] = G.label;
        j["psi"] = psi.label;
      }
      Json list = Json::array();
      for (Eigen::Index i = 0; i < atoms.normals.cols(); ++i) {
        list.push_back({{"normal", to_json(Vec(atoms.normals.col(i)))}, {"mass", atoms.masses[i]}});
      }
      j["atoms"] = list;
      j["total"] = atoms.total;
      j["tied_weight"] = atoms.tied_weight;
      j["tie_error_bound"] = atoms.tie_error_bound;
      std::string csv = csv_row({"facet", "mass", "normal"});
      for (Eigen::Index i = 0; i < atoms.masses.size(); ++i) {
        csv += csv_row({std::to_string(i), fmt17(atoms.masses[i]), vec_cells(atoms.normals.col(i))});
      }
      emit.emit(j, csv);
      return kExitOk;
    }

    if (*solve) {
      const DiscreteMeasure mu = parse_measure(load_json(measure_arg));
      const int n = mu.dim();
      const GridPtr grid = grid_for(c, n);
      const GFn G = g_arg.empty() ? make_G_expr(ScalarExpr::parse("1/t")) : parse_G(load_json(g_arg), n);
      const PsiFn psi = psi_arg.empty() ? make_power_psi(1.0) : parse_psi(load_function_arg(psi_arg));
      SolveOptions opts;
      opts.tol = c.tol;
      opts.max_iterations = max_iter;
      const SolveReport rep = solve_minkowski(mu, G, psi, *grid, opts);
      Json j = solve_report_json(rep);
      if (check_refined) {
        const SphereGrid fine = build_grid(n, grid->spec().refined());
        const SolutionCheck chk = verify_solution(rep, mu, G, psi, fine);
        j["refined_check"] = {{"grid", fine.id()}, {"max_residual", chk.max_residual}, {"tau", chk.tau},
                              {"tau_drift", chk.tau_drift}};
      }
      std::string csv = csv_row({"atom", "support", "residual", "curvature", "normal"});
      for (Eigen::Index i = 0; i < mu.size(); ++i) {
        csv += csv_row({std::to_string(i), fmt17(rep.polytope.supports[i]), fmt17(rep.residuals[i]),
                        fmt17(rep.curvature[i]), vec_cells(mu.normals.col(i))});
      }
      emit.emit(j, csv);
      if (!rep.converged) {
        err << "solve: " << rep.status << " after " << rep.iterations << " iterations (max residual "
            << fmt17(rep.residuals.maxCoeff()) << ")\n";
        return kExitNumerical;
      }
      return kExitOk;
    }

    if (*ver) {
      const int n = grid_dim(c.grid, dim);
      const GridPtr grid = grid_for(c, n);
      const SuiteReport rep = run_suite(c.seed, trials, grid, suites, vcfg);
      emit.emit(report_json(rep), report_csv(rep));
      const int fails = rep.count(CheckStatus::Fail);
      if (fails > 0) {
        err << "verify: " << fails << " failing check(s)\n";
        return kExitNumerical;
      }
      return kExitOk;
    }
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Json::exception& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  err << app.help();
  return kExitValidation;
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace dov
