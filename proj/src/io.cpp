#include "dov/io.hpp"

#include "dov/curvature.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace dov {

namespace {

const Json& field(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(std::string(what) + ": missing field '" + key + "'");
  }
  return j.at(key);
}

double number(const Json& j, const char* key, const char* what) {
  const Json& v = field(j, key, what);
  if (!v.is_number()) throw ValidationError(std::string(what) + ": field '" + key + "' must be a number");
  return v.get<double>();
}

double number_or(const Json& j, const char* key, double fallback, const char* what) {
  if (!j.contains(key)) return fallback;
  return number(j, key, what);
}

int integer(const Json& j, const char* key, const char* what) {
  const Json& v = field(j, key, what);
  if (!v.is_number_integer()) throw ValidationError(std::string(what) + ": field '" + key + "' must be an integer");
  return v.get<int>();
}

std::string text(const Json& j, const char* key, const char* what) {
  const Json& v = field(j, key, what);
  if (!v.is_string()) throw ValidationError(std::string(what) + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

Mat columns(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ValidationError(std::string(what) + ": expected a non-empty array of vectors");
  const std::size_t n = j[0].is_array() ? j[0].size() : 0;
  if (n == 0) throw ValidationError(std::string(what) + ": expected a non-empty array of vectors");
  Mat out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    const Vec v = vec_from_json(j[k], what);
    if (static_cast<std::size_t>(v.size()) != n) throw ValidationError(std::string(what) + ": vectors differ in length");
    out.col(static_cast<Eigen::Index>(k)) = v;
  }
  return out;
}

Json columns_json(const Mat& m) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < m.cols(); ++k) out.push_back(to_json(Vec(m.col(k))));
  return out;
}

void dump_into(std::string& out, const Json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump_into(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_into(out, v, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? fmt17(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

StarBody body_of(const Json& j, const char* key, int n, const GridPtr& grid) {
  if (j.contains(key)) {
    StarBody b = parse_body(j.at(key), grid);
    if (b.dim() != n) throw ValidationError(std::string("G: body '") + key + "' has the wrong dimension");
    return b;
  }
  return ball(n);
}

}  // namespace

Json load_json(std::string_view text_or_path) {
  std::size_t k = 0;
  while (k < text_or_path.size() && std::isspace(static_cast<unsigned char>(text_or_path[k]))) ++k;
  std::string content;
  if (k < text_or_path.size() && (text_or_path[k] == '{' || text_or_path[k] == '[')) {
    content = std::string(text_or_path);
  } else {
    std::ifstream in{std::string(text_or_path)};
    if (!in) throw ValidationError("cannot read '" + std::string(text_or_path) + "' (neither inline JSON nor a readable file)");
    std::stringstream ss;
    ss << in.rdbuf();
    content = ss.str();
  }
  try {
    return Json::parse(content);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
}

Json load_function_arg(std::string_view text_or_path) {
  std::string t(text_or_path);
  t.erase(0, t.find_first_not_of(" \t\n"));
  t.erase(t.find_last_not_of(" \t\n") + 1);
  if (t.rfind("p:", 0) == 0) {
    char* end = nullptr;
    const double p = std::strtod(t.c_str() + 2, &end);
    if (end == t.c_str() + 2 || *end != '\0') throw ValidationError("bad power shorthand '" + t + "' (expected p:<number>)");
    return Json{{"kind", "power"}, {"p", p}};
  }
  if (t == "log") return Json{{"kind", "log"}};
  if (t == "id" || t == "identity") return Json{{"kind", "identity"}};
  return load_json(t);
}

std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump17(const Json& j, int indent) {
  std::string out;
  dump_into(out, j, indent, 0);
  return out;
}

Json to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vec vec_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + ": expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw ValidationError(std::string(what) + ": expected an array of numbers");
    v[static_cast<Eigen::Index>(k)] = j[k].get<double>();
  }
  return v;
}

StarBody parse_body(const Json& j, const GridPtr& grid) {
  const char* what = "body";
  const std::string kind = text(j, "kind", what);
  if (kind == "ball") return ball(integer(j, "n", what), number_or(j, "r", 1.0, what));
  if (kind == "ellipsoid") return ellipsoid(vec_from_json(field(j, "semiaxes", what), "ellipsoid semiaxes"));
  if (kind == "cube") return cube(integer(j, "n", what), number_or(j, "a", 1.0, what));
  if (kind == "polygon") {
    return regular_polygon(integer(j, "m", what), number_or(j, "h", 1.0, what), number_or(j, "phase", 0.0, what));
  }
  if (kind == "polytope") {
    Mat normals = columns(field(j, "normals", what), "polytope normals");
    Vec supports = vec_from_json(field(j, "supports", what), "polytope supports");
    if (supports.size() != normals.cols()) throw ValidationError("polytope: one support per normal expected");
    for (Eigen::Index i = 0; i < normals.cols(); ++i) {
      const double len = normals.col(i).norm();
      if (!(len > 0.0)) throw ValidationError("polytope: zero normal");
      normals.col(i) /= len;
      supports[i] /= len;
    }
    return hpolytope(std::move(normals), std::move(supports));
  }
  if (kind == "hull") return StarBody(PointHull{columns(field(j, "points", what), "hull points")});
  if (kind == "samples") {
    const Vec values = vec_from_json(field(j, "values", what), "sample values");
    GridPtr g = grid;
    if (j.contains("grid")) {
      const std::string spec = text(j, "grid", what);
      const int n = j.contains("n") ? integer(j, "n", what) : (spec.rfind("circle", 0) == 0 ? 2 : 3);
      g = make_grid(n, spec);
    }
    if (!g) throw ValidationError("samples body: no grid given");
    if (values.size() != g->size()) throw ValidationError("samples body: one value per grid node expected");
    if (!(values.array() > 0.0).all()) throw ValidationError("samples body: radial values must be positive");
    const bool convex = j.contains("convex") && j.at("convex").get<bool>();
    return StarBody(RadialSamples{g, values, convex});
  }
  if (kind == "scaled") return scale(parse_body(field(j, "body", what), grid), number(j, "r", what));
  if (kind == "polar") return polar(parse_body(field(j, "body", what), grid));
  throw ValidationError("body: unknown kind '" + kind + "'");
}

Json body_to_json(const StarBody& body) {
  if (const auto* p = body.polytope()) {
    return Json{{"kind", "polytope"}, {"normals", columns_json(p->normals)}, {"supports", to_json(p->supports)}};
  }
  if (const auto* h = body.hull()) return Json{{"kind", "hull"}, {"points", columns_json(h->points)}};
  if (const auto* s = body.samples()) {
    return Json{{"kind", "samples"}, {"grid", s->grid->id()}, {"n", s->grid->dim()}, {"values", to_json(s->values)},
                {"convex", s->convex}};
  }
  const auto* a = body.analytic();
  if (a->semiaxes) {
    const Vec& ax = *a->semiaxes;
    if ((ax.array() == ax[0]).all()) return Json{{"kind", "ball"}, {"n", a->dim}, {"r", ax[0]}};
    return Json{{"kind", "ellipsoid"}, {"semiaxes", to_json(ax)}};
  }
  return Json{{"kind", "analytic"}, {"n", a->dim}, {"label", a->label}};
}

OrliczFn parse_phi(const Json& j) {
  const char* what = "phi";
  const std::string kind = text(j, "kind", what);
  if (kind == "power") return make_power_phi(number(j, "p", what));
  if (kind == "log") return make_log_phi();
  if (kind == "identity") return make_identity_phi();
  if (kind == "expr") return make_expr_phi(ScalarExpr::parse(text(j, "source", what)));
  if (kind == "from_psi") return phi_from_psi(parse_psi(field(j, "psi", what)));
  if (kind == "self_similar") return make_self_similar_phi(number(j, "n", what), number(j, "r", what));
  throw ValidationError("phi: unknown kind '" + kind + "'");
}

PsiFn parse_psi(const Json& j) {
  const char* what = "psi";
  const std::string kind = text(j, "kind", what);
  if (kind == "power") return make_power_psi(number(j, "p", what));
  if (kind == "expr") {
    const bool diverges = j.contains("diverges") && j.at("diverges").get<bool>();
    return make_expr_psi(ScalarExpr::parse(text(j, "source", what)), diverges);
  }
  throw ValidationError("psi: unknown kind '" + kind + "'");
}

MultiPhi parse_multi_phi(const Json& j) {
  const char* what = "multi phi";
  const std::string kind = text(j, "kind", what);
  if (kind == "power_sum") return power_sum_phi(number(j, "p", what));
  throw ValidationError("multi phi: unknown kind '" + kind + "'");
}

GFn parse_G(const Json& j, int n) {
  const char* what = "G";
  const std::string kind = text(j, "kind", what);
  if (kind == "qQ") return make_G_qQ(number(j, "q", what), body_of(j, "Q", n, nullptr));
  if (kind == "pq") return make_G_pq(number(j, "q", what), body_of(j, "Q", n, nullptr));
  if (kind == "log") return make_G_log(body_of(j, "Q", n, nullptr));
  if (kind == "expr") return make_G_expr(ScalarExpr::parse(text(j, "source", what)));
  if (kind == "density") {
    const std::string side = text(j, "side", what);
    if (side != "tail" && side != "head") throw ValidationError("G: density side must be 'tail' or 'head'");
    const Json& d = field(j, "density", what);
    const std::string dk = text(d, "kind", "density");
    Density density;
    if (dk == "power") {
      density = power_density(n, number(d, "c", "density"), number(d, "q", "density"), body_of(d, "Q", n, nullptr));
    } else if (dk == "expr") {
      density = expr_density(n, ScalarExpr::parse(text(d, "source", "density")));
    } else {
      throw ValidationError("density: unknown kind '" + dk + "'");
    }
    return make_G_from_density(density, side == "tail" ? DensitySide::Tail : DensitySide::Head);
  }
  throw ValidationError("G: unknown kind '" + kind + "'");
}

DiscreteMeasure parse_measure(const Json& j) {
  const char* what = "measure";
  DiscreteMeasure mu;
  if (j.contains("atoms")) {
    const Json& atoms = j.at("atoms");
    if (!atoms.is_array() || atoms.empty()) throw ValidationError("measure: atoms must be a non-empty array");
    const Vec first = vec_from_json(field(atoms.front(), "normal", what), "measure normal");
    mu.normals.resize(first.size(), static_cast<Eigen::Index>(atoms.size()));
    mu.weights.resize(static_cast<Eigen::Index>(atoms.size()));
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const Vec v = vec_from_json(field(atoms[i], "normal", what), "measure normal");
      if (v.size() != first.size()) throw ValidationError("measure: normals differ in dimension");
      if (!(v.norm() > 0.0)) throw ValidationError("measure: zero normal");
      mu.normals.col(static_cast<Eigen::Index>(i)) = v.normalized();
      mu.weights[static_cast<Eigen::Index>(i)] = number(atoms[i], "weight", what);
    }
    mu.validate();
    return mu;
  }
  if (j.contains("angles")) {
    const Vec a = vec_from_json(j.at("angles"), "measure angles");
    mu.normals.resize(2, a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) mu.normals.col(i) << std::cos(a[i]), std::sin(a[i]);
  } else {
    mu.normals = columns(field(j, "normals", what), "measure normals");
    for (Eigen::Index i = 0; i < mu.normals.cols(); ++i) {
      const double len = mu.normals.col(i).norm();
      if (!(len > 0.0)) throw ValidationError("measure: zero normal");
      mu.normals.col(i) /= len;
    }
  }
  mu.weights = vec_from_json(field(j, "weights", what), "measure weights");
  if (mu.weights.size() != mu.normals.cols()) throw ValidationError("measure: one weight per normal expected");
  mu.validate();
  return mu;
}

Json measure_to_json(const DiscreteMeasure& mu) {
  Json atoms = Json::array();
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    atoms.push_back({{"normal", to_json(Vec(mu.normals.col(i)))}, {"weight", mu.weights[i]}});
  }
  return Json{{"atoms", atoms}};
}

std::vector<std::string> schema_names() { return {"body", "phi", "psi", "multi_phi", "G", "measure", "report"}; }

Json schema(std::string_view what) {
  const Json num{{"type", "number"}};
  const Json vec{{"type", "array"}, {"items", num}, {"minItems", 1}};
  const Json vecs{{"type", "array"}, {"items", vec}, {"minItems", 1}};
  auto kind = [](const char* k) { return Json{{"const", k}}; };
  auto variant = [](Json props, std::vector<std::string> required) {
    return Json{{"type", "object"}, {"properties", std::move(props)}, {"required", std::move(required)}};
  };
  const Json body_ref{{"$ref", "#"}};
  if (what == "body") {
    return Json{{"$schema", "http://json-schema.org/draft-07/schema#"},
                {"title", "dov body"},
                {"oneOf",
                 {variant({{"kind", kind("ball")}, {"n", {{"type", "integer"}, {"minimum", 2}}}, {"r", num}},
                          {"kind", "n"}),
                  variant({{"kind", kind("ellipsoid")}, {"semiaxes", vec}}, {"kind", "semiaxes"}),
                  variant({{"kind", kind("cube")}, {"n", {{"type", "integer"}, {"minimum", 2}}}, {"a", num}},
                          {"kind", "n"}),
                  variant({{"kind", kind("polygon")}, {"m", {{"type", "integer"}, {"minimum", 3}}}, {"h", num},
                           {"phase", num}},
                          {"kind", "m"}),
                  variant({{"kind", kind("polytope")}, {"normals", vecs}, {"supports", vec}},
                          {"kind", "normals", "supports"}),
                  variant({{"kind", kind("hull")}, {"points", vecs}}, {"kind", "points"}),
                  variant({{"kind", kind("samples")}, {"grid", {{"type", "string"}}}, {"n", {{"type", "integer"}}},
                           {"values", vec}, {"convex", {{"type", "boolean"}}}},
                          {"kind", "values"}),
                  variant({{"kind", kind("scaled")}, {"r", num}, {"body", body_ref}}, {"kind", "r", "body"}),
                  variant({{"kind", kind("polar")}, {"body", body_ref}}, {"kind", "body"})}}};
  }
  const Json str{{"type", "string"}};
  if (what == "psi") {
    return Json{{"$schema", "http://json-schema.org/draft-07/schema#"},
                {"title", "dov psi"},
                {"oneOf",
                 {variant({{"kind", kind("power")}, {"p", num}}, {"kind", "p"}),
                  variant({{"kind", kind("expr")}, {"source", str}, {"diverges", {{"type", "boolean"}}}},
                          {"kind", "source"})}}};
  }
  if (what == "phi") {
    return Json{{"$schema", "http://json-schema.org/draft-07/schema#"},
                {"title", "dov phi"},
                {"oneOf",
                 {variant({{"kind", kind("power")}, {"p", num}}, {"kind", "p"}),
                  variant({{"kind", kind("log")}}, {"kind"}), variant({{"kind", kind("identity")}}, {"kind"}),
                  variant({{"kind", kind("expr")}, {"source", str}}, {"kind", "source"}),
                  variant({{"kind", kind("from_psi")}, {"psi", {{"type", "object"}}}}, {"kind", "psi"}),
                  variant({{"kind", kind("self_similar")}, {"n", num}, {"r", num}}, {"kind", "n", "r"})}}};
  }
  if (what == "multi_phi") {
    return Json{{"$schema", "http://json-schema.org/draft-07/schema#"},
                {"title", "dov multi phi"},
                {"oneOf", {variant({{"kind", kind("power_sum")}, {"p", num}}, {"kind", "p"})}}};
  }
  if (what == "G") {
    const Json body{{"type", "object"}};
    return Json{
        {"$schema", "http://json-schema.org/draft-07/schema#"},
        {"title", "dov G"},
        {"oneOf",
         {variant({{"kind", kind("qQ")}, {"q", num}, {"Q", body}}, {"kind", "q"}),
          variant({{"kind", kind("pq")}, {"q", num}, {"Q", body}}, {"kind", "q"}),
          variant({{"kind", kind("log")}, {"Q", body}}, {"kind"}),
          variant({{"kind", kind("expr")}, {"source", str}}, {"kind", "source"}),
          variant({{"kind", kind("density")},
                   {"side", {{"enum", {"tail", "head"}}}},
                   {"density",
                    {{"oneOf",
                      {variant({{"kind", kind("power")}, {"c", num}, {"q", num}, {"Q", body}}, {"kind", "c", "q"}),
                       variant({{"kind", kind("expr")}, {"source", str}}, {"kind", "source"})}}}}},
                  {"kind", "side", "density"})}}};
  }
  if (what == "measure") {
    return Json{{"$schema", "http://json-schema.org/draft-07/schema#"},
                {"title", "dov measure"},
                {"type", "object"},
                {"properties",
                 {{"atoms",
                   {{"type", "array"},
                    {"minItems", 1},
                    {"items", variant({{"normal", vec}, {"weight", num}}, {"normal", "weight"})}}},
                  {"normals", vecs},
                  {"angles", vec},
                  {"weights", vec}}},
                {"oneOf",
                 {{{"required", {"atoms"}}},
                  {{"required", {"normals", "weights"}}},
                  {{"required", {"angles", "weights"}}}}}};
  }
  if (what == "report") {
    const Json check{{"type", "object"},
                     {"properties",
                      {{"name", str},
                       {"status", {{"enum", {"pass", "fail", "inconclusive"}}}},
                       {"lhs", {{"type", {"number", "null"}}}},
                       {"rhs", {{"type", {"number", "null"}}}},
                       {"gap", {{"type", {"number", "null"}}}},
                       {"tolerance", num},
                       {"order", {{"type", {"number", "null"}}}},
                       {"trial", {{"type", "integer"}}},
                       {"note", str},
                       {"flags", {{"type", "array"}, {"items", str}}},
                       {"witness", {{"type", {"object", "null"}}}}}},
                     {"required", {"name", "status", "lhs", "rhs", "gap", "tolerance"}}};
    return Json{{"$schema", "http://json-schema.org/draft-07/schema#"},
                {"title", "dov verify report"},
                {"type", "object"},
                {"properties",
                 {{"schema", {{"const", "dov-verify-report/1"}}},
                  {"seed", {{"type", "integer"}}},
                  {"trials", {{"type", "integer"}}},
                  {"grid", str},
                  {"dim", {{"type", "integer"}}},
                  {"suites", {{"type", "array"}, {"items", str}}},
                  {"summary", {{"type", "object"}}},
                  {"checks", {{"type", "array"}, {"items", check}}}}},
                {"required", {"schema", "seed", "trials", "grid", "checks"}}};
  }
  std::string names;
  for (const auto& s : schema_names()) names += (names.empty() ? "" : ", ") + s;
  throw ValidationError("unknown schema '" + std::string(what) + "' (available: " + names + ")");
}

void write_text(const std::string& content, const std::optional<std::string>& path) {
  if (!path || path->empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    std::cout.flush();
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + *path + "'");
  out << content;
  if (!content.empty() && content.back() != '\n') out << '\n';
  if (!out) throw ValidationError("write to '" + *path + "' failed");
}

}  // namespace dov
