#include "doctest.h"

#include "dov/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

using namespace dov;

TEST_CASE("17 significant digits") {
  CHECK(fmt17(0.1) == "0.10000000000000001");
  CHECK(fmt17(1.0) == "1");
  CHECK(dump17(Json{{"a", 0.1}, {"b", 2}}, -1) == "{\"a\":0.10000000000000001,\"b\":2}");
  CHECK(dump17(Json(std::numeric_limits<double>::quiet_NaN()), -1) == "null");
  const double x = 1.0 / 3.0;
  CHECK(std::stod(fmt17(x)) == x);
}

TEST_CASE("inline and file json") {
  CHECK(load_json("{\"k\": 1}")["k"] == 1);
  const std::string path = "io_test_tmp.json";
  {
    std::ofstream(path) << "[1, 2, 3]";
  }
  CHECK(load_json(path).size() == 3);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_json("no_such_file.json"), ValidationError);
  CHECK_THROWS(load_json("{broken"));
}

TEST_CASE("bodies") {
  Vec u(2);
  u << 0.6, 0.8;
  CHECK(radial(parse_body(load_json(R"({"kind":"ball","n":2,"r":2})")), u) == doctest::Approx(2.0));
  CHECK(radial(parse_body(load_json(R"({"kind":"scaled","r":3,"body":{"kind":"cube","n":2}})")), u) ==
        doctest::Approx(3.0 / 0.8));
  const StarBody p = parse_body(load_json(R"({"kind":"polytope","normals":[[2,0],[0,1],[-1,0],[0,-1]],"supports":[2,1,1,1]})"));
  CHECK(p.polytope()->normals.col(0).norm() == doctest::Approx(1.0));
  CHECK(p.polytope()->supports[0] == doctest::Approx(1.0));
  const StarBody back = parse_body(body_to_json(p));
  CHECK(radial(back, u) == doctest::Approx(radial(p, u)));
  CHECK(radial(parse_body(load_json(R"({"kind":"polar","body":{"kind":"ball","n":2,"r":4}})")), u) ==
        doctest::Approx(0.25));
  CHECK_THROWS_AS(parse_body(load_json(R"({"kind":"ball","n":2,"r":-1})")), ValidationError);
  CHECK_THROWS_AS(parse_body(load_json(R"({"kind":"blob"})")), ValidationError);
  CHECK_THROWS_AS(parse_body(load_json(R"({"kind":"polytope","normals":[[1,0],[0,1]],"supports":[1,1]})")),
                  ValidationError);
}

TEST_CASE("functions and measures") {
  CHECK(parse_phi(load_json(R"({"kind":"power","p":2})"))(3.0) == doctest::Approx(9.0));
  CHECK(parse_phi(load_json(R"({"kind":"expr","source":"t^3"})"))(2.0) == doctest::Approx(8.0));
  CHECK(parse_psi(load_json(R"({"kind":"power","p":-1})")).diverges == false);
  Vec u(3);
  u << 1, 0, 0;
  CHECK(parse_G(load_json(R"({"kind":"qQ","q":3})"), 3)(2.0, u) == doctest::Approx(8.0 / 3.0));
  const DiscreteMeasure mu = parse_measure(load_json(R"({"angles":[0,3.141592653589793],"weights":[1,2]})"));
  CHECK(mu.normals(0, 1) == doctest::Approx(-1.0));
  const DiscreteMeasure mu2 = parse_measure(measure_to_json(mu));
  CHECK((mu2.normals - mu.normals).norm() == 0.0);
  CHECK_THROWS_AS(parse_measure(load_json(R"({"angles":[0],"weights":[-1]})")), ValidationError);
  const DiscreteMeasure mu3 = parse_measure(load_json(R"({"atoms":[{"normal":[2,0],"weight":1},{"normal":[-1,0],"weight":2}]})"));
  CHECK(mu3.normals(0, 0) == doctest::Approx(1.0));
  CHECK(mu3.weights[1] == 2.0);
  CHECK(parse_phi(load_function_arg("p:3"))(2.0) == doctest::Approx(8.0));
  CHECK(parse_psi(load_function_arg(" p:-0.5 ")).diverges == false);
  CHECK(parse_phi(load_function_arg("log"))(std::exp(1.0)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(load_function_arg("p:"), ValidationError);
  CHECK(parse_multi_phi(load_json(R"({"kind":"power_sum","p":2})")).eval((Vec(2) << 1, 2).finished()) == 5.0);
}

TEST_CASE("schemas") {
  for (const auto& name : schema_names()) {
    const Json s = schema(name);
    CHECK(s.contains("$schema"));
  }
  CHECK(schema("body").dump().find("polytope") != std::string::npos);
  CHECK_THROWS_AS(schema("nope"), ValidationError);
}
