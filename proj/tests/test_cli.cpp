#include "doctest.h"

#include "dov/cli.hpp"
#include "dov/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace dov;

namespace {
struct Run {
  int code;
  std::string out, err;
};
Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "dov");
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}
}  // namespace

TEST_CASE("schema") {
  const Run r = run({"schema", "body"});
  CHECK(r.code == 0);
  CHECK(load_json(r.out).contains("$schema"));
  CHECK(run({"schema", "nope"}).code == 1);
}

TEST_CASE("volume of the unit ball") {
  const Run r = run({"volume", "--body", R"({"kind":"ball","n":3})"});
  REQUIRE(r.code == 0);
  const Json j = load_json(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(4.18879020478639).epsilon(1e-10));
  CHECK(r.out.find("4.188790204786") != std::string::npos);
  CHECK(j["grid"] == "sphere:64x128");
}

TEST_CASE("validation errors exit with 1") {
  CHECK(run({"solve", "--measure", R"({"angles":[0,1],"weights":[1,1]})"}).code == 1);
  CHECK(run({"volume", "--body", R"({"kind":"ball","n":2,"r":-2})"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"volume", "--body", R"({"kind":"ball","n":2})", "--grid", "circle:-1"}).code == 1);
}

TEST_CASE("solve and verify") {
  const Run s = run({"solve", "--measure", R"({"angles":[0,1.5707963267948966,3.141592653589793,4.71238898038469],"weights":[1,1,1,1]})",
                     "--grid", "circle:512"});
  CHECK(s.code == 0);
  CHECK(load_json(s.out)["converged"] == true);
  const Run v = run({"verify", "--suite", "valuation,inequalities", "--trials", "2", "--grid", "circle:256", "--format", "csv"});
  CHECK(v.code == 0);
  CHECK(v.out.find("dual_minkowski") != std::string::npos);
}

TEST_CASE("--out writes a file") {
  const std::string path = "cli_test_out.json";
  CHECK(run({"curvature", "--body", R"({"kind":"cube","n":2})", "--grid", "circle:256", "--out", path}).code == 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  const Json j = load_json(ss.str());
  REQUIRE(j["atoms"].size() == 4);
  CHECK(j["atoms"][0]["mass"].get<double>() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(j["total"].get<double>() == doctest::Approx(4.0).epsilon(1e-3));
  std::remove(path.c_str());
}

TEST_CASE("spec-style invocations") {
  const Run c = run({"curvature", "--body", R"({"kind":"cube","n":2})", "--psi", "p:1", "--grid", "circle:512"});
  CHECK(c.code == 0);
  const Run s = run({"solve", "--measure",
                     R"({"atoms":[{"normal":[1,0],"weight":1},{"normal":[0,1],"weight":1},{"normal":[-1,0],"weight":1},{"normal":[0,-1],"weight":1}]})",
                     "--psi", "p:1", "--grid", "circle:512", "--tol", "1e-6"});
  CHECK(s.code == 0);
  const Run k = run({"sum", "--kind", "radial", "--phi1", "p:2", "--phi2", "p:2", "--eps", "0.25", "--K",
                     R"({"kind":"ball","n":2})", "--L", R"({"kind":"ball","n":2,"r":2})", "--grid", "circle:64"});
  REQUIRE(k.code == 0);
  // (1 + 0.25 * 4)^{1/2} = sqrt(2)
  CHECK(load_json(k.out)["volume"].get<double>() == doctest::Approx(2.0 * 3.141592653589793).epsilon(1e-12));
  const Run q = run({"volume", "--q", "-1", "--body", R"({"kind":"ball","n":2,"r":2})", "--grid", "circle:64"});
  REQUIRE(q.code == 0);
  CHECK(load_json(q.out)["value"].get<double>() == doctest::Approx(3.141592653589793 / 2));
  CHECK(run({"curvature", "--body", R"({"kind":"cube","n":2})", "--psi", "p:x"}).code == 1);
}

TEST_CASE("the installed binary runs") {
  const std::string cmd = std::string(DOV_BINARY) + " schema measure > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
}
