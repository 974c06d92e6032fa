#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = vorhom::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& body) {
  const std::string path = std::string(P_tmpdir) + "/" + name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("homology reports Betti numbers of the shipped complexes") {
  const Outcome o = invoke({"homology"});
  CHECK(o.code == vorhom::cli::kExitPass);
  CHECK(o.out.find("betti: [1, 1]") != std::string::npos);
  CHECK(o.out.find("ball: [1, 0, 0, 0] (expected [1, 0, 0, 0]) PASS") != std::string::npos);
  CHECK(o.out.find("sphere: [1, 0, 1]") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(invoke({}).code == vorhom::cli::kExitUsage);
  CHECK(invoke({"frobnicate"}).code == vorhom::cli::kExitUsage);
  CHECK(invoke({"circulation"}).code == vorhom::cli::kExitUsage);
  CHECK(invoke({"circulation", "--builtin", "nope"}).code == vorhom::cli::kExitUsage);
  CHECK(invoke({"circulation", "--scenario", "/nonexistent/flow.vsc"}).code == vorhom::cli::kExitUsage);
  CHECK(invoke({"suite", "--grid", "1"}).code == vorhom::cli::kExitUsage);
  const Outcome help = invoke({"--help"});
  CHECK(help.code == vorhom::cli::kExitPass);
  CHECK(help.out.find("kelvin") != std::string::npos);
}

TEST_CASE("a scenario whose declaration is false is rejected at load") {
  const std::string path = temp_file("vorhom_false_declaration.vsc",
                                     "vorhom-scenario 1\nname r\ndim 2\nvelocity -y, x\ndeclare irrotational\n");
  const Outcome o = invoke({"circulation", "--scenario", path});
  CHECK(o.code == vorhom::cli::kExitUsage);
  CHECK(o.err.find("'irrotational'") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("a user scenario file runs through the same checks") {
  const std::string path = temp_file("vorhom_user_vortex.vsc", R"(vorhom-scenario 1
name user_vortex
dim 2
param G = 3
velocity -G/(2*pi)*y/(x^2 + y^2), G/(2*pi)*x/(x^2 + y^2)
exclude point 0, 0 radius 0.2
declare steady incompressible irrotational
golden "circulation/unit" circulation circle(0, 0, 1) = G [exact]
)");
  const Outcome o = invoke({"circulation", "--scenario", path});
  CHECK(o.code == vorhom::cli::kExitPass);
  CHECK(o.out.find("circulation/unit: 3") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("suite on the point vortex shows the 2 pi circulation") {
  const Outcome o = invoke({"suite", "--builtin", "point_vortex"});
  CHECK(o.code == vorhom::cli::kExitPass);
  CHECK(o.out.find("circulation/winding=1: 6.283185") != std::string::npos);
  CHECK(o.out.find("(expected 2π)") != std::string::npos);
  CHECK(o.out.find("FAIL") == std::string::npos);
}

TEST_CASE("JSON output is well formed and mirrors the text verdict") {
  const Outcome o = invoke({"circulation", "--builtin", "vortex_pair", "--format", "json"});
  CHECK(o.code == vorhom::cli::kExitPass);
  const auto doc = nlohmann::json::parse(o.out);
  CHECK(doc.at("pass").get<bool>());
  REQUIRE(doc.at("sections").size() == 1);
  const auto& sec = doc.at("sections").front();
  CHECK(sec.at("title") == "vortex_pair");
  for (const auto& row : sec.at("rows")) {
    for (const char* key : {"name", "value", "expected", "status", "detail"}) CHECK(row.contains(key));
    CHECK(row.at("status") != "FAIL");
  }
}

TEST_CASE("repeated runs produce identical reports") {
  const std::vector<std::string> args{"invariant", "--builtin", "rigid_rotation", "--seed", "7"};
  const Outcome a = invoke(args);
  const Outcome b = invoke(args);
  CHECK(a.code == b.code);
  CHECK(a.out == b.out);
}
