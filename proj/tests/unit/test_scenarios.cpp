#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vorhom/scenario.hpp"
#include "vorhom/vortex.hpp"

using namespace vorhom;
using std::numbers::pi;

namespace {

Point pt(double x, double y) { return (Vec(2) << x, y).finished(); }

std::string with_header(const std::string& body) { return "vorhom-scenario 1\n" + body; }

std::string validation_message(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

int parse_error_line(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("every builtin loads, verifies and meets its goldens") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    const Scenario s = builtin(name);
    CHECK(s.name == name);
    for (const auto& g : evaluate_goldens(s)) {
      CAPTURE(g.label);
      CHECK(g.pass);
    }
  }
}

TEST_CASE("builtin goldens match closed-form values") {
  const Scenario pv = builtin("point_vortex");
  CHECK(circulation(pv.flow(), circle(pt(0, 0), 1.0)) == doctest::Approx(2.0 * pi).epsilon(1e-10));
  const Scenario rk = builtin("rankine_vortex");
  const double a = rk.param("a");
  const double g = rk.param("G");
  // Inside the core the flow is rigid rotation with angular velocity G / (2 pi a^2).
  CHECK(circulation(rk.flow(), circle(pt(0, 0), a / 2)) == doctest::Approx(2.0 * pi * (a / 2) * (a / 2) * g / (2.0 * pi * a * a)));
  const Scenario dp = builtin("doubly_punctured");
  const auto it = std::find_if(dp.goldens.begin(), dp.goldens.end(), [](const Golden& g) { return g.probe == "figure8"; });
  REQUIRE(it != dp.goldens.end());
  CHECK(circulation(dp.flow(), dp.probe_chain(*it)) == doctest::Approx(dp.param("G1") + dp.param("G2")).epsilon(1e-9));
}

TEST_CASE("serialized scenarios parse back to the same text") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    const std::string text = serialize(builtin(name));
    CHECK(serialize(parse_scenario(text)) == text);
  }
}

TEST_CASE("declared properties are re-verified") {
  const std::string rotation = with_header(
      "name r\ndim 2\nvelocity -y, x\ndensity 1\npressure 1 + 0.5*(x^2 + y^2)\ndeclare irrotational\n");
  CHECK(validation_message(rotation).find("declared property 'irrotational' fails verification") == 0);
  const std::string source = with_header("name s\ndim 2\nvelocity x, y\ndeclare incompressible\n");
  CHECK(validation_message(source).find("'incompressible'") != std::string::npos);
  const std::string unsteady = with_header("name u\ndim 2\nvelocity t*y, 0\ndeclare steady\n");
  CHECK(validation_message(unsteady).find("'steady'") != std::string::npos);
  const std::string stratified =
      with_header("name b\ndim 2\nvelocity 0, 0\ndensity 1 + 0.1*y + 0.1*x^2\npressure 1 - y\ndeclare barotropic\n");
  CHECK(validation_message(stratified).find("'barotropic'") != std::string::npos);
  const std::string bad_force = with_header("name f\ndim 2\nvelocity 0, 0\nforce 0, -1\npotential 2*y\ndeclare conservative\n");
  CHECK(validation_message(bad_force).find("'conservative'") != std::string::npos);
  const std::string good_force = with_header("name f\ndim 2\nvelocity 0, 0\nforce 0, -1\npotential y\ndeclare conservative\n");
  CHECK_NOTHROW(parse_scenario(good_force));
}

TEST_CASE("piecewise definitions must join continuously") {
  const std::string jump = with_header(
      "name j\ndim 2\nvelocity piecewise(x^2 + y^2; [0, 1): 1; [1, inf): 2), 0\n");
  CHECK(validation_message(jump).find("jumps") != std::string::npos);
  const std::string gap = with_header(
      "name g\ndim 2\nvelocity piecewise(x^2 + y^2; [0, 1): 1; [2, inf): 1), 0\n");
  CHECK(validation_message(gap).find("not contiguous") != std::string::npos);
  const Scenario rk = builtin("rankine_vortex");
  CHECK(rk.piece_signature(0.0, pt(0.1, 0.0)) != rk.piece_signature(0.0, pt(1.0, 0.0)));
  CHECK(rk.piece_signature(0.0, pt(1.0, 0.0)) == rk.piece_signature(0.0, pt(0.0, -1.5)));
}

TEST_CASE("malformed scenario text reports the offending line") {
  CHECK(parse_error_line("name x\n") == 1);
  CHECK(parse_error_line(with_header("name x\ndim 4\n")) == 3);
  CHECK(parse_error_line(with_header("name x\ndim 2\nvelocity 1\n")) == 4);
  CHECK(parse_error_line(with_header("name x\ndim 2\nvelocity z, 0\n")) == 4);
  CHECK(parse_error_line(with_header("name x\ndim 2\nvelocity 0, 0\nfrobnicate\n")) == 5);
  CHECK(parse_error_line(with_header("name x\ndim 2\nvelocity 0, 0\ngolden \"a\" circulation circle(0, 0, 1) = 0\n")) == 5);
  CHECK(parse_error_line(with_header("name x\ndim 2\nvelocity 0, 0\ngolden \"a\" flux circle(0, 0, 1) = 0 [exact]\n")) == 5);
  CHECK(parse_error_line(with_header("name x\ndim 2\nparam a = x\nvelocity 0, 0\n")) == 4);
  CHECK(parse_error_line(with_header("name x\ndim 2\nvelocity 0, 0\nbarotropic x\n")) == 5);
  CHECK(parse_error_line(with_header("name x\ndim 2\nvelocity 0, 0\nexclude line 0, 0 dir 0, 1 radius 1\n")) == 5);
  CHECK(parse_error_line(with_header("dim 2\nvelocity 0, 0\n")) > 0);
}

TEST_CASE("defaults fill density and bounds") {
  const Scenario s = parse_scenario(with_header("name d\ndim 3\nvelocity 0, 0, 1\n"));
  CHECK(s.lo == Point::Constant(3, -2.0));
  CHECK(s.hi == Point::Constant(3, 2.0));
  CHECK(s.fluid().density(0.0, Point::Zero(3))[0] == 1.0);
  CHECK_FALSE(s.fluid().pressure);
}

TEST_CASE("extrusion lifts a planar flow to three dimensions") {
  const Scenario pv = builtin("point_vortex");
  const Scenario s3 = extrude(pv, 1.5);
  CHECK(s3.dim == 3);
  CHECK(s3.name == "point_vortex_3d");
  CHECK(s3.hi(2) == 1.5);
  REQUIRE(s3.exclusions.size() == 1);
  CHECK(s3.exclusions.front().kind == Exclusion::Kind::line);
  const Point x = (Vec(3) << 0.5, 0.5, 0.3).finished();
  const Vec v = s3.flow()(0.0, x);
  const Vec v2 = pv.flow()(0.0, pt(0.5, 0.5));
  CHECK(v(0) == doctest::Approx(v2(0)));
  CHECK(v(1) == doctest::Approx(v2(1)));
  CHECK(v(2) == 0.0);
  CHECK(s3.goldens.empty());
}

TEST_CASE("sample grids keep clear of exclusions") {
  const Scenario s = builtin("vortex_pair");
  const auto g = s.grid(16, 0.1);
  CHECK_FALSE(g.empty());
  for (const auto& p : g) {
    for (const auto& z : s.exclusions) CHECK(z.distance(p) >= z.radius + 0.1);
  }
  CHECK_THROWS_AS(builtin("no_such_flow"), Error);
}
