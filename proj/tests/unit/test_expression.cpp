#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "oracles.hpp"
#include "vorhom/expression.hpp"

using namespace vorhom;
using namespace vorhom::expr;

namespace {

Env at(double t, double x, double y, double z = 0.0) { return Env{t, x, y, z, 0.0}; }

double value(const std::string& text, const Env& env = {}) { return eval(parse(text), env); }

// Random expression text together with a direct evaluator of the same formula.
struct Sample {
  std::string text;
  std::function<double(const Env&)> f;
};

Sample random_expression(oracle::Rng& rng, int depth) {
  if (depth == 0 || rng.uniform() < 0.25) {
    switch (rng.integer(0, 3)) {
      case 0: {
        const double c = std::round(rng.uniform(-5, 5) * 4) / 4;
        const std::string s = c < 0 ? "(" + std::to_string(c) + ")" : std::to_string(c);
        return {s, [c](const Env&) { return c; }};
      }
      case 1:
        return {"x", [](const Env& e) { return e[1]; }};
      case 2:
        return {"y", [](const Env& e) { return e[2]; }};
      default:
        return {"t", [](const Env& e) { return e[0]; }};
    }
  }
  const Sample a = random_expression(rng, depth - 1);
  const Sample b = random_expression(rng, depth - 1);
  switch (rng.integer(0, 7)) {
    case 0:
      return {"(" + a.text + " + " + b.text + ")", [a, b](const Env& e) { return a.f(e) + b.f(e); }};
    case 1:
      return {"(" + a.text + " - " + b.text + ")", [a, b](const Env& e) { return a.f(e) - b.f(e); }};
    case 2:
      return {"(" + a.text + " * " + b.text + ")", [a, b](const Env& e) { return a.f(e) * b.f(e); }};
    case 3:
      return {"(" + a.text + ") / (1 + (" + b.text + ")^2)",
              [a, b](const Env& e) { return a.f(e) / (1.0 + b.f(e) * b.f(e)); }};
    case 4:
      return {"sin(" + a.text + ")", [a](const Env& e) { return std::sin(a.f(e)); }};
    case 5:
      return {"cos(" + a.text + ")", [a](const Env& e) { return std::cos(a.f(e)); }};
    case 6:
      return {"(" + a.text + ")^3", [a](const Env& e) { return std::pow(a.f(e), 3); }};
    default:
      return {"-" + a.text, [a](const Env& e) { return -a.f(e); }};
  }
}

}  // namespace

TEST_CASE("arithmetic precedence and associativity") {
  CHECK(value("1 + 2 * 3") == 7.0);
  CHECK(value("2^3^2") == 512.0);
  CHECK(value("-2^2") == -4.0);
  CHECK(value("2^-1") == 0.5);
  CHECK(value("8 / 4 / 2") == 1.0);
  CHECK(value("10 - 4 - 3") == 3.0);
  CHECK(value("atan2(1, 1)") == doctest::Approx(std::numbers::pi / 4));
  CHECK(value("sqrt(16) + exp(0) + cos(0) + sin(0)") == 6.0);
  CHECK(value("x*y - t", at(2.0, 3.0, 4.0)) == 10.0);
  CHECK(value("1.5e2") == 150.0);
}

TEST_CASE("parameters and constants resolve by name") {
  ParseContext ctx;
  ctx.params["G"] = 2.0 * std::numbers::pi;
  const Expr e = parse("G/(2*pi)", ctx);
  CHECK(eval(e, {}) == doctest::Approx(1.0));
  CHECK(is_constant(e));
  CHECK(std::isinf(value("inf")));
  CHECK(value("e") == doctest::Approx(std::numbers::e));
  CHECK_THROWS_AS(parse("p + 1"), ParseError);
  ParseContext law;
  law.allow_p = true;
  CHECK(eval(parse("2*p", law), Env{0, 0, 0, 0, 3.0}) == 6.0);
}

TEST_CASE("parse errors carry line and column") {
  ParseContext ctx;
  ctx.line = 7;
  try {
    parse("1 + foo", ctx);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 7);
    CHECK(e.column() == 5);
    CHECK(e.message() == "unknown identifier 'foo'");
  }
  CHECK_THROWS_AS(parse("sin(1, 2)"), ParseError);
  CHECK_THROWS_AS(parse("log(2)"), ParseError);
  CHECK_THROWS_AS(parse("(1 + 2"), ParseError);
  CHECK_THROWS_AS(parse("1 $ 2"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("piecewise selects the interval containing the guard") {
  const Expr e = parse("piecewise(x^2 + y^2; [0, 1): 2*x; [1, inf): x/(x^2 + y^2))");
  CHECK(eval(e, at(0, 0.5, 0)) == 1.0);
  CHECK(eval(e, at(0, 2.0, 0)) == 0.5);
  CHECK(eval(e, at(0, 1.0, 0)) == 1.0);
  CHECK_THROWS_AS(eval(parse("piecewise(x; [0, 1): 1)"), at(0, 2.0, 0)), NumericError);
  const Expr d = derivative(e, Var::x);
  CHECK(eval(d, at(0, 0.5, 0)) == 2.0);
  CHECK(eval(d, at(0, 2.0, 0)) == doctest::Approx(-0.25));
}

TEST_CASE("symbolic derivatives agree with finite differences of an independent evaluator") {
  oracle::Rng rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const Sample s = random_expression(rng, 4);
    CAPTURE(s.text);
    const Expr e = parse(s.text);
    const Env env = at(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    CHECK(eval(e, env) == doctest::Approx(s.f(env)).epsilon(1e-12));
    for (Var v : {Var::t, Var::x, Var::y}) {
      const auto i = static_cast<std::size_t>(v);
      const double h = 1e-5;
      Env lo = env;
      Env hi = env;
      lo[i] -= h;
      hi[i] += h;
      const double fd = (s.f(hi) - s.f(lo)) / (2 * h);
      CHECK(eval(derivative(e, v), env) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("ASCII printing parses back to the same function") {
  oracle::Rng rng(52);
  for (int trial = 0; trial < 200; ++trial) {
    const Expr e = parse(random_expression(rng, 4).text);
    const std::string text = to_string(e);
    CAPTURE(text);
    const Expr back = parse(text);
    CHECK(to_string(back) == text);
    const Env env = at(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    CHECK(eval(back, env) == doctest::Approx(eval(e, env)).epsilon(1e-14));
  }
}

TEST_CASE("display form uses mathematical symbols") {
  CHECK(pretty(parse("2*pi")) == "2π");
  CHECK(pretty(parse("4*pi")) == "4π");
  CHECK(pretty(parse("0")) == "0");
  CHECK(pretty(parse("-1")).find("−") != std::string::npos);
  CHECK(pretty(parse("sqrt(2)")).find("√") != std::string::npos);
  CHECK(pretty(parse("inf")) == "∞");
}

TEST_CASE("exponents that depend on the variable are not differentiated") {
  CHECK_THROWS_AS(derivative(parse("2^x"), Var::x), NumericError);
  CHECK(eval(derivative(parse("x^y"), Var::t), {}) == 0.0);
  CHECK(depends_on(parse("x + t"), Var::t));
  CHECK_FALSE(depends_on(parse("x + y"), Var::t));
  CHECK(to_string(simplify(parse("0*x + 1*y"))) == "y");
}
