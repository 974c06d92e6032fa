#pragma once

// Closed expression grammar for scenario files: numbers, the variables
// t x y z (and p in barotropic laws), named parameters and constants,
// + - * / ^, sin cos exp sqrt atan2, and radial piecewise definitions.

#include <array>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "vorhom/error.hpp"

namespace vorhom::expr {

enum class Var { t = 0, x = 1, y = 2, z = 3, p = 4 };
using Env = std::array<double, 5>;

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Piece {
  Expr lo;
  Expr hi;  // may evaluate to +inf
  Expr body;
};

struct Node {
  enum class Kind { Number, Variable, Named, Neg, Add, Sub, Mul, Div, Pow, Call, Piecewise };
  Kind kind = Kind::Number;
  double value = 0.0;  // Number, and the resolved value of Named
  Var var = Var::t;
  std::string name;  // Named and Call
  std::vector<Expr> args;  // operands; for Piecewise args[0] is the guard
  std::vector<Piece> pieces;
};

Expr number(double v);
Expr variable(Var v);
Expr named(std::string name, double value);
Expr neg(Expr a);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr pow(Expr a, Expr b);
Expr call(std::string fn, std::vector<Expr> args);

struct ParseContext {
  std::map<std::string, double> params;
  bool allow_p = false;  // the barotropic law is a function of p
  int line = 1;          // reported in errors
};

/// Recursive-descent parser; errors carry the line and 1-based column.
Expr parse(std::string_view text, const ParseContext& ctx = {});

double eval(const Expr& e, const Env& env);
bool depends_on(const Expr& e, Var v);
bool is_constant(const Expr& e);

/// Symbolic derivative with light simplification. Throws NumericError when an
/// exponent depends on the variable.
Expr derivative(const Expr& e, Var v);
Expr simplify(const Expr& e);

/// ASCII form that parses back to an equal tree.
std::string to_string(const Expr& e);
/// Display form: pi as π, implicit products after numbers, √ for sqrt.
std::string pretty(const Expr& e);

}  // namespace vorhom::expr
