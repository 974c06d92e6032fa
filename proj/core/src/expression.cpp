#include "vorhom/expression.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace vorhom::expr {

using Kind = Node::Kind;

namespace {

Expr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

Expr binary(Kind k, Expr a, Expr b) {
  Node n;
  n.kind = k;
  n.args = {std::move(a), std::move(b)};
  return make(std::move(n));
}

bool is_number(const Expr& e, double v) { return e->kind == Kind::Number && e->value == v; }

const char* var_name(Var v) {
  switch (v) {
    case Var::t:
      return "t";
    case Var::x:
      return "x";
    case Var::y:
      return "y";
    case Var::z:
      return "z";
    case Var::p:
      return "p";
  }
  return "?";
}

// ---------------------------------------------------------------- parsing

struct Token {
  enum class Type { Number, Ident, Symbol, End } type = Type::End;
  std::string text;
  double number = 0.0;
  int column = 0;
};

std::vector<Token> tokenize(std::string_view s, int line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    const int column = static_cast<int>(i) + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t j = i;
      while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
          j = k;
          while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        }
      }
      const std::string text(s.substr(i, j - i));
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != text.size()) throw ParseError("malformed number '" + text + "'", line, column);
      out.push_back({Token::Type::Number, text, v, column});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Token::Type::Ident, std::string(s.substr(i, j - i)), 0.0, column});
      i = j;
      continue;
    }
    if (std::string_view("+-*/^(),;[]:").find(c) != std::string_view::npos) {
      out.push_back({Token::Type::Symbol, std::string(1, c), 0.0, column});
      ++i;
      continue;
    }
    throw ParseError(fmt::format("unexpected character '{}'", c), line, column);
  }
  out.push_back({Token::Type::End, "", 0.0, static_cast<int>(s.size()) + 1});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const ParseContext& ctx) : tokens_(tokenize(text, ctx.line)), ctx_(ctx) {}

  Expr parse_all() {
    Expr e = expression();
    if (peek().type != Token::Type::End) fail("unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool at(const char* sym) const { return peek().type == Token::Type::Symbol && peek().text == sym; }
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, ctx_.line, peek().column); }
  void expect(const char* sym) {
    if (!at(sym)) fail(fmt::format("expected '{}'", sym));
    ++pos_;
  }

  Expr expression() {
    Expr e = term();
    while (at("+") || at("-")) {
      const bool plus = at("+");
      ++pos_;
      e = plus ? add(e, term()) : sub(e, term());
    }
    return e;
  }

  Expr term() {
    Expr e = unary();
    while (at("*") || at("/")) {
      const bool times = at("*");
      ++pos_;
      e = times ? mul(e, unary()) : div(e, unary());
    }
    return e;
  }

  Expr unary() {
    if (at("-")) {
      ++pos_;
      return neg(unary());
    }
    if (at("+")) {
      ++pos_;
      return unary();
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (at("^")) {
      ++pos_;
      return pow(base, unary());
    }
    return base;
  }

  Expr primary() {
    const Token tok = peek();
    switch (tok.type) {
      case Token::Type::Number:
        ++pos_;
        return number(tok.number);
      case Token::Type::Symbol:
        if (tok.text == "(") {
          ++pos_;
          Expr e = expression();
          expect(")");
          return e;
        }
        fail("unexpected '" + tok.text + "'");
      case Token::Type::End:
        fail("unexpected end of expression");
      case Token::Type::Ident:
        break;
    }
    ++pos_;
    const std::string& id = tok.text;
    if (at("(")) {
      if (id == "piecewise") return piecewise();
      ++pos_;
      std::vector<Expr> args;
      if (!at(")")) {
        args.push_back(expression());
        while (at(",")) {
          ++pos_;
          args.push_back(expression());
        }
      }
      expect(")");
      const std::size_t want = id == "atan2" ? 2 : 1;
      if (id != "sin" && id != "cos" && id != "exp" && id != "sqrt" && id != "atan2") {
        throw ParseError("unknown function '" + id + "'", ctx_.line, tok.column);
      }
      if (args.size() != want) {
        throw ParseError(fmt::format("{} takes {} argument(s)", id, want), ctx_.line, tok.column);
      }
      return call(id, std::move(args));
    }
    if (id == "t") return variable(Var::t);
    if (id == "x") return variable(Var::x);
    if (id == "y") return variable(Var::y);
    if (id == "z") return variable(Var::z);
    if (id == "p" && ctx_.allow_p) return variable(Var::p);
    if (auto it = ctx_.params.find(id); it != ctx_.params.end()) return named(id, it->second);
    if (id == "pi") return named("pi", std::numbers::pi);
    if (id == "e") return named("e", std::numbers::e);
    if (id == "inf") return named("inf", std::numeric_limits<double>::infinity());
    throw ParseError("unknown identifier '" + id + "'", ctx_.line, tok.column);
  }

  // piecewise(guard; [lo, hi): body; ...)
  Expr piecewise() {
    expect("(");
    Node n;
    n.kind = Kind::Piecewise;
    n.args.push_back(expression());
    while (at(";")) {
      ++pos_;
      expect("[");
      Piece piece;
      piece.lo = expression();
      expect(",");
      piece.hi = expression();
      expect(")");
      expect(":");
      piece.body = expression();
      if (!is_constant(piece.lo) || !is_constant(piece.hi)) fail("piecewise interval bounds must be constant");
      n.pieces.push_back(std::move(piece));
    }
    expect(")");
    if (n.pieces.empty()) fail("piecewise needs at least one interval");
    return make(std::move(n));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const ParseContext& ctx_;
};

// ---------------------------------------------------------------- printing

int precedence(const Expr& e) {
  switch (e->kind) {
    case Kind::Add:
    case Kind::Sub:
      return 1;
    case Kind::Mul:
    case Kind::Div:
      return 2;
    case Kind::Neg:
      return 3;
    case Kind::Pow:
      return 4;
    case Kind::Number:
      return e->value < 0.0 ? 0 : 5;
    default:
      return 5;
  }
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

std::string print(const Expr& e, bool fancy);

std::string wrap(const Expr& e, bool paren, bool fancy) {
  const std::string s = print(e, fancy);
  return paren ? "(" + s + ")" : s;
}

std::string print(const Expr& e, bool fancy) {
  switch (e->kind) {
    case Kind::Number:
      return format_number(e->value);
    case Kind::Variable:
      return var_name(e->var);
    case Kind::Named:
      if (fancy && e->name == "pi") return "π";
      if (fancy && e->name == "inf") return "∞";
      return e->name;
    case Kind::Neg:
      return (fancy ? "−" : "-") + wrap(e->args[0], precedence(e->args[0]) < 3, fancy);
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      const int p = precedence(e);
      const bool right_strict = e->kind == Kind::Sub || e->kind == Kind::Div || e->kind == Kind::Mul;
      const Expr& a = e->args[0];
      const Expr& b = e->args[1];
      const std::string left = wrap(a, precedence(a) < p, fancy);
      const std::string right = wrap(b, precedence(b) < p || (right_strict && precedence(b) == p), fancy);
      if (fancy && e->kind == Kind::Mul && a->kind == Kind::Number && a->value >= 0.0 &&
          (b->kind == Kind::Named || b->kind == Kind::Variable)) {
        return left + right;
      }
      const char* op = e->kind == Kind::Add   ? " + "
                       : e->kind == Kind::Sub ? (fancy ? " − " : " - ")
                       : e->kind == Kind::Mul ? (fancy ? "·" : "*")
                                              : "/";
      return left + op + right;
    }
    case Kind::Pow:
      return wrap(e->args[0], precedence(e->args[0]) <= 4, fancy) + "^" +
             wrap(e->args[1], precedence(e->args[1]) < 5, fancy);
    case Kind::Call: {
      if (fancy && e->name == "sqrt") return "√(" + print(e->args[0], fancy) + ")";
      std::string s = e->name + "(";
      for (std::size_t i = 0; i < e->args.size(); ++i) s += (i ? ", " : "") + print(e->args[i], fancy);
      return s + ")";
    }
    case Kind::Piecewise: {
      std::string s = "piecewise(" + print(e->args[0], fancy);
      for (const auto& piece : e->pieces) {
        s += "; [" + print(piece.lo, fancy) + ", " + print(piece.hi, fancy) + "): " + print(piece.body, fancy);
      }
      return s + ")";
    }
  }
  return "?";
}

}  // namespace

Expr number(double v) {
  Node n;
  n.kind = Kind::Number;
  n.value = v;
  return make(std::move(n));
}

Expr variable(Var v) {
  Node n;
  n.kind = Kind::Variable;
  n.var = v;
  return make(std::move(n));
}

Expr named(std::string name, double value) {
  Node n;
  n.kind = Kind::Named;
  n.name = std::move(name);
  n.value = value;
  return make(std::move(n));
}

Expr neg(Expr a) {
  Node n;
  n.kind = Kind::Neg;
  n.args = {std::move(a)};
  return make(std::move(n));
}

Expr add(Expr a, Expr b) { return binary(Kind::Add, std::move(a), std::move(b)); }
Expr sub(Expr a, Expr b) { return binary(Kind::Sub, std::move(a), std::move(b)); }
Expr mul(Expr a, Expr b) { return binary(Kind::Mul, std::move(a), std::move(b)); }
Expr div(Expr a, Expr b) { return binary(Kind::Div, std::move(a), std::move(b)); }
Expr pow(Expr a, Expr b) { return binary(Kind::Pow, std::move(a), std::move(b)); }

Expr call(std::string fn, std::vector<Expr> args) {
  Node n;
  n.kind = Kind::Call;
  n.name = std::move(fn);
  n.args = std::move(args);
  return make(std::move(n));
}

Expr parse(std::string_view text, const ParseContext& ctx) { return Parser(text, ctx).parse_all(); }

double eval(const Expr& e, const Env& env) {
  switch (e->kind) {
    case Kind::Number:
    case Kind::Named:
      return e->value;
    case Kind::Variable:
      return env[static_cast<std::size_t>(e->var)];
    case Kind::Neg:
      return -eval(e->args[0], env);
    case Kind::Add:
      return eval(e->args[0], env) + eval(e->args[1], env);
    case Kind::Sub:
      return eval(e->args[0], env) - eval(e->args[1], env);
    case Kind::Mul:
      return eval(e->args[0], env) * eval(e->args[1], env);
    case Kind::Div:
      return eval(e->args[0], env) / eval(e->args[1], env);
    case Kind::Pow: {
      const Expr& b = e->args[1];
      if (b->kind == Kind::Number && b->value == 2.0) {
        const double a = eval(e->args[0], env);
        return a * a;
      }
      return std::pow(eval(e->args[0], env), eval(b, env));
    }
    case Kind::Call: {
      const double a = eval(e->args[0], env);
      if (e->name == "sin") return std::sin(a);
      if (e->name == "cos") return std::cos(a);
      if (e->name == "exp") return std::exp(a);
      if (e->name == "sqrt") return std::sqrt(a);
      return std::atan2(a, eval(e->args[1], env));
    }
    case Kind::Piecewise: {
      const double g = eval(e->args[0], env);
      for (const auto& piece : e->pieces) {
        if (g >= eval(piece.lo, env) && g < eval(piece.hi, env)) return eval(piece.body, env);
      }
      throw NumericError(fmt::format("piecewise guard value {} lies outside every interval", g));
    }
  }
  return 0.0;
}

bool depends_on(const Expr& e, Var v) {
  if (e->kind == Kind::Variable) return e->var == v;
  for (const auto& a : e->args) {
    if (depends_on(a, v)) return true;
  }
  for (const auto& piece : e->pieces) {
    if (depends_on(piece.body, v)) return true;
  }
  return false;
}

bool is_constant(const Expr& e) {
  for (Var v : {Var::t, Var::x, Var::y, Var::z, Var::p}) {
    if (depends_on(e, v)) return false;
  }
  return true;
}

Expr simplify(const Expr& e) {
  if (e->kind == Kind::Number || e->kind == Kind::Variable || e->kind == Kind::Named) return e;
  if (e->kind == Kind::Piecewise) {
    Node n = *e;
    n.args[0] = simplify(n.args[0]);
    for (auto& piece : n.pieces) piece.body = simplify(piece.body);
    return make(std::move(n));
  }
  std::vector<Expr> a;
  for (const auto& arg : e->args) a.push_back(simplify(arg));
  bool numeric = true;
  for (const auto& arg : a) numeric = numeric && arg->kind == Kind::Number;
  Node n = *e;
  n.args = a;
  Expr rebuilt = make(std::move(n));
  if (numeric) return number(eval(rebuilt, Env{}));
  switch (e->kind) {
    case Kind::Neg:
      if (a[0]->kind == Kind::Neg) return a[0]->args[0];
      break;
    case Kind::Add:
      if (is_number(a[0], 0.0)) return a[1];
      if (is_number(a[1], 0.0)) return a[0];
      break;
    case Kind::Sub:
      if (is_number(a[1], 0.0)) return a[0];
      if (is_number(a[0], 0.0)) return simplify(neg(a[1]));
      break;
    case Kind::Mul:
      if (is_number(a[0], 0.0) || is_number(a[1], 0.0)) return number(0.0);
      if (is_number(a[0], 1.0)) return a[1];
      if (is_number(a[1], 1.0)) return a[0];
      if (is_number(a[0], -1.0)) return simplify(neg(a[1]));
      break;
    case Kind::Div:
      if (is_number(a[0], 0.0)) return number(0.0);
      if (is_number(a[1], 1.0)) return a[0];
      break;
    case Kind::Pow:
      if (is_number(a[1], 0.0)) return number(1.0);
      if (is_number(a[1], 1.0)) return a[0];
      break;
    default:
      break;
  }
  return rebuilt;
}

Expr derivative(const Expr& e, Var v) {
  if (!depends_on(e, v)) return number(0.0);
  const auto d = [v](const Expr& a) { return derivative(a, v); };
  Expr out;
  switch (e->kind) {
    case Kind::Number:
    case Kind::Named:
      return number(0.0);
    case Kind::Variable:
      return number(e->var == v ? 1.0 : 0.0);
    case Kind::Neg:
      out = neg(d(e->args[0]));
      break;
    case Kind::Add:
      out = add(d(e->args[0]), d(e->args[1]));
      break;
    case Kind::Sub:
      out = sub(d(e->args[0]), d(e->args[1]));
      break;
    case Kind::Mul: {
      const Expr& a = e->args[0];
      const Expr& b = e->args[1];
      out = add(mul(d(a), b), mul(a, d(b)));
      break;
    }
    case Kind::Div: {
      const Expr& a = e->args[0];
      const Expr& b = e->args[1];
      out = sub(div(d(a), b), div(mul(a, d(b)), pow(b, number(2.0))));
      break;
    }
    case Kind::Pow: {
      const Expr& a = e->args[0];
      const Expr& b = e->args[1];
      if (depends_on(b, v)) {
        throw NumericError("cannot differentiate a power whose exponent depends on " + std::string(var_name(v)));
      }
      out = mul(mul(b, pow(a, simplify(sub(b, number(1.0))))), d(a));
      break;
    }
    case Kind::Call: {
      const Expr& a = e->args[0];
      if (e->name == "sin") {
        out = mul(call("cos", {a}), d(a));
      } else if (e->name == "cos") {
        out = neg(mul(call("sin", {a}), d(a)));
      } else if (e->name == "exp") {
        out = mul(e, d(a));
      } else if (e->name == "sqrt") {
        out = div(d(a), mul(number(2.0), e));
      } else {
        const Expr& b = e->args[1];
        out = div(sub(mul(b, d(a)), mul(a, d(b))), add(pow(a, number(2.0)), pow(b, number(2.0))));
      }
      break;
    }
    case Kind::Piecewise: {
      Node n = *e;
      for (auto& piece : n.pieces) piece.body = d(piece.body);
      out = make(std::move(n));
      break;
    }
  }
  return simplify(out);
}

std::string to_string(const Expr& e) { return print(e, false); }
std::string pretty(const Expr& e) { return print(e, true); }

}  // namespace vorhom::expr
