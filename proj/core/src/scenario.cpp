#include "vorhom/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "vorhom/vortex.hpp"

namespace vorhom {

using expr::Expr;
using expr::Var;

namespace {

constexpr double kVerifyTol = 1e-8;
constexpr int kVerifyGrid = 8;

Var axis_var(int axis) { return static_cast<Var>(axis + 1); }

expr::Env env_of(double t, const Point& x) {
  expr::Env env{};
  env[0] = t;
  for (int i = 0; i < x.size() && i < 3; ++i) env[static_cast<std::size_t>(i) + 1] = x(i);
  return env;
}

// Symbolic derivative, or nothing when the expression defeats differentiation.
std::optional<Expr> try_derivative(const Expr& e, Var v) {
  try {
    return expr::derivative(e, v);
  } catch (const NumericError&) {
    return std::nullopt;
  }
}

struct Partials {
  std::vector<Expr> spatial;
  std::optional<Expr> time;
  bool complete = true;
};

Partials partials_of(const Expr& e, int n) {
  Partials p;
  for (int i = 0; i < n; ++i) {
    auto d = try_derivative(e, axis_var(i));
    if (!d) {
      p.complete = false;
      p.spatial.clear();
      break;
    }
    p.spatial.push_back(*d);
  }
  p.time = try_derivative(e, Var::t);
  return p;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Splits on `sep` outside parentheses and brackets.
std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

bool reserved(const std::string& id) {
  static const std::set<std::string> words{"t", "x", "y", "z", "p", "pi", "e", "inf", "sin", "cos", "exp", "sqrt",
                                           "atan2", "piecewise"};
  return words.count(id) > 0;
}

bool identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

std::optional<Property> property_from(const std::string& s) {
  for (Property p : {Property::steady, Property::incompressible, Property::irrotational, Property::barotropic,
                     Property::conservative}) {
    if (s == to_string(p)) return p;
  }
  return std::nullopt;
}

std::optional<GoldenTag> tag_from(const std::string& s) {
  for (GoldenTag t : {GoldenTag::exact, GoldenTag::oracle, GoldenTag::identity}) {
    if (s == to_string(t)) return t;
  }
  return std::nullopt;
}

std::size_t probe_arity(const std::string& probe, int dim, std::size_t given) {
  if (probe == "circle") return given == static_cast<std::size_t>(dim) + 2 ? given : static_cast<std::size_t>(dim) + 1;
  if (probe == "figure8") return 4;
  if (probe == "disc") return static_cast<std::size_t>(dim) + 1;
  if (probe == "segment") return 2 * static_cast<std::size_t>(dim);
  if (probe == "point") return static_cast<std::size_t>(dim);
  return 0;
}

int probe_degree(const std::string& probe) {
  if (probe == "circle" || probe == "figure8" || probe == "segment") return 1;
  if (probe == "disc") return 2;
  return 0;
}

int quantity_degree(const std::string& q) {
  if (q == "circulation") return 1;
  if (q == "flux") return 2;
  if (q == "vorticity" || q == "divergence") return 0;
  return -1;
}

// Every expression of the scenario with a short name, for diagnostics.
std::vector<std::pair<std::string, Expr>> all_expressions(const Scenario& s) {
  std::vector<std::pair<std::string, Expr>> out;
  for (std::size_t i = 0; i < s.velocity.size(); ++i) out.emplace_back(fmt::format("velocity[{}]", i), s.velocity[i]);
  if (s.density) out.emplace_back("density", *s.density);
  if (s.pressure) out.emplace_back("pressure", *s.pressure);
  if (s.potential) out.emplace_back("potential", *s.potential);
  if (s.force) {
    for (std::size_t i = 0; i < s.force->size(); ++i) out.emplace_back(fmt::format("force[{}]", i), (*s.force)[i]);
  }
  return out;
}

void collect_piecewise(const Expr& e, std::vector<Expr>& out) {
  if (e->kind == expr::Node::Kind::Piecewise) out.push_back(e);
  for (const auto& a : e->args) collect_piecewise(a, out);
  for (const auto& piece : e->pieces) collect_piecewise(piece.body, out);
}

[[noreturn]] void reject(Property p, const std::string& detail) {
  throw ValidationError(fmt::format("declared property '{}' fails verification: {}", to_string(p), detail));
}

// Locates seam crossings between adjacent grid points by bisection on the
// guard and compares the neighbouring pieces there.
void verify_seams(const Scenario& s) {
  std::vector<std::pair<std::string, Expr>> nodes;
  for (const auto& [where, e] : all_expressions(s)) {
    std::vector<Expr> found;
    collect_piecewise(e, found);
    for (const auto& f : found) nodes.emplace_back(where, f);
  }
  if (nodes.empty()) return;
  const int n = s.dim;
  const int per_axis = n == 2 ? 16 : 8;
  const auto pts = uniform_grid(s.lo, s.hi, per_axis);
  const Vec step = (s.hi - s.lo) / (per_axis - 1);
  for (const auto& [where, node] : nodes) {
    const Expr& guard = node->args[0];
    for (std::size_t k = 0; k + 1 < node->pieces.size(); ++k) {
      const auto& left = node->pieces[k];
      const auto& right = node->pieces[k + 1];
      const double b = expr::eval(left.hi, {});
      if (b != expr::eval(right.lo, {})) {
        throw ValidationError(fmt::format("{}: piecewise intervals are not contiguous at {}", where, b));
      }
      for (const auto& p : pts) {
        for (int a = 0; a < n; ++a) {
          Point q = p;
          q(a) += step(a);
          if (q(a) > s.hi(a) + 1e-12) continue;
          double g0 = expr::eval(guard, env_of(0.0, p)) - b;
          const double g1 = expr::eval(guard, env_of(0.0, q)) - b;
          if ((g0 < 0.0) == (g1 < 0.0)) continue;
          Point lo = p;
          Point hi = q;
          for (int it = 0; it < 80; ++it) {
            const Point mid = 0.5 * (lo + hi);
            const double gm = expr::eval(guard, env_of(0.0, mid)) - b;
            if ((gm < 0.0) == (g0 < 0.0)) {
              lo = mid;
              g0 = gm;
            } else {
              hi = mid;
            }
          }
          const Point seam = 0.5 * (lo + hi);
          if (find_exclusion(s.exclusions, seam)) continue;
          const double fl = expr::eval(left.body, env_of(0.0, seam));
          const double fr = expr::eval(right.body, env_of(0.0, seam));
          if (std::abs(fl - fr) > kVerifyTol * (1.0 + std::abs(fl))) {
            throw ValidationError(fmt::format("{}: piecewise definition jumps by {} across the seam at guard = {}",
                                              where, std::abs(fl - fr), b));
          }
        }
      }
    }
  }
}

void check_dimension(const Expr& e, int dim, int line, const std::string& what) {
  for (int a = dim; a < 3; ++a) {
    if (expr::depends_on(e, axis_var(a))) {
      throw ParseError(fmt::format("{} uses coordinate {} in {} dimensions", what, "xyz"[a], dim), line);
    }
  }
}

std::string join_exprs(const std::vector<Expr>& es) {
  std::string s;
  for (std::size_t i = 0; i < es.size(); ++i) s += (i ? ", " : "") + expr::to_string(es[i]);
  return s;
}

std::string vec_text(const Vec& v) {
  std::string s;
  for (int i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt::format("{}", v(i));
  return s;
}

}  // namespace

const char* to_string(Property p) {
  switch (p) {
    case Property::steady:
      return "steady";
    case Property::incompressible:
      return "incompressible";
    case Property::irrotational:
      return "irrotational";
    case Property::barotropic:
      return "barotropic";
    case Property::conservative:
      return "conservative";
  }
  return "?";
}

const char* to_string(GoldenTag t) {
  switch (t) {
    case GoldenTag::exact:
      return "exact";
    case GoldenTag::oracle:
      return "oracle";
    case GoldenTag::identity:
      return "identity";
  }
  return "?";
}

double Scenario::param(const std::string& key) const {
  for (const auto& [name_, e] : params) {
    if (name_ == key) return expr::eval(e, {});
  }
  throw Error("scenario '" + name + "' has no parameter '" + key + "'");
}

FormField Scenario::scalar(const Expr& e) const {
  const int n = dim;
  const Partials d = partials_of(e, n);
  FormField::PartialFn partial;
  if (d.complete) {
    partial = [n, grads = d.spatial](double t, const Point& x, int axis) {
      return FormValue::scalar(n, expr::eval(grads[static_cast<std::size_t>(axis)], env_of(t, x)));
    };
  }
  FormField::EvalFn time_partial;
  if (d.time) {
    time_partial = [n, dt = *d.time](double t, const Point& x) { return FormValue::scalar(n, expr::eval(dt, env_of(t, x))); };
  }
  FormField f(
      n, 0, [n, e](double t, const Point& x) { return FormValue::scalar(n, expr::eval(e, env_of(t, x))); }, partial,
      time_partial);
  f.set_steady(!expr::depends_on(e, Var::t));
  f.set_exclusions(exclusions);
  return f;
}

VectorFieldSpec Scenario::flow() const {
  const int n = dim;
  std::vector<Partials> d;
  bool complete = true;
  bool timed = true;
  bool steady = true;
  for (const auto& c : velocity) {
    d.push_back(partials_of(c, n));
    complete = complete && d.back().complete;
    timed = timed && d.back().time.has_value();
    steady = steady && !expr::depends_on(c, Var::t);
  }
  const auto comps = velocity;
  MultiVectorField::PartialFn partial;
  if (complete) {
    partial = [n, d](double t, const Point& x, int axis) {
      Vec g(n);
      for (int i = 0; i < n; ++i) {
        g(i) = expr::eval(d[static_cast<std::size_t>(i)].spatial[static_cast<std::size_t>(axis)], env_of(t, x));
      }
      return from_vector(g);
    };
  }
  MultiVectorField::EvalFn time_partial;
  if (timed) {
    time_partial = [n, d](double t, const Point& x) {
      Vec g(n);
      for (int i = 0; i < n; ++i) g(i) = expr::eval(*d[static_cast<std::size_t>(i)].time, env_of(t, x));
      return from_vector(g);
    };
  }
  MultiVectorField v(
      n, 1,
      [n, comps](double t, const Point& x) {
        Vec out(n);
        const auto env = env_of(t, x);
        for (int i = 0; i < n; ++i) out(i) = expr::eval(comps[static_cast<std::size_t>(i)], env);
        return from_vector(out);
      },
      partial, time_partial);
  v.set_steady(steady);
  return VectorFieldSpec(v, exclusions);
}

FluidState Scenario::fluid() const {
  FluidState s{flow(), scalar(density ? *density : expr::number(1.0)), {}, {}, {}, {}, {}};
  if (pressure) s.pressure = scalar(*pressure);
  if (potential) s.potential = scalar(*potential);
  if (force) {
    const int n = dim;
    std::vector<FormField> comps;
    for (const auto& c : *force) comps.push_back(scalar(c));
    bool analytic = true;
    bool steady = true;
    for (const auto& c : comps) {
      analytic = analytic && c.analytic();
      steady = steady && c.steady();
    }
    FormField::PartialFn partial;
    if (analytic) {
      partial = [n, comps](double t, const Point& x, int axis) {
        Vec g(n);
        for (int i = 0; i < n; ++i) g(i) = comps[static_cast<std::size_t>(i)].partial(t, x, axis)[0];
        return from_covector(g);
      };
    }
    FormField f(
        n, 1,
        [n, comps](double t, const Point& x) {
          Vec g(n);
          for (int i = 0; i < n; ++i) g(i) = comps[static_cast<std::size_t>(i)](t, x)[0];
          return from_covector(g);
        },
        partial,
        [n, comps](double t, const Point& x) {
          Vec g(n);
          for (int i = 0; i < n; ++i) g(i) = comps[static_cast<std::size_t>(i)].time_partial(t, x)[0];
          return from_covector(g);
        });
    f.set_steady(steady);
    f.set_exclusions(exclusions);
    s.force = f;
  }
  if (barotropic) {
    s.barotropic = [law = *barotropic](double p) {
      expr::Env env{};
      env[static_cast<std::size_t>(Var::p)] = p;
      return expr::eval(law, env);
    };
  }
  return s;
}

std::vector<int> Scenario::piece_signature(double t, const Point& x) const {
  std::vector<int> out;
  const auto env = env_of(t, x);
  for (const auto& [where, e] : all_expressions(*this)) {
    std::vector<Expr> found;
    collect_piecewise(e, found);
    for (const auto& node : found) {
      const double g = expr::eval(node->args[0], env);
      int active = -1;
      for (std::size_t k = 0; k < node->pieces.size(); ++k) {
        const auto& piece = node->pieces[k];
        if (g >= expr::eval(piece.lo, env) && g < expr::eval(piece.hi, env)) active = static_cast<int>(k);
      }
      out.push_back(active);
    }
  }
  return out;
}

std::vector<Point> Scenario::grid(int per_axis, double margin) const {
  return uniform_grid(lo, hi, per_axis, exclusions, margin);
}

GeometricChain Scenario::probe_chain(const Golden& g) const {
  std::vector<double> a;
  for (const auto& e : g.args) a.push_back(expr::eval(e, {}));
  const int n = dim;
  auto point_at = [&](std::size_t offset) {
    Point p(n);
    for (int i = 0; i < n; ++i) p(i) = a[offset + static_cast<std::size_t>(i)];
    return p;
  };
  if (g.probe == "circle") {
    const int turns = a.size() == static_cast<std::size_t>(n) + 2 ? static_cast<int>(std::lround(a.back())) : 1;
    return circle(point_at(0), a[static_cast<std::size_t>(n)], turns);
  }
  if (g.probe == "disc") return disc(point_at(0), a[static_cast<std::size_t>(n)]);
  if (g.probe == "segment") return GeometricChain(segment(point_at(0), point_at(static_cast<std::size_t>(n))));
  if (g.probe == "point") return GeometricChain(point_cube(point_at(0)));
  if (g.probe == "figure8") {
    // Two counter-clockwise loops around a and b, both starting at the midpoint.
    Point ca(n);
    Point cb(n);
    ca.setZero();
    cb.setZero();
    ca(0) = a[0];
    ca(1) = a[1];
    cb(0) = a[2];
    cb(1) = a[3];
    const Point m = 0.5 * (ca + cb);
    auto loop = [&](const Point& c) {
      Vec e1 = m - c;
      const double r = e1.norm();
      e1 /= r;
      Vec e2 = Vec::Zero(n);
      e2(0) = -e1(1);
      e2(1) = e1(0);
      return circle(c, r, e1, e2);
    };
    return loop(ca) + loop(cb);
  }
  throw Error("unknown probe '" + g.probe + "'");
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  bool header = false;
  bool bounds = false;
  std::map<std::string, double> table;
  std::set<std::string> seen;

  auto ctx = [&](int at, bool allow_p = false) {
    expr::ParseContext c;
    c.params = table;
    c.allow_p = allow_p;
    c.line = at;
    return c;
  };
  auto parse_expr = [&](const std::string& src, const std::string& what, bool allow_p = false) {
    try {
      Expr e = expr::parse(src, ctx(line, allow_p));
      if (s.dim > 0) check_dimension(e, s.dim, line, what);
      return e;
    } catch (const ParseError& err) {
      throw ParseError(what + ": " + err.message(), line, err.column());
    }
  };
  auto constant = [&](const std::string& src, const std::string& what) {
    Expr e = parse_expr(src, what);
    if (!expr::is_constant(e)) throw ParseError(what + " must be constant", line);
    return expr::eval(e, {});
  };
  auto need_dim = [&](const std::string& what) {
    if (s.dim == 0) throw ParseError(what + " before dim", line);
  };
  auto once = [&](const std::string& key) {
    if (!seen.insert(key).second) throw ParseError("duplicate directive '" + key + "'", line);
  };
  auto list = [&](const std::string& rest, const std::string& what) {
    need_dim(what);
    const auto parts = split_top(rest, ',');
    if (parts.size() != static_cast<std::size_t>(s.dim)) {
      throw ParseError(fmt::format("{} needs {} components, got {}", what, s.dim, parts.size()), line);
    }
    std::vector<Expr> out;
    for (std::size_t i = 0; i < parts.size(); ++i) out.push_back(parse_expr(parts[i], fmt::format("{}[{}]", what, i)));
    return out;
  };

  while (std::getline(in, raw)) {
    ++line;
    const std::string l = trim(raw);
    if (l.empty() || l[0] == '#') continue;
    if (!header) {
      if (l.rfind("vorhom-scenario", 0) != 0) throw ParseError("missing header 'vorhom-scenario 1'", line);
      if (trim(l.substr(15)) != "1") throw ParseError("unsupported scenario format version", line);
      header = true;
      continue;
    }
    const auto space = l.find_first_of(" \t");
    const std::string key = l.substr(0, space);
    const std::string rest = space == std::string::npos ? std::string() : trim(l.substr(space));
    if (key == "name") {
      once(key);
      if (!identifier(rest)) throw ParseError("scenario name must be an identifier", line);
      s.name = rest;
    } else if (key == "dim") {
      once(key);
      if (rest != "2" && rest != "3") throw ParseError("dim must be 2 or 3", line);
      s.dim = rest[0] - '0';
    } else if (key == "param") {
      const auto eq = rest.find('=');
      if (eq == std::string::npos) throw ParseError("param needs 'NAME = expression'", line);
      const std::string pname = trim(rest.substr(0, eq));
      if (!identifier(pname) || reserved(pname)) throw ParseError("invalid parameter name '" + pname + "'", line);
      if (table.count(pname)) throw ParseError("parameter '" + pname + "' defined twice", line);
      Expr e = parse_expr(trim(rest.substr(eq + 1)), "param " + pname);
      if (!expr::is_constant(e)) throw ParseError("param " + pname + " must be constant", line);
      table[pname] = expr::eval(e, {});
      s.params.emplace_back(pname, e);
    } else if (key == "velocity") {
      once(key);
      s.velocity = list(rest, "velocity");
    } else if (key == "force") {
      once(key);
      s.force = list(rest, "force");
    } else if (key == "density" || key == "pressure" || key == "potential") {
      once(key);
      need_dim(key);
      Expr e = parse_expr(rest, key);
      (key == "density" ? s.density : key == "pressure" ? s.pressure : s.potential) = e;
    } else if (key == "barotropic") {
      once(key);
      Expr e = parse_expr(rest, key, true);
      for (Var v : {Var::t, Var::x, Var::y, Var::z}) {
        if (expr::depends_on(e, v)) throw ParseError("barotropic law may depend on p only", line);
      }
      s.barotropic = e;
    } else if (key == "exclude") {
      need_dim(key);
      const auto rpos = rest.rfind(" radius ");
      if (rpos == std::string::npos) throw ParseError("exclude needs 'radius r'", line);
      const double radius = constant(trim(rest.substr(rpos + 8)), "exclusion radius");
      const std::string body = trim(rest.substr(0, rpos));
      auto vec_of = [&](const std::string& src, const std::string& what) {
        const auto parts = split_top(src, ',');
        if (parts.size() != static_cast<std::size_t>(s.dim)) {
          throw ParseError(fmt::format("{} needs {} coordinates", what, s.dim), line);
        }
        Vec v(s.dim);
        for (int i = 0; i < s.dim; ++i) v(i) = constant(parts[static_cast<std::size_t>(i)], what);
        return v;
      };
      if (body.rfind("point ", 0) == 0) {
        s.exclusions.push_back(Exclusion::at_point(vec_of(trim(body.substr(6)), "exclusion center"), radius));
      } else if (body.rfind("line ", 0) == 0) {
        if (s.dim != 3) throw ParseError("line exclusions need dim 3", line);
        const auto dpos = body.find(" dir ");
        if (dpos == std::string::npos) throw ParseError("line exclusion needs 'dir'", line);
        const Vec c = vec_of(trim(body.substr(5, dpos - 5)), "exclusion center");
        const Vec d = vec_of(trim(body.substr(dpos + 5)), "exclusion direction");
        if (d.norm() == 0.0) throw ParseError("exclusion direction is zero", line);
        s.exclusions.push_back(Exclusion::along_line(c, d, radius));
      } else {
        throw ParseError("exclude must be 'point' or 'line'", line);
      }
    } else if (key == "bounds") {
      once(key);
      need_dim(key);
      std::istringstream words(rest);
      std::vector<std::string> parts;
      for (std::string w; words >> w;) parts.push_back(w);
      if (parts.size() != 2 * static_cast<std::size_t>(s.dim)) {
        throw ParseError(fmt::format("bounds needs {} values", 2 * s.dim), line);
      }
      s.lo = Point(s.dim);
      s.hi = Point(s.dim);
      for (int i = 0; i < s.dim; ++i) {
        s.lo(i) = constant(parts[2 * static_cast<std::size_t>(i)], "bounds");
        s.hi(i) = constant(parts[2 * static_cast<std::size_t>(i) + 1], "bounds");
        if (!(s.lo(i) < s.hi(i))) throw ParseError("bounds must satisfy lo < hi", line);
      }
      bounds = true;
    } else if (key == "declare") {
      std::istringstream words(rest);
      for (std::string w; words >> w;) {
        const auto p = property_from(w);
        if (!p) throw ParseError("unknown property '" + w + "'", line);
        s.declared.insert(*p);
      }
    } else if (key == "golden") {
      need_dim(key);
      Golden g;
      if (rest.empty() || rest[0] != '"') throw ParseError("golden needs a quoted label", line);
      const auto close = rest.find('"', 1);
      if (close == std::string::npos) throw ParseError("unterminated golden label", line);
      g.label = rest.substr(1, close - 1);
      std::string tail = trim(rest.substr(close + 1));
      const auto qend = tail.find(' ');
      if (qend == std::string::npos) throw ParseError("golden needs a quantity and a probe", line);
      g.quantity = tail.substr(0, qend);
      if (quantity_degree(g.quantity) < 0) throw ParseError("unknown golden quantity '" + g.quantity + "'", line);
      tail = trim(tail.substr(qend));
      const auto open = tail.find('(');
      const auto shut = tail.find(')');
      if (open == std::string::npos || shut == std::string::npos || shut < open) {
        throw ParseError("golden probe needs 'name(args)'", line);
      }
      g.probe = trim(tail.substr(0, open));
      for (const auto& part : split_top(tail.substr(open + 1, shut - open - 1), ',')) {
        g.args.push_back(parse_expr(part, "golden probe argument"));
        if (!expr::is_constant(g.args.back())) throw ParseError("golden probe arguments must be constant", line);
      }
      if (probe_arity(g.probe, s.dim, g.args.size()) != g.args.size()) {
        throw ParseError(fmt::format("probe {} does not take {} arguments in {} dimensions", g.probe, g.args.size(),
                                     s.dim),
                         line);
      }
      if (g.probe == "figure8" && s.dim != 2) throw ParseError("figure8 probes are planar", line);
      if (probe_degree(g.probe) != quantity_degree(g.quantity)) {
        throw ParseError("probe " + g.probe + " does not fit quantity " + g.quantity, line);
      }
      tail = trim(tail.substr(shut + 1));
      if (tail.empty() || tail[0] != '=') throw ParseError("golden needs '= expected'", line);
      const auto lb = tail.rfind('[');
      const auto rb = tail.rfind(']');
      if (lb == std::string::npos || rb == std::string::npos || rb < lb) {
        throw ParseError("golden needs a provenance tag in brackets", line);
      }
      const auto tag = tag_from(trim(tail.substr(lb + 1, rb - lb - 1)));
      if (!tag) throw ParseError("golden tag must be exact, oracle or identity", line);
      g.tag = *tag;
      g.expected = parse_expr(trim(tail.substr(1, lb - 1)), "golden value");
      if (!expr::is_constant(g.expected)) throw ParseError("golden value must be constant", line);
      s.goldens.push_back(std::move(g));
    } else {
      throw ParseError("unknown directive '" + key + "'", line);
    }
  }
  if (!header) throw ParseError("missing header 'vorhom-scenario 1'", std::max(line, 1));
  if (s.name.empty()) throw ParseError("missing 'name'", line);
  if (s.dim == 0) throw ParseError("missing 'dim'", line);
  if (s.velocity.empty()) throw ParseError("missing 'velocity'", line);
  if (!bounds) {
    s.lo = Point::Constant(s.dim, -2.0);
    s.hi = Point::Constant(s.dim, 2.0);
  }
  verify_declarations(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize(const Scenario& s) {
  std::string out = "vorhom-scenario 1\n";
  out += "name " + s.name + "\n";
  out += fmt::format("dim {}\n", s.dim);
  for (const auto& [name, e] : s.params) out += "param " + name + " = " + expr::to_string(e) + "\n";
  out += "velocity " + join_exprs(s.velocity) + "\n";
  if (s.density) out += "density " + expr::to_string(*s.density) + "\n";
  if (s.pressure) out += "pressure " + expr::to_string(*s.pressure) + "\n";
  if (s.potential) out += "potential " + expr::to_string(*s.potential) + "\n";
  if (s.force) out += "force " + join_exprs(*s.force) + "\n";
  if (s.barotropic) out += "barotropic " + expr::to_string(*s.barotropic) + "\n";
  for (const auto& z : s.exclusions) {
    if (z.kind == Exclusion::Kind::point) {
      out += "exclude point " + vec_text(z.center) + fmt::format(" radius {}\n", z.radius);
    } else {
      out += "exclude line " + vec_text(z.center) + " dir " + vec_text(z.direction) +
             fmt::format(" radius {}\n", z.radius);
    }
  }
  out += "bounds";
  for (int i = 0; i < s.dim; ++i) out += fmt::format(" {} {}", s.lo(i), s.hi(i));
  out += "\n";
  if (!s.declared.empty()) {
    out += "declare";
    for (Property p : s.declared) out += std::string(" ") + to_string(p);
    out += "\n";
  }
  for (const auto& g : s.goldens) {
    out += fmt::format("golden \"{}\" {} {}({}) = {} [{}]\n", g.label, g.quantity, g.probe, join_exprs(g.args),
                       expr::to_string(g.expected), to_string(g.tag));
  }
  return out;
}

void verify_declarations(const Scenario& s) {
  const auto pts = s.grid(kVerifyGrid);
  const VectorFieldSpec v = s.flow();
  const std::array<double, 2> times{0.0, 1.0};
  if (s.declares(Property::steady)) {
    for (const auto& [where, e] : all_expressions(s)) {
      if (expr::depends_on(e, Var::t)) reject(Property::steady, where + " depends on t");
    }
  }
  if (s.declares(Property::incompressible)) {
    for (double t : times) {
      for (const auto& p : pts) {
        const double d = compressibility(v, t, p);
        if (std::abs(d) >= kVerifyTol) reject(Property::incompressible, fmt::format("div v = {} at t = {}", d, t));
      }
    }
  }
  if (s.declares(Property::irrotational)) {
    for (double t : times) {
      for (const auto& p : pts) {
        const Mat g = v.gradient(t, p);
        const double w = (g - g.transpose()).cwiseAbs().maxCoeff();
        if (w >= kVerifyTol) reject(Property::irrotational, fmt::format("vorticity {} at t = {}", w, t));
      }
    }
  }
  const FluidState fluid = s.fluid();
  if (s.declares(Property::barotropic)) {
    if (!s.pressure) reject(Property::barotropic, "no pressure field");
    for (double t : times) {
      const BalanceReport r = barotropic_check(fluid, pts, t);
      if (!r.pass) reject(Property::barotropic, fmt::format("|d rho ^ d pi| reaches {} at t = {}", r.max_residual, t));
    }
  }
  if (s.declares(Property::conservative) && s.force) {
    if (!s.potential) reject(Property::conservative, "force given without a potential");
    const FormField f = *fluid.force;
    for (double t : times) {
      for (const auto& p : pts) {
        Vec grad_u(s.dim);
        for (int i = 0; i < s.dim; ++i) grad_u(i) = fluid.potential->partial(t, p, i)[0];
        const double r = (to_covector(f(t, p)) + grad_u).norm();
        if (r >= kVerifyTol * (1.0 + grad_u.norm())) {
          reject(Property::conservative, fmt::format("|F + dU| = {} at t = {}", r, t));
        }
      }
    }
  }
  verify_seams(s);
}

Scenario extrude(const Scenario& s, double half_height) {
  if (s.dim != 2) throw DegreeError("only planar scenarios extrude");
  Scenario out = s;
  out.name = s.name + "_3d";
  out.dim = 3;
  out.velocity.push_back(expr::number(0.0));
  if (out.force) out.force->push_back(expr::number(0.0));
  out.exclusions.clear();
  for (const auto& z : s.exclusions) {
    Vec c(3);
    c << z.center(0), z.center(1), 0.0;
    Vec d(3);
    d << 0.0, 0.0, 1.0;
    out.exclusions.push_back(Exclusion::along_line(c, d, z.radius));
  }
  out.lo = Point(3);
  out.hi = Point(3);
  out.lo << s.lo(0), s.lo(1), -half_height;
  out.hi << s.hi(0), s.hi(1), half_height;
  out.goldens.clear();
  return out;
}

std::vector<GoldenResult> evaluate_goldens(const Scenario& s, int order, double rtol) {
  const VectorFieldSpec v = s.flow();
  std::vector<GoldenResult> out;
  for (const auto& g : s.goldens) {
    GoldenResult r;
    r.label = g.label;
    r.quantity = g.quantity;
    r.tag = g.tag;
    r.expected = expr::eval(g.expected, {});
    r.expected_text = expr::pretty(g.expected);
    const GeometricChain c = s.probe_chain(g);
    if (g.quantity == "circulation") {
      r.value = circulation(v, c, order);
    } else if (g.quantity == "flux") {
      r.value = vorticity_flux(v, c, order);
    } else {
      const Point p = c.terms().front().second(Vec(0));
      if (g.quantity == "divergence") {
        r.value = compressibility(v, 0.0, p);
      } else if (s.dim == 2) {
        r.value = vorticity_scalar(v)(0.0, p)[0];
      } else {
        r.value = to_vector(vorticity_vector(v)(0.0, p))(2);
      }
    }
    r.residual = std::abs(r.value - r.expected);
    r.pass = r.residual <= rtol * (1.0 + std::abs(r.expected));
    out.push_back(r);
  }
  return out;
}

}  // namespace vorhom
