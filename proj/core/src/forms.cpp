#include "vorhom/forms.hpp"

#include <Eigen/Cholesky>

namespace vorhom {

// ---- exclusions ------------------------------------------------------------

Exclusion Exclusion::at_point(Vec center, double radius) {
  Exclusion e;
  e.kind = Kind::point;
  e.center = std::move(center);
  e.radius = radius;
  return e;
}

Exclusion Exclusion::along_line(Vec center, Vec direction, double radius) {
  const double len = direction.norm();
  if (!(len > 0.0)) throw NumericError("line exclusion needs a non-zero direction");
  Exclusion e;
  e.kind = Kind::line;
  e.center = std::move(center);
  e.direction = direction / len;
  e.radius = radius;
  return e;
}

double Exclusion::distance(const Vec& x) const {
  if (x.size() != center.size()) {
    throw StructuralError("exclusion zone of dimension " + std::to_string(center.size()) +
                          " tested against a point of dimension " + std::to_string(x.size()));
  }
  const Vec d = x - center;
  if (kind == Kind::point) return d.norm();
  return (d - d.dot(direction) * direction).norm();
}

const Exclusion* find_exclusion(const ExclusionSet& zones, const Vec& x, int offset) {
  if (zones.empty()) return nullptr;
  const Vec spatial = x.segment(offset, x.size() - offset);
  for (const auto& z : zones) {
    if (z.contains(spatial)) return &z;
  }
  return nullptr;
}

// ---- metric and volume -----------------------------------------------------

Metric::Metric(int dim) : dim_(dim) {}
Metric::Metric(int dim, std::function<Mat(const Point&)> g) : dim_(dim), g_(std::move(g)) {}

Mat Metric::at(const Point& x) const {
  if (!g_) return Mat::Identity(dim_, dim_);
  const Mat g = g_(x);
  if (g.rows() != dim_ || g.cols() != dim_) throw NumericError("metric sample has the wrong shape");
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw NumericError("metric sample is not symmetric");
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success) throw NumericError("metric sample is not positive definite");
  return g;
}

VolumeElement::VolumeElement(int dim) : dim_(dim) {}
VolumeElement::VolumeElement(int dim, std::function<double(const Point&)> density)
    : dim_(dim), density_(std::move(density)) {}

double VolumeElement::density(const Point& x) const {
  if (!density_) return 1.0;
  const double d = density_(x);
  if (!(d > 0.0)) throw NumericError("volume density must be positive");
  return d;
}

namespace {

template <class A, class B>
void require_same_dim(const A& a, const B& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DegreeError(std::string(what) + ": fields on " + std::to_string(a.dim()) + " and " +
                      std::to_string(b.dim()) + " slots");
  }
}

// Merged exclusion zones and finite-difference step of two operands.
template <class R, class A, class B>
R& combine_meta(R& out, const A& a, const B& b) {
  out.inherit(a);
  if (a.exclusions().empty() && !b.exclusions().empty()) {
    out.set_exclusions(b.exclusions(), b.exclusion_offset());
  } else if (!b.exclusions().empty() && a.exclusion_offset() == b.exclusion_offset()) {
    ExclusionSet merged = a.exclusions();
    merged.insert(merged.end(), b.exclusions().begin(), b.exclusions().end());
    out.set_exclusions(std::move(merged), a.exclusion_offset());
  }
  out.set_steady(a.steady() && b.steady());
  return out;
}

template <class F>
F linear_sum(const F& a, const F& b, double sb) {
  require_same_dim(a, b, "sum");
  if (a.degree() != b.degree()) throw DegreeError("sum of fields with different degrees");
  using V = typename F::Value;
  typename F::PartialFn partial;
  if (a.analytic() && b.analytic()) {
    partial = [a, b, sb](double t, const Point& x, int i) { return a.partial(t, x, i) + sb * b.partial(t, x, i); };
  }
  F out(
      a.dim(), a.degree(), [a, b, sb](double t, const Point& x) -> V { return a(t, x) + sb * b(t, x); }, partial,
      [a, b, sb](double t, const Point& x) -> V { return a.time_partial(t, x) + sb * b.time_partial(t, x); });
  return combine_meta(out, a, b);
}

template <class F>
F scaled(double s, const F& a) {
  using V = typename F::Value;
  typename F::PartialFn partial;
  if (a.analytic()) partial = [a, s](double t, const Point& x, int i) -> V { return s * a.partial(t, x, i); };
  F out(
      a.dim(), a.degree(), [a, s](double t, const Point& x) -> V { return s * a(t, x); }, partial,
      [a, s](double t, const Point& x) -> V { return s * a.time_partial(t, x); });
  out.inherit(a);
  out.set_steady(a.steady());
  return out;
}

template <class F>
F wedge_fields(const F& a, const F& b) {
  require_same_dim(a, b, "wedge");
  if (a.degree() + b.degree() > a.dim()) {
    throw DegreeError("wedge degree " + std::to_string(a.degree() + b.degree()) + " exceeds " +
                      std::to_string(a.dim()) + " slots");
  }
  using V = typename F::Value;
  typename F::PartialFn partial;
  if (a.analytic() && b.analytic()) {
    partial = [a, b](double t, const Point& x, int i) -> V {
      return wedge(a.partial(t, x, i), b(t, x)) + wedge(a(t, x), b.partial(t, x, i));
    };
  }
  F out(
      a.dim(), a.degree() + b.degree(), [a, b](double t, const Point& x) -> V { return wedge(a(t, x), b(t, x)); },
      partial,
      [a, b](double t, const Point& x) -> V {
        return wedge(a.time_partial(t, x), b(t, x)) + wedge(a(t, x), b.time_partial(t, x));
      });
  return combine_meta(out, a, b);
}

template <class F>
F lift(const F& spatial) {
  using V = typename F::Value;
  const int n = spatial.dim();
  const int k = spatial.degree();
  if (n + 1 > kMaxSlots) throw DegreeError("spacetime lift needs at most three spatial slots");
  auto embed = [n, k](const V& v) {
    V out(n + 1, k);
    const auto masks = basis_masks(n, k);
    for (std::size_t i = 0; i < masks.size(); ++i) out.at(masks[i] << 1) = v[static_cast<int>(i)];
    return out;
  };
  auto split = [n](const Point& p) { return std::pair<double, Point>(p(0), p.segment(1, n)); };
  F out(
      n + 1, k,
      [spatial, embed, split](double, const Point& p) {
        const auto [t, x] = split(p);
        return embed(spatial(t, x));
      },
      [spatial, embed, split](double, const Point& p, int axis) {
        const auto [t, x] = split(p);
        return embed(axis == 0 ? spatial.time_partial(t, x) : spatial.partial(t, x, axis - 1));
      },
      [n, k](double, const Point&) { return V(n + 1, k); });
  out.set_fd_step(spatial.fd_step());
  out.set_exclusions(spatial.exclusions(), spatial.exclusion_offset() + 1);
  out.set_steady(true);  // time is a coordinate now
  return out;
}

}  // namespace

FormField operator+(const FormField& a, const FormField& b) { return linear_sum(a, b, 1.0); }
FormField operator-(const FormField& a, const FormField& b) { return linear_sum(a, b, -1.0); }
FormField operator*(double s, const FormField& a) { return scaled(s, a); }
MultiVectorField operator+(const MultiVectorField& a, const MultiVectorField& b) { return linear_sum(a, b, 1.0); }
MultiVectorField operator-(const MultiVectorField& a, const MultiVectorField& b) { return linear_sum(a, b, -1.0); }
MultiVectorField operator*(double s, const MultiVectorField& a) { return scaled(s, a); }

FormField wedge(const FormField& a, const FormField& b) { return wedge_fields(a, b); }
MultiVectorField wedge(const MultiVectorField& a, const MultiVectorField& b) { return wedge_fields(a, b); }

MultiVectorField scale(const FormField& f, const MultiVectorField& a) {
  require_same_dim(f, a, "scale");
  if (f.degree() != 0) throw DegreeError("scale needs a 0-form");
  MultiVectorField::PartialFn partial;
  if (f.analytic() && a.analytic()) {
    partial = [f, a](double t, const Point& x, int i) {
      return f.partial(t, x, i)[0] * a(t, x) + f(t, x)[0] * a.partial(t, x, i);
    };
  }
  MultiVectorField out(
      a.dim(), a.degree(), [f, a](double t, const Point& x) { return f(t, x)[0] * a(t, x); }, partial,
      [f, a](double t, const Point& x) { return f.time_partial(t, x)[0] * a(t, x) + f(t, x)[0] * a.time_partial(t, x); });
  return combine_meta(out, a, f);
}

FormField scalar_field(int dim, std::function<double(double, const Point&)> value,
                       std::function<Vec(double, const Point&)> gradient) {
  FormField::PartialFn partial;
  if (gradient) {
    partial = [dim, gradient](double t, const Point& x, int i) { return FormValue::scalar(dim, gradient(t, x)(i)); };
  }
  return FormField(
      dim, 0, [dim, value](double t, const Point& x) { return FormValue::scalar(dim, value(t, x)); }, partial);
}

FormField interior_product(const MultiVectorField& x, const FormField& alpha) {
  require_same_dim(x, alpha, "interior product");
  if (x.degree() > alpha.degree()) {
    throw DegreeError("interior product of a degree-" + std::to_string(x.degree()) + " multivector with a " +
                      std::to_string(alpha.degree()) + "-form");
  }
  const int n = alpha.dim();
  const int k = alpha.degree() - x.degree();
  if (x.identically_zero() || alpha.identically_zero()) return FormField::zero(n, k);
  FormField::PartialFn partial;
  if (x.analytic() && alpha.analytic()) {
    partial = [x, alpha](double t, const Point& p, int i) {
      return interior(x.partial(t, p, i), alpha(t, p)) + interior(x(t, p), alpha.partial(t, p, i));
    };
  }
  FormField out(
      n, k, [x, alpha](double t, const Point& p) { return interior(x(t, p), alpha(t, p)); }, partial,
      [x, alpha](double t, const Point& p) {
        return interior(x.time_partial(t, p), alpha(t, p)) + interior(x(t, p), alpha.time_partial(t, p));
      });
  return combine_meta(out, alpha, x);
}

FormField exterior_derivative(const FormField& alpha) {
  const int n = alpha.dim();
  const int k = alpha.degree();
  if (k >= n || alpha.identically_zero()) {
    FormField z = FormField::zero(n, k + 1);
    z.inherit(alpha);
    return z;
  }
  FormField out(n, k + 1, [alpha, n, k](double t, const Point& x) {
    FormValue partials[kMaxSlots];
    for (int i = 0; i < n; ++i) partials[i] = alpha.partial(t, x, i);
    FormValue d(n, k + 1);
    const auto masks = basis_masks(n, k + 1);
    for (std::size_t m = 0; m < masks.size(); ++m) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        if (!((masks[m] >> i) & 1u)) continue;
        const unsigned rest = masks[m] & ~(1u << i);
        s += merge_sign(1u << i, rest) * partials[i].at(rest);
      }
      d[static_cast<int>(m)] = s;
    }
    return d;
  });
  out.inherit(alpha);
  out.set_steady(alpha.steady());
  return out;
}

FormField lie_derivative(const MultiVectorField& u, const FormField& alpha) {
  require_same_dim(u, alpha, "Lie derivative");
  if (u.degree() != 1) throw DegreeError("Lie derivative needs a vector field");
  const FormField d_alpha = exterior_derivative(alpha);
  FormField second = d_alpha.identically_zero() ? FormField::zero(alpha.dim(), alpha.degree())
                                                : interior_product(u, d_alpha);
  if (alpha.degree() == 0) return second;
  const FormField first = exterior_derivative(interior_product(u, alpha));
  if (second.identically_zero()) return first;
  return first + second;
}

FormField sharp(const MultiVectorField& a, const VolumeElement& volume) {
  if (volume.dim() != a.dim()) throw DegreeError("volume element and field live on different slot counts");
  if (a.degree() > a.dim()) throw DegreeError("sharp of a multivector above the top degree");
  FormField::PartialFn partial;
  if (a.analytic() && volume.unit()) {
    partial = [a](double t, const Point& x, int i) { return sharp(a.partial(t, x, i)); };
  }
  FormField out(
      a.dim(), a.dim() - a.degree(), [a, volume](double t, const Point& x) { return sharp(a(t, x), volume.density(x)); },
      partial, [a, volume](double t, const Point& x) { return sharp(a.time_partial(t, x), volume.density(x)); });
  out.inherit(a);
  out.set_steady(a.steady());
  return out;
}

FormField sharp(const MultiVectorField& a) { return sharp(a, VolumeElement(a.dim())); }

MultiVectorField sharp_inverse(const FormField& alpha, const VolumeElement& volume) {
  if (volume.dim() != alpha.dim()) throw DegreeError("volume element and field live on different slot counts");
  if (alpha.degree() > alpha.dim()) throw DegreeError("sharp inverse of a form above the top degree");
  MultiVectorField::PartialFn partial;
  if (alpha.analytic() && volume.unit()) {
    partial = [alpha](double t, const Point& x, int i) { return sharp_inverse(alpha.partial(t, x, i)); };
  }
  MultiVectorField out(
      alpha.dim(), alpha.dim() - alpha.degree(),
      [alpha, volume](double t, const Point& x) { return sharp_inverse(alpha(t, x), volume.density(x)); }, partial,
      [alpha, volume](double t, const Point& x) { return sharp_inverse(alpha.time_partial(t, x), volume.density(x)); });
  out.inherit(alpha);
  out.set_steady(alpha.steady());
  return out;
}

MultiVectorField sharp_inverse(const FormField& alpha) { return sharp_inverse(alpha, VolumeElement(alpha.dim())); }

MultiVectorField divergence(const MultiVectorField& a, const VolumeElement& volume) {
  if (a.degree() < 1) throw DegreeError("divergence of a 0-vector field is undefined");
  return sharp_inverse(exterior_derivative(sharp(a, volume)), volume);
}

MultiVectorField divergence(const MultiVectorField& a) { return divergence(a, VolumeElement(a.dim())); }

FormField lower(const MultiVectorField& v, const Metric& g) {
  if (v.degree() != 1) throw DegreeError("lowering needs a vector field");
  if (g.dim() != v.dim()) throw DegreeError("metric and field live on different slot counts");
  FormField::PartialFn partial;
  if (g.euclidean() && v.analytic()) {
    partial = [v](double t, const Point& x, int i) { return from_covector(to_vector(v.partial(t, x, i))); };
  }
  FormField out(
      v.dim(), 1, [v, g](double t, const Point& x) { return from_covector(g.at(x) * to_vector(v(t, x))); }, partial,
      [v, g](double t, const Point& x) { return from_covector(g.at(x) * to_vector(v.time_partial(t, x))); });
  out.inherit(v);
  out.set_steady(v.steady());
  return out;
}

MultiVectorField raise(const FormField& alpha, const Metric& g) {
  if (alpha.degree() != 1) throw DegreeError("raising needs a 1-form");
  if (g.dim() != alpha.dim()) throw DegreeError("metric and field live on different slot counts");
  auto solve = [g](const Point& x, const Vec& c) -> Vec {
    if (g.euclidean()) return c;
    return g.at(x).llt().solve(c);
  };
  MultiVectorField::PartialFn partial;
  if (g.euclidean() && alpha.analytic()) {
    partial = [alpha](double t, const Point& x, int i) { return from_vector(to_covector(alpha.partial(t, x, i))); };
  }
  MultiVectorField out(
      alpha.dim(), 1, [alpha, solve](double t, const Point& x) { return from_vector(solve(x, to_covector(alpha(t, x)))); },
      partial,
      [alpha, solve](double t, const Point& x) { return from_vector(solve(x, to_covector(alpha.time_partial(t, x)))); });
  out.inherit(alpha);
  out.set_steady(alpha.steady());
  return out;
}

FormField spacetime_lift(const FormField& spatial) { return lift(spatial); }
MultiVectorField spacetime_lift(const MultiVectorField& spatial) { return lift(spatial); }

FormField time_derivative(const FormField& alpha) {
  if (alpha.steady() || alpha.identically_zero()) {
    FormField z = FormField::zero(alpha.dim(), alpha.degree());
    z.inherit(alpha);
    return z;
  }
  FormField out(alpha.dim(), alpha.degree(), [alpha](double t, const Point& x) { return alpha.time_partial(t, x); });
  out.inherit(alpha);
  return out;
}

FormField spatial_part(const FormField& spacetime) {
  const int n = spacetime.dim() - 1;
  const int k = spacetime.degree();
  if (n < 1) throw DegreeError("spatial part needs a spacetime field");
  auto restrict = [n, k](const FormValue& v) {
    FormValue out(n, k);
    const auto masks = basis_masks(n, k);
    for (std::size_t i = 0; i < masks.size(); ++i) out[static_cast<int>(i)] = v.at(masks[i] << 1);
    return out;
  };
  auto join = [n](double t, const Point& x) {
    Point p(n + 1);
    p(0) = t;
    p.segment(1, n) = x;
    return p;
  };
  FormField out(
      n, k, [spacetime, restrict, join](double t, const Point& x) { return restrict(spacetime(0.0, join(t, x))); },
      [spacetime, restrict, join](double t, const Point& x, int i) {
        return restrict(spacetime.partial(0.0, join(t, x), i + 1));
      },
      [spacetime, restrict, join](double t, const Point& x) { return restrict(spacetime.partial(0.0, join(t, x), 0)); });
  out.set_fd_step(spacetime.fd_step());
  out.set_exclusions(spacetime.exclusions(), std::max(0, spacetime.exclusion_offset() - 1));
  return out;
}

}  // namespace vorhom
