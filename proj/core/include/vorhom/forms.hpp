#pragma once

// Differential forms and multivector fields on flat coordinate space.
//
// A field is a closure (t, x) -> component array. Spatial fields have dim = n
// and take time as a parameter. Spacetime fields have dim = n + 1 with slot 0
// the time coordinate; they ignore the separate t argument. Partial
// derivatives come from an optional analytic closure, otherwise from
// fourth-order finite differences that never sample inside an exclusion zone.

#include <functional>
#include <memory>
#include <vector>

#include "vorhom/exterior.hpp"

namespace vorhom {

/// A deleted point (or, in 3D, a deleted line) together with a safety radius.
struct Exclusion {
  enum class Kind { point, line };

  Kind kind = Kind::point;
  Vec center;
  Vec direction;  // unit vector, lines only
  double radius = 0.0;

  static Exclusion at_point(Vec center, double radius);
  static Exclusion along_line(Vec center, Vec direction, double radius);

  double distance(const Vec& x) const;
  bool contains(const Vec& x) const { return distance(x) < radius; }
};

using ExclusionSet = std::vector<Exclusion>;

/// The first zone containing x, or nullptr. `offset` skips leading slots (time).
const Exclusion* find_exclusion(const ExclusionSet& zones, const Vec& x, int offset = 0);

inline constexpr double kDefaultFdStep = 1e-4;

template <class V>
class AlternatingField {
 public:
  using Value = V;
  using EvalFn = std::function<V(double, const Point&)>;
  using PartialFn = std::function<V(double, const Point&, int)>;

  AlternatingField() = default;

  /// `partial` and `time_partial` may be empty; finite differences are used instead.
  AlternatingField(int dim, int degree, EvalFn eval, PartialFn partial = {}, EvalFn time_partial = {})
      : dim_(dim), degree_(degree), eval_(std::move(eval)), partial_(std::move(partial)),
        time_partial_(std::move(time_partial)) {
    if (dim < 1 || dim > kMaxSlots) throw DegreeError("fields live on 1..4 slots");
    if (degree < 0) throw DegreeError("negative field degree");
    if (!eval_) throw StructuralError("field needs an evaluation closure");
  }

  /// The zero field, flagged as identically zero so callers can skip work.
  static AlternatingField zero(int dim, int degree) {
    AlternatingField f(dim, degree, [dim, degree](double, const Point&) { return V(dim, degree); },
                       [dim, degree](double, const Point&, int) { return V(dim, degree); },
                       [dim, degree](double, const Point&) { return V(dim, degree); });
    f.zero_ = true;
    f.steady_ = true;
    return f;
  }

  static AlternatingField constant(const V& value) {
    const V z(value.dim(), value.degree());
    AlternatingField f(value.dim(), value.degree(), [value](double, const Point&) { return value; },
                       [z](double, const Point&, int) { return z; });
    f.steady_ = true;
    return f;
  }

  int dim() const noexcept { return dim_; }
  int degree() const noexcept { return degree_; }
  bool identically_zero() const noexcept { return zero_; }
  bool analytic() const noexcept { return static_cast<bool>(partial_); }
  bool steady() const noexcept { return steady_; }
  double fd_step() const noexcept { return fd_step_; }
  const ExclusionSet& exclusions() const noexcept { return exclusions_; }
  int exclusion_offset() const noexcept { return exclusion_offset_; }

  V operator()(double t, const Point& x) const { return eval_(t, x); }
  V value(double t, const Point& x) const { return eval_(t, x); }

  /// Partial derivative along coordinate slot `axis`.
  V partial(double t, const Point& x, int axis) const;
  V time_partial(double t, const Point& x) const;

  const EvalFn& eval_fn() const noexcept { return eval_; }
  const PartialFn& partial_fn() const noexcept { return partial_; }
  const EvalFn& time_partial_fn() const noexcept { return time_partial_; }

  AlternatingField& set_steady(bool steady = true) {
    steady_ = steady;
    return *this;
  }
  AlternatingField& set_fd_step(double h) {
    if (!(h > 0.0)) throw NumericError("finite-difference step must be positive");
    fd_step_ = h;
    return *this;
  }
  AlternatingField& set_exclusions(ExclusionSet zones, int offset = 0) {
    exclusions_ = std::move(zones);
    exclusion_offset_ = offset;
    return *this;
  }
  /// Copies fd step, steadiness and exclusions from another field.
  template <class W>
  AlternatingField& inherit(const AlternatingField<W>& other) {
    fd_step_ = other.fd_step();
    exclusions_ = other.exclusions();
    exclusion_offset_ = other.exclusion_offset();
    return *this;
  }

 private:
  int dim_ = 1;
  int degree_ = 0;
  EvalFn eval_;
  PartialFn partial_;
  EvalFn time_partial_;
  double fd_step_ = kDefaultFdStep;
  ExclusionSet exclusions_;
  int exclusion_offset_ = 0;
  bool zero_ = false;
  bool steady_ = false;
};

using FormField = AlternatingField<FormValue>;
using MultiVectorField = AlternatingField<MultiVectorValue>;

/// Fourth-order finite difference of f along `axis`, central when the
/// stencil clears every exclusion zone and one-sided (pointing away) otherwise.
template <class V, class F>
V finite_difference(const F& f, const Point& x, int axis, double h, const ExclusionSet& zones, int offset);

/// Scalar 0-form from a value closure and an optional gradient closure.
FormField scalar_field(int dim, std::function<double(double, const Point&)> value,
                       std::function<Vec(double, const Point&)> gradient = {});

/// Euclidean positive-definite metric g(x); identity unless given.
class Metric {
 public:
  explicit Metric(int dim);
  Metric(int dim, std::function<Mat(const Point&)> g);

  int dim() const noexcept { return dim_; }
  bool euclidean() const noexcept { return !g_; }
  /// Throws NumericError when the sample is not symmetric positive definite.
  Mat at(const Point& x) const;

 private:
  int dim_;
  std::function<Mat(const Point&)> g_;
};

/// V = density * dx^1 ^ ... ^ dx^n; unit density by default.
class VolumeElement {
 public:
  explicit VolumeElement(int dim);
  VolumeElement(int dim, std::function<double(const Point&)> density);

  int dim() const noexcept { return dim_; }
  bool unit() const noexcept { return !density_; }
  double density(const Point& x) const;

 private:
  int dim_;
  std::function<double(const Point&)> density_;
};

// ---- algebra of fields -----------------------------------------------------

FormField operator+(const FormField& a, const FormField& b);
FormField operator-(const FormField& a, const FormField& b);
FormField operator*(double s, const FormField& a);
MultiVectorField operator+(const MultiVectorField& a, const MultiVectorField& b);
MultiVectorField operator-(const MultiVectorField& a, const MultiVectorField& b);
MultiVectorField operator*(double s, const MultiVectorField& a);

FormField wedge(const FormField& a, const FormField& b);
MultiVectorField wedge(const MultiVectorField& a, const MultiVectorField& b);
/// Pointwise product of a multivector field with a scalar 0-form.
MultiVectorField scale(const FormField& f, const MultiVectorField& a);

/// i_X alpha; X of degree >= 1 and at most deg(alpha).
FormField interior_product(const MultiVectorField& x, const FormField& alpha);

/// d alpha. A top-degree input yields the identically-zero (k+1)-form.
FormField exterior_derivative(const FormField& alpha);

/// L_u alpha = d(i_u alpha) + i_u(d alpha).
FormField lie_derivative(const MultiVectorField& u, const FormField& alpha);

FormField sharp(const MultiVectorField& a, const VolumeElement& volume);
FormField sharp(const MultiVectorField& a);
MultiVectorField sharp_inverse(const FormField& alpha, const VolumeElement& volume);
MultiVectorField sharp_inverse(const FormField& alpha);

/// div A = #^-1 d # A.
MultiVectorField divergence(const MultiVectorField& a, const VolumeElement& volume);
MultiVectorField divergence(const MultiVectorField& a);

/// v_i = g_ij v^j and its inverse.
FormField lower(const MultiVectorField& v, const Metric& g);
MultiVectorField raise(const FormField& alpha, const Metric& g);

/// Lift a spatial field on n slots to spacetime (n + 1 slots, slot 0 = t):
/// components keep their spatial index sets and gain no dt parts.
FormField spacetime_lift(const FormField& spatial);
MultiVectorField spacetime_lift(const MultiVectorField& spatial);

/// The field of time partials of a spatial field.
FormField time_derivative(const FormField& alpha);

/// Restrict a spacetime field to its purely spatial components at time t.
FormField spatial_part(const FormField& spacetime);

/// Maximum component norm of a field over a set of points at time t.
template <class V>
double max_norm(const AlternatingField<V>& f, double t, const std::vector<Point>& points) {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, f(t, p).max_abs());
  return m;
}

// ---- template definitions --------------------------------------------------

template <class V, class F>
V finite_difference(const F& f, const Point& x, int axis, double h, const ExclusionSet& zones, int offset) {
  auto clear = [&](std::initializer_list<int> steps, double dir) {
    if (zones.empty()) return true;
    for (int s : steps) {
      Point y = x;
      y(axis) += dir * s * h;
      if (find_exclusion(zones, y, offset) != nullptr) return false;
    }
    return true;
  };
  auto at = [&](double s) {
    Point y = x;
    y(axis) += s * h;
    return f(y);
  };
  if (clear({-2, -1, 1, 2}, 1.0)) {
    V d = at(-2.0) - 8.0 * at(-1.0) + 8.0 * at(1.0) - at(2.0);
    return d * (1.0 / (12.0 * h));
  }
  for (double dir : {1.0, -1.0}) {
    if (!clear({1, 2, 3, 4}, dir)) continue;
    V d = -25.0 * at(0.0) + 48.0 * at(dir) - 36.0 * at(2.0 * dir) + 16.0 * at(3.0 * dir) - 3.0 * at(4.0 * dir);
    return d * (dir / (12.0 * h));
  }
  throw NumericError("no finite-difference stencil clears the exclusion zones near the sample point");
}

template <class V>
V AlternatingField<V>::partial(double t, const Point& x, int axis) const {
  if (axis < 0 || axis >= dim_) throw DegreeError("partial derivative axis out of range");
  if (zero_) return V(dim_, degree_);
  if (partial_) return partial_(t, x, axis);
  return finite_difference<V>([&](const Point& y) { return eval_(t, y); }, x, axis, fd_step_, exclusions_,
                              exclusion_offset_);
}

template <class V>
V AlternatingField<V>::time_partial(double t, const Point& x) const {
  if (zero_ || steady_) return V(dim_, degree_);
  if (time_partial_) return time_partial_(t, x);
  const double h = fd_step_;
  V d = eval_(t - 2.0 * h, x) - 8.0 * eval_(t - h, x) + 8.0 * eval_(t + h, x) - eval_(t + 2.0 * h, x);
  return d * (1.0 / (12.0 * h));
}

}  // namespace vorhom
