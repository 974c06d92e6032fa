#include "vorhom/kinematics.hpp"

namespace vorhom {

namespace {

FormValue dt_form(int slots) {
  FormValue v(slots, 1);
  v[0] = 1.0;
  return v;
}

MultiVectorValue dt_vector(int slots) {
  MultiVectorValue v(slots, 1);
  v[0] = 1.0;
  return v;
}

}  // namespace

FormField covelocity(const VectorFieldSpec& spec) { return lower(spec.field(), spec.metric()); }

FormField spacetime_covelocity(const VectorFieldSpec& spec) {
  return spacetime_lift(covelocity(spec)) + FormField::constant(dt_form(spec.dim() + 1));
}

MultiVectorField spacetime_velocity(const VectorFieldSpec& spec) {
  return spacetime_lift(spec.field()) + MultiVectorField::constant(dt_vector(spec.dim() + 1));
}

VelocityGradient velocity_gradient(const VectorFieldSpec& spec, double t, const Point& x) {
  spec.require_outside(x);
  const int n = spec.dim();
  VelocityGradient g;
  g.gradient = spec.gradient(t, x);
  g.strain_rate = g.gradient + g.gradient.transpose();
  g.spin = g.gradient - g.gradient.transpose();
  g.trace_rate = g.gradient.trace() / n;
  g.deviatoric = g.strain_rate - (g.strain_rate.trace() / n) * Mat::Identity(n, n);
  g.time_part = spec.time_derivative(t, x);
  return g;
}

double compressibility(const VectorFieldSpec& spec, double t, const Point& x) {
  spec.require_outside(x);
  return spec.gradient(t, x).trace();
}

bool is_incompressible(const VectorFieldSpec& spec, const std::vector<Point>& samples, double t, double tol) {
  for (const auto& p : samples) {
    if (std::abs(compressibility(spec, t, p)) >= tol) return false;
  }
  return true;
}

FormField vorticity_form(const VectorFieldSpec& spec) { return exterior_derivative(covelocity(spec)); }

FormField spacetime_vorticity(const VectorFieldSpec& spec) {
  return exterior_derivative(spacetime_covelocity(spec));
}

FormField vorticity_scalar(const VectorFieldSpec& spec) {
  if (spec.dim() != 2) throw DegreeError("the vorticity scalar is defined in two dimensions");
  FormField out(2, 0, [spec](double t, const Point& x) {
    const Mat g = spec.gradient(t, x);
    return FormValue::scalar(2, g(1, 0) - g(0, 1));
  });
  out.inherit(spec.field());
  out.set_steady(spec.steady());
  return out;
}

MultiVectorField vorticity_vector(const VectorFieldSpec& spec) {
  if (spec.dim() != 3) throw DegreeError("the vorticity vector is defined in three dimensions");
  MultiVectorField out(3, 1, [spec](double t, const Point& x) {
    const Mat g = spec.gradient(t, x);  // (i, j) = d_j v^i
    Vec w(3);
    w << g(2, 1) - g(1, 2), g(0, 2) - g(2, 0), g(1, 0) - g(0, 1);
    return from_vector(w);
  });
  out.inherit(spec.field());
  out.set_steady(spec.steady());
  return out;
}

MultiVectorField half_curl_vorticity(const VectorFieldSpec& spec) { return kHalfCurl * vorticity_vector(spec); }

FormField convective_acceleration(const VectorFieldSpec& spec) {
  return lie_derivative(spacetime_velocity(spec), spacetime_covelocity(spec));
}

ConvectiveSplit convective_split(const VectorFieldSpec& spec, double t, const Point& x) {
  spec.require_outside(x);
  const Vec v = spec(t, x);
  const Mat g = spec.gradient(t, x);
  ConvectiveSplit s;
  s.time_part = spec.time_derivative(t, x);
  s.convected = g * v;
  s.material = s.time_part + s.convected;
  s.half_grad_v2 = g.transpose() * v;
  s.spatial = s.material + s.half_grad_v2;
  s.temporal = v.dot(s.time_part);
  return s;
}

FrobeniusReport frobenius_classify(const FormField& v, const std::vector<Point>& samples, double t, double tol) {
  if (samples.empty()) throw NumericError("Frobenius classification needs a non-empty sample grid");
  if (v.degree() != 1) throw DegreeError("Frobenius classification needs a 1-form");
  const int n = v.dim();
  const FormField dv = exterior_derivative(v);
  // Degrees beyond the slot count give the zero space; represent those terms lazily.
  auto norm_at = [&](int index, double time, const Point& p) -> double {
    switch (index) {
      case 0:
        return v(time, p).max_abs();
      case 1:
        return n >= 2 ? dv(time, p).max_abs() : 0.0;
      case 2:
        return n >= 3 ? wedge(v(time, p), dv(time, p)).max_abs() : 0.0;
      case 3: {
        if (n < 4) return 0.0;
        const FormValue w = dv(time, p);
        return wedge(w, w).max_abs();
      }
      default:
        return 0.0;  // degree 5 exceeds the four-slot limit
    }
  };
  FrobeniusReport r;
  r.slots = n;
  r.sample_count = static_cast<int>(samples.size());
  for (const auto& p : samples) {
    for (int i = 0; i < 5; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      r.max_norm[idx] = std::max(r.max_norm[idx], norm_at(i, t, p));
    }
  }
  for (int i = 0; i < 5; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    r.vanishes[idx] = r.max_norm[idx] < tol;
    if (r.vanishes[idx] && r.first_vanishing_index < 0) r.first_vanishing_index = i;
  }
  r.degree_of_integrability = n - r.first_vanishing_index;
  r.surface_orthogonal = r.vanishes[2];
  r.completely_integrable = r.vanishes[2];
  return r;
}

FrobeniusReport frobenius_classify(const VectorFieldSpec& spec, const std::vector<Point>& samples, double t,
                                   double tol) {
  if (spec.steady()) return frobenius_classify(covelocity(spec), samples, t, tol);
  std::vector<Point> lifted;
  lifted.reserve(samples.size());
  for (const auto& p : samples) {
    Point q(p.size() + 1);
    q(0) = t;
    q.tail(p.size()) = p;
    lifted.push_back(q);
  }
  return frobenius_classify(spacetime_covelocity(spec), lifted, t, tol);
}

}  // namespace vorhom
