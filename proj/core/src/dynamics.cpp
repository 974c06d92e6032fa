#include "vorhom/dynamics.hpp"

#include <cmath>

#include <fmt/format.h>

namespace vorhom {

namespace {

struct Accumulator {
  Thresholds th;
  double max_residual = 0.0;
  double sum = 0.0;
  double max_scale = 0.0;
  double worst = 0.0;
  int count = 0;

  void add(double residual, double scale) {
    max_residual = std::max(max_residual, residual);
    max_scale = std::max(max_scale, scale);
    worst = std::max(worst, residual / (th.atol + th.rtol * scale));
    sum += residual;
    ++count;
  }
  bool ok() const { return worst <= 1.0; }

  void fill(BalanceReport& r) const {
    r.samples = count;
    r.max_residual = max_residual;
    r.mean_residual = count ? sum / count : 0.0;
    r.max_scale = max_scale;
    r.worst_ratio = worst;
    r.pass = ok();
  }
};

BalanceReport not_applicable(const std::string& check, const std::string& note) {
  BalanceReport r;
  r.check = check;
  r.applicable = false;
  r.note = note;
  return r;
}

double scalar(const FormField& f, double t, const Point& x) { return f(t, x)[0]; }

Vec gradient(const FormField& f, double t, const Point& x) {
  Vec g(x.size());
  for (int i = 0; i < x.size(); ++i) g(i) = f.partial(t, x, i)[0];
  return g;
}

void require_positive_density(const FluidState& s, double t, const Point& x) {
  if (!(scalar(s.density, t, x) > 0.0)) {
    throw NumericError(fmt::format("density is not positive at a sample point (t = {})", t));
  }
}

MultiVectorField as_multivector(const FormField& f) {
  if (f.degree() != 0) throw DegreeError("only 0-forms convert to 0-vectors");
  MultiVectorField::PartialFn partial;
  if (f.analytic()) {
    partial = [f](double t, const Point& x, int i) { return MultiVectorValue::scalar(f.dim(), f.partial(t, x, i)[0]); };
  }
  MultiVectorField out(
      f.dim(), 0, [f](double t, const Point& x) { return MultiVectorValue::scalar(f.dim(), f(t, x)[0]); }, partial,
      [f](double t, const Point& x) { return MultiVectorValue::scalar(f.dim(), f.time_partial(t, x)[0]); });
  out.inherit(f);
  out.set_steady(f.steady());
  return out;
}

Point join(double t, const Point& x) {
  Point p(x.size() + 1);
  p(0) = t;
  p.tail(x.size()) = x;
  return p;
}

}  // namespace

FormField FluidState::force_form() const {
  if (force) return *force;
  if (potential) return -1.0 * exterior_derivative(*potential);
  return FormField::zero(flow.dim(), 1);
}

std::vector<Point> uniform_grid(const Point& lo, const Point& hi, int per_axis, const ExclusionSet& zones,
                                double margin) {
  const int n = static_cast<int>(lo.size());
  if (hi.size() != n) throw DegreeError("grid bounds of different dimension");
  if (per_axis < 1) throw NumericError("grid needs at least one point per axis");
  std::vector<Point> out;
  long total = 1;
  for (int i = 0; i < n; ++i) total *= per_axis;
  for (long idx = 0; idx < total; ++idx) {
    Point p(n);
    long rest = idx;
    for (int a = n - 1; a >= 0; --a) {
      const long k = rest % per_axis;
      rest /= per_axis;
      p(a) = per_axis == 1 ? 0.5 * (lo(a) + hi(a)) : lo(a) + (hi(a) - lo(a)) * static_cast<double>(k) / (per_axis - 1);
    }
    bool keep = true;
    for (const auto& z : zones) keep = keep && z.distance(p) >= z.radius + margin;
    if (keep) out.push_back(p);
  }
  return out;
}

BalanceReport continuity_residual(const FluidState& s, const std::vector<Point>& grid, double t, const Thresholds& th) {
  BalanceReport r;
  r.check = "continuity";
  const MultiVectorField mass_flux = scale(s.density, s.flow.field());
  const MultiVectorField div_flux = divergence(mass_flux);
  Accumulator main{th};
  Accumulator lie{th};
  for (const auto& x : grid) {
    s.flow.require_outside(x);
    require_positive_density(s, t, x);
    const double rho = scalar(s.density, t, x);
    const double rho_t = s.density.time_partial(t, x)[0];
    const Vec v = s.flow(t, x);
    const Vec grad_rho = gradient(s.density, t, x);
    const double div_v = s.flow.gradient(t, x).trace();
    const double advect = v.dot(grad_rho);
    const double scale_terms = std::max({std::abs(rho_t), std::abs(advect), std::abs(rho * div_v)});
    main.add(std::abs(rho_t + div_flux(t, x)[0]), scale_terms);
    lie.add(std::abs((rho_t + advect) / rho + div_v), scale_terms / rho);
  }
  main.fill(r);
  r.extras.emplace_back("lie form (1/rho) d rho/dt + div v", lie.max_residual);
  r.pass = main.ok() && lie.ok();
  return r;
}

BalanceReport mass_balance_cochain(const FluidState& s, const GeometricChain& c3, double t, const Thresholds& th,
                                   int order, double time_step) {
  if (s.flow.dim() != 3 || c3.degree() != 3) throw DegreeError("mass balance needs a 3-chain in three dimensions");
  BalanceReport r;
  r.check = "mass balance";
  const FormField mass = sharp(as_multivector(s.density));
  const FormField flux = sharp(scale(s.density, s.flow.field()));
  const double h = time_step;
  auto m = [&](double time) { return integrate(mass, c3, order, time); };
  const double m_dot = (m(t - 2 * h) - 8.0 * m(t - h) + 8.0 * m(t + h) - m(t + 2 * h)) / (12.0 * h);
  const double boundary_flux = integrate(flux, c3.boundary(), order, t);
  const double direct = integrate(sharp(as_multivector(time_derivative(s.density))), c3, order, t);
  Accumulator acc{th};
  acc.add(std::abs(m_dot + boundary_flux), std::abs(m_dot) + std::abs(boundary_flux));
  acc.fill(r);
  r.entries.emplace_back("dM/dt", m_dot);
  r.entries.emplace_back("boundary flux", boundary_flux);
  r.extras.emplace_back("dM/dt - integral of #(d rho/dt)", std::abs(m_dot - direct));
  return r;
}

BalanceReport euler_residual(const FluidState& s, const std::vector<Point>& grid, double t, const Thresholds& th) {
  if (!s.pressure) return not_applicable("euler", "no pressure field declared");
  BalanceReport r;
  r.check = "euler";
  const int n = s.flow.dim();
  const FormField force = s.force_form();
  const FormField& pressure = *s.pressure;

  const FormField rho4 = spacetime_lift(s.density);
  const FormField momentum = wedge(rho4, spacetime_covelocity(s.flow));
  const FormField lie_p = lie_derivative(spacetime_velocity(s.flow), momentum);

  Accumulator main{th};
  Accumulator lie_spatial{th};
  double per_mass = 0.0;
  double lie_temporal = 0.0;
  double temporal = 0.0;
  for (const auto& x : grid) {
    s.flow.require_outside(x);
    require_positive_density(s, t, x);
    const double rho = scalar(s.density, t, x);
    const double rho_t = s.density.time_partial(t, x)[0];
    const Vec grad_rho = gradient(s.density, t, x);
    const Vec v = s.flow(t, x);
    const Mat g = s.flow.gradient(t, x);
    const Vec v_t = s.flow.time_derivative(t, x);
    const Vec f = to_covector(force(t, x));
    const Vec grad_pi = gradient(pressure, t, x);
    const double pi_t = pressure.time_partial(t, x)[0];
    const double f0 = s.temporal_force ? scalar(*s.temporal_force, t, x) : 0.0;
    const double div_v = g.trace();
    const double v2 = v.squaredNorm();

    const Vec material = v_t + g * v;
    const Vec res = rho * material - f + grad_pi;
    const double scale_terms =
        std::max({(rho * v_t).norm(), (rho * g * v).norm(), f.norm(), grad_pi.norm()});
    main.add(res.norm(), scale_terms);
    per_mass = std::max(per_mass, (material - f / rho + grad_pi / rho).norm());

    // F + d(1/2 rho v^2 - pi) - 1/2 v^2 d rho - rho (div v) v on spacetime slots.
    Vec rhs(n + 1);
    rhs(0) = f0 + 0.5 * rho_t * v2 + rho * v.dot(v_t) - pi_t - 0.5 * v2 * rho_t - rho * div_v;
    rhs.tail(n) = f + 0.5 * v2 * grad_rho + rho * g.transpose() * v - grad_pi - 0.5 * v2 * grad_rho - rho * div_v * v;
    const Vec lhs = to_covector(lie_p(0.0, join(t, x)));
    lie_spatial.add((lhs.tail(n) - rhs.tail(n)).norm(), std::max(scale_terms, rhs.tail(n).norm()));
    lie_temporal = std::max(lie_temporal, std::abs(lhs(0) - rhs(0)));
    temporal = std::max(temporal, std::abs(f0 + 0.5 * rho * 2.0 * v.dot(v_t) - pi_t));
  }
  main.fill(r);
  r.extras.emplace_back("per-mass form", per_mass);
  r.extras.emplace_back("lie form, spatial part", lie_spatial.max_residual);
  r.extras.emplace_back("lie form, temporal part", lie_temporal);
  r.extras.emplace_back("temporal balance F0 + 1/2 rho d_t v^2 - d_t pi", temporal);
  r.pass = main.ok() && lie_spatial.ok();
  if (!s.flow.steady()) r.note = "temporal parts are informational for unsteady flows";
  return r;
}

BalanceReport power_balance_residual(const FluidState& s, const std::vector<Point>& grid, double t,
                                     const Thresholds& th) {
  if (!s.pressure) return not_applicable("power", "no pressure field declared");
  const FormField& pressure = *s.pressure;
  for (const auto& x : grid) {
    if (std::abs(pressure.time_partial(t, x)[0]) > th.atol) {
      return not_applicable("power",
                            "pressure varies in time; the balance i_v F = L_v(1/2 rho v^2 + pi) + 1/2 rho (div v) v^2 "
                            "holds only for d_t pi = 0");
    }
  }
  BalanceReport r;
  r.check = "power";
  const FormField force = s.force_form();
  Accumulator main{th};
  Accumulator head{th};
  for (const auto& x : grid) {
    s.flow.require_outside(x);
    require_positive_density(s, t, x);
    const double rho = scalar(s.density, t, x);
    const double rho_t = s.density.time_partial(t, x)[0];
    const Vec grad_rho = gradient(s.density, t, x);
    const Vec v = s.flow(t, x);
    const Mat g = s.flow.gradient(t, x);
    const Vec v_t = s.flow.time_derivative(t, x);
    const Vec grad_pi = gradient(pressure, t, x);
    const double pi_t = pressure.time_partial(t, x)[0];
    const double v2 = v.squaredNorm();
    const double div_v = g.trace();

    const double power = v.dot(to_covector(force(t, x)));
    const double kin_t = 0.5 * rho_t * v2 + rho * v.dot(v_t) + pi_t;
    const double kin_adv = v.dot(0.5 * v2 * grad_rho + rho * g.transpose() * v + grad_pi);
    const double dilation = 0.5 * rho * div_v * v2;
    main.add(std::abs(power - kin_t - kin_adv - dilation),
             std::max({std::abs(power), std::abs(kin_t), std::abs(kin_adv), std::abs(dilation)}));
    if (s.potential) {
      const double u_t = s.potential->time_partial(t, x)[0];
      const double u_adv = v.dot(gradient(*s.potential, t, x));
      const double dh = u_t + u_adv + kin_t + kin_adv;
      head.add(std::abs(dh + dilation), std::max({std::abs(u_adv), std::abs(kin_t), std::abs(kin_adv),
                                                  std::abs(dilation)}));
    }
  }
  main.fill(r);
  if (s.potential) {
    r.extras.emplace_back("dH/dt + 1/2 rho (div v) v^2", head.max_residual);
    r.pass = main.ok() && head.ok();
  }
  const BalanceReport euler = euler_residual(s, grid, t, th);
  if (!euler.pass) r.note = "warning: the Euler residual is above threshold for this state";
  return r;
}

BalanceReport bernoulli_check(const FluidState& s, const std::vector<Point>& seeds, double span, int steps,
                              const Thresholds& th) {
  if (!s.pressure) return not_applicable("bernoulli", "no pressure field declared");
  std::vector<std::string> violations;
  if (!s.flow.steady() || !s.density.steady() || !s.pressure->steady()) violations.emplace_back("not steady");
  if (!is_incompressible(s.flow, seeds)) violations.emplace_back("not incompressible");
  if (!s.conservative()) violations.emplace_back("force is not conservative");
  if (!violations.empty()) {
    std::string note = "preconditions fail:";
    for (const auto& v : violations) note += " " + v + ";";
    note.pop_back();
    return not_applicable("bernoulli", note);
  }
  if (steps < 1) throw NumericError("streamline integration needs at least one step");

  const FormField& pressure = *s.pressure;
  auto head = [&](const Point& x) {
    const double u = s.potential ? scalar(*s.potential, 0.0, x) : 0.0;
    return u + 0.5 * scalar(s.density, 0.0, x) * s.flow(0.0, x).squaredNorm() + scalar(pressure, 0.0, x);
  };
  BalanceReport r;
  r.check = "bernoulli";
  Accumulator acc{th};
  double h_min = std::numeric_limits<double>::infinity();
  double h_max = -std::numeric_limits<double>::infinity();
  const double h = span / steps;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    Point x = seeds[i];
    s.flow.require_outside(x);
    const double h0 = head(x);
    h_min = std::min(h_min, h0);
    h_max = std::max(h_max, h0);
    double deviation = 0.0;
    for (int k = 0; k < steps; ++k) {
      x = transport(s.flow, x, Mat(x.size(), 0), k * h, (k + 1) * h, h, fmt::format("streamline {}", i)).x;
      deviation = std::max(deviation, std::abs(head(x) - h0));
    }
    acc.add(deviation, std::abs(h0));
    r.entries.emplace_back(fmt::format("streamline {}", i), deviation);
  }
  acc.fill(r);
  r.extras.emplace_back("head spread across streamlines", seeds.empty() ? 0.0 : h_max - h_min);
  return r;
}

MagnusResult magnus_force(const FluidState& s, const std::vector<Point>& grid, double t, const Thresholds& th) {
  const int n = s.flow.dim();
  const MultiVectorField p = scale(spacetime_lift(s.density), spacetime_velocity(s.flow));
  const FormField i_p_omega = interior_product(p, spacetime_vorticity(s.flow));
  if (!s.pressure) return MagnusResult{i_p_omega, not_applicable("magnus", "no pressure field declared")};
  const FormField& pressure = *s.pressure;
  const FormField force = s.force_form();
  BalanceReport r;
  r.check = "magnus";
  Accumulator main{th};
  Accumulator head{th};
  double temporal = 0.0;
  double orthogonality = 0.0;
  const MultiVectorField v4 = spacetime_velocity(s.flow);
  for (const auto& x : grid) {
    s.flow.require_outside(x);
    require_positive_density(s, t, x);
    const Point px = join(t, x);
    const Vec lhs = to_covector(i_p_omega(0.0, px));
    const double rho = scalar(s.density, t, x);
    const double rho_t = s.density.time_partial(t, x)[0];
    const Vec grad_rho = gradient(s.density, t, x);
    const Vec v = s.flow(t, x);
    const Mat g = s.flow.gradient(t, x);
    const Vec v_t = s.flow.time_derivative(t, x);
    const Vec grad_pi = gradient(pressure, t, x);
    const double pi_t = pressure.time_partial(t, x)[0];
    const double f0 = s.temporal_force ? scalar(*s.temporal_force, t, x) : 0.0;
    const double v2 = v.squaredNorm();
    const Vec f = to_covector(force(t, x));
    const Vec grad_kin = 0.5 * v2 * grad_rho + rho * g.transpose() * v;  // grad(1/2 rho v^2)
    const Vec rhs = f - grad_kin - grad_pi + 0.5 * v2 * grad_rho;
    main.add((lhs.tail(n) - rhs).norm(),
             std::max({f.norm(), grad_kin.norm(), grad_pi.norm(), (0.5 * v2 * grad_rho).norm(), lhs.norm()}));
    const double rhs0 = f0 - (0.5 * rho_t * v2 + rho * v.dot(v_t) + pi_t) + 0.5 * v2 * rho_t;
    temporal = std::max(temporal, std::abs(lhs(0) - rhs0));
    orthogonality = std::max(orthogonality, std::abs(lhs.dot(to_vector(v4(0.0, px)))));
    if (s.potential) {
      const Vec grad_h = gradient(*s.potential, t, x) + grad_kin + grad_pi;
      head.add((lhs.tail(n) - (-grad_h + 0.5 * v2 * grad_rho)).norm(), std::max(grad_h.norm(), lhs.norm()));
    }
  }
  main.fill(r);
  r.extras.emplace_back("temporal component", temporal);
  r.extras.emplace_back("i_v(i_p Omega)", orthogonality);
  if (s.potential) {
    r.extras.emplace_back("conservative form -dH + 1/2 v^2 d rho", head.max_residual);
    r.pass = main.ok() && head.ok();
  }
  return MagnusResult{i_p_omega, r};
}

BalanceReport barotropic_check(const FluidState& s, const std::vector<Point>& grid, double t, const Thresholds& th) {
  if (!s.pressure) return not_applicable("barotropic", "no pressure field declared");
  const FormField& pressure = *s.pressure;
  const int n = s.flow.dim();
  BalanceReport r;
  r.check = "barotropic";
  FormField specific(n, 1, [s, pressure](double t, const Point& x) {
    const double rho = s.density(t, x)[0];
    Vec g(x.size());
    for (int i = 0; i < x.size(); ++i) g(i) = pressure.partial(t, x, i)[0] / rho;
    return from_covector(g);
  });
  specific.inherit(s.flow.field());
  const FormField closedness = exterior_derivative(specific);
  Accumulator acc{th};
  double closed = 0.0;
  double law = 0.0;
  for (const auto& x : grid) {
    s.flow.require_outside(x);
    const Vec grad_rho = gradient(s.density, t, x);
    const Vec grad_pi = gradient(pressure, t, x);
    const double w = n >= 2 ? wedge(from_covector(grad_rho), from_covector(grad_pi)).max_abs() : 0.0;
    acc.add(w, grad_rho.norm() * grad_pi.norm());
    if (n >= 2) closed = std::max(closed, closedness(t, x).max_abs());
    if (s.barotropic) {
      law = std::max(law, std::abs(scalar(s.density, t, x) - s.barotropic(scalar(pressure, t, x))));
    }
  }
  acc.fill(r);
  r.extras.emplace_back("d((1/rho) d pi)", closed);
  if (s.barotropic) {
    r.extras.emplace_back("|rho - law(pi)|", law);
    r.pass = r.pass && law <= th.atol + th.rtol * r.max_scale;
  }
  return r;
}

}  // namespace vorhom
