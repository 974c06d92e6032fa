#include "vorhom/vortex.hpp"

#include <cmath>
#include <limits>

namespace vorhom {

namespace {

double relative(double drift, double reference) {
  if (drift == 0.0) return 0.0;
  if (reference == 0.0) return std::numeric_limits<double>::infinity();
  return drift / std::abs(reference);
}

// Sign of the pulled-back integrand at every quadrature node of a 2-chain:
// +1 or -1 when constant, 0 otherwise.
int integrand_sign(const FormField& alpha, const GeometricChain& c, int order, double t) {
  int sign = 0;
  const auto rule = tensor_rule(c.degree(), order);
  for (const auto& [coef, cube] : c.terms()) {
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const auto& table = cube.nodes();
      const bool cached = table && table->order == order;
      const Point p = cached ? table->points[i] : cube(rule[i].s);
      const Mat j = cached ? table->jacobians[i] : cube.jacobian(rule[i].s);
      const double v = coef * evaluate_on(alpha(t, p), j);
      const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
      if (s == 0) return 0;
      if (sign == 0) sign = s;
      if (s != sign) return 0;
    }
  }
  return sign;
}

}  // namespace

double circulation(const VectorFieldSpec& spec, const GeometricChain& c, int order, double t) {
  if (c.degree() != 1) throw DegreeError("circulation is defined on 1-chains");
  return integrate(covelocity(spec), c, order, t);
}

double vorticity_flux(const VectorFieldSpec& spec, const GeometricChain& c, int order, double t) {
  if (c.degree() != 2) throw DegreeError("vorticity flux is defined on 2-chains");
  return integrate(vorticity_form(spec), c, order, t);
}

InvarianceReport homology_invariance_check(const VectorFieldSpec& spec, const GeometricChain& c,
                                           const GeometricChain& c_prime, const std::optional<GeometricChain>& witness,
                                           double tol, int order, double t) {
  if (c.degree() != c_prime.degree()) throw DegreeError("homology invariance compares chains of equal degree");
  if (c.degree() != 1 && c.degree() != 2) throw DegreeError("homology invariance is checked in degree 1 or 2");
  InvarianceReport r;
  r.degree = c.degree();
  const FormField alpha = r.degree == 1 ? covelocity(spec) : vorticity_form(spec);
  r.first = integrate(alpha, c, order, t);
  r.second = integrate(alpha, c_prime, order, t);
  r.residual = std::abs(r.second - r.first);
  r.pass = r.residual < tol * (1.0 + std::max(std::abs(r.first), std::abs(r.second)));
  if (witness) {
    if (witness->degree() != r.degree + 1) throw DegreeError("the witness must have degree one higher");
    r.witness_integral = integrate(exterior_derivative(alpha), *witness, order, t);
    r.witness_stokes_residual = std::abs(integrate(alpha, witness->boundary(), order, t) - (r.second - r.first));
  }
  return r;
}

CirculationReport winding_circulation(const VectorFieldSpec& spec, const GeometricChain& loop, double strength,
                                      const std::string& cycle_id, int order, double t) {
  if (loop.degree() != 1) throw DegreeError("winding circulation needs a 1-chain loop");
  if (!endpoints_cancel(loop, 1e-10)) throw NumericError("loop is not closed within 1e-10");
  CirculationReport r;
  r.cycle_id = cycle_id;
  r.value = circulation(spec, loop, order, t);
  r.strength = strength;
  if (strength != 0.0) {
    const double ratio = r.value / strength;
    r.winding = std::lround(ratio);
    r.integrality_residual = std::abs(ratio - static_cast<double>(*r.winding));
  }
  return r;
}

KelvinReport kelvin_check(const VectorFieldSpec& spec, const GeometricChain& cycle, double t0, double t1,
                          const InvariantOptions& options, double tol) {
  if (cycle.degree() != 1) throw DegreeError("Kelvin's check advects a 1-cycle");
  KelvinReport r;
  r.invariant = invariant_report(covelocity(spec), spec, cycle, t0, t1, options);
  r.invariant.label = "circulation";
  const double c0 = r.invariant.values.front();
  // A loop with zero circulation is compared against the absolute drift.
  r.relative_drift = std::abs(c0) < 1e-12 ? r.invariant.lhs_drift : relative(r.invariant.lhs_drift, c0);
  for (double v : r.invariant.lie_integral) r.max_cycle_lie_integral = std::max(r.max_cycle_lie_integral, std::abs(v));
  r.pass = r.relative_drift < tol && r.max_cycle_lie_integral < 1e-6 * (1.0 + std::abs(c0));
  return r;
}

HelmholtzReport helmholtz_check(const VectorFieldSpec& spec, const GeometricChain& surface, double t0, double t1,
                                const std::vector<Point>& samples, const InvariantOptions& options, double tol,
                                double pointwise_tol) {
  if (surface.degree() != 2) throw DegreeError("Helmholtz's check advects a 2-chain");
  HelmholtzReport r;
  const FormField omega = vorticity_form(spec);
  r.invariant = invariant_report(omega, spec, surface, t0, t1, options);
  r.invariant.label = "vorticity flux";
  const double f0 = r.invariant.values.front();
  // An irrotational flow has zero flux throughout; compare against the form scale then.
  r.relative_drift = std::abs(f0) < 1e-12 ? r.invariant.lhs_drift : relative(r.invariant.lhs_drift, f0);
  bool pointwise_ok = true;
  if (spec.dim() == 3) {
    const MultiVectorField w = vorticity_vector(spec);
    const FormField v = covelocity(spec);
    const FormField lie_omega = lie_derivative(w, omega);
    const FormField lie_v = lie_derivative(w, v) - exterior_derivative(interior_product(w, v));
    double a = 0.0;
    double b = 0.0;
    for (const auto& p : samples) {
      a = std::max(a, lie_omega(t0, p).max_abs());
      b = std::max(b, lie_v(t0, p).max_abs());
    }
    r.max_lie_omega_Omega = a;
    r.max_lie_omega_v = b;
    pointwise_ok = a < pointwise_tol && b < pointwise_tol;
  }
  r.pass = r.relative_drift < tol && pointwise_ok;
  return r;
}

VortexTube vortex_tube(const VectorFieldSpec& spec, const GeometricChain& cap, double length, int steps, int order,
                       double t, double tol) {
  if (spec.dim() != 3) throw DegreeError("vortex tubes live in three dimensions");
  if (cap.degree() != 2) throw DegreeError("a vortex tube cap is a 2-chain");
  if (!(length > 0.0)) throw NumericError("tube length must be positive");
  const MultiVectorField w = vorticity_vector(spec);
  MultiVectorField frozen(3, 1, [w, t](double, const Point& x) { return w(t, x); });
  frozen.inherit(w);
  frozen.set_steady(true);
  const VectorFieldSpec lines(frozen, spec.exclusions());

  double max_w = 0.0;
  for (const auto& [coef, cube] : cap.terms()) {
    for (const auto& node : tensor_rule(2, order)) max_w = std::max(max_w, to_vector(w(t, cube(node.s))).norm());
  }
  if (max_w < 1e-12) throw NumericError("vorticity vanishes on the cap; the tube is degenerate");

  VortexTube tube;
  tube.parameter_length = length / max_w;
  const int sections = steps % 8 == 0 ? 8 : 1;
  const AdvectedChainFamily family =
      advect_chain(cap, lines, 0.0, tube.parameter_length, AdvectionOptions{steps, sections, order});
  const FormField omega = vorticity_form(spec);
  tube.cap_start = family.snapshots().front();
  tube.cap_end = family.snapshots().back();
  tube.tube = swept_chain(family);
  for (const auto& section : family.snapshots()) tube.section_flux.push_back(integrate(omega, section, order, t));
  tube.flux_start = tube.section_flux.front();
  tube.flux_end = tube.section_flux.back();
  tube.half_curl_flux_start = kHalfCurl * tube.flux_start;
  tube.half_curl_flux_end = kHalfCurl * tube.flux_end;
  for (double f : tube.section_flux) {
    tube.relative_spread = std::max(tube.relative_spread, relative(std::abs(f - tube.flux_start), tube.flux_start));
  }
  const double closed = integrate(omega, tube.tube.boundary(), order, t);
  tube.lateral_flux = closed - (tube.flux_end - tube.flux_start);
  const int s0 = integrand_sign(omega, tube.cap_start, order, t);
  const int s1 = integrand_sign(omega, tube.cap_end, order, t);
  tube.transverse = s0 != 0 && s0 == s1;
  tube.pass = tube.transverse && tube.relative_spread < tol;
  return tube;
}

}  // namespace vorhom
