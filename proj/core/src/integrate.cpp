#include "vorhom/integrate.hpp"

namespace vorhom {

namespace {

double integrate_cube(const FormField& alpha, const SingularCube& cube, int order, double t) {
  if (cube.degree() != alpha.degree()) {
    throw DegreeError("cannot integrate a " + std::to_string(alpha.degree()) + "-form over a " +
                      std::to_string(cube.degree()) + "-cube");
  }
  if (cube.dim() != alpha.dim()) throw DegreeError("form and cube live in spaces of different dimension");
  auto sample = [&](const Point& p, const Mat& j) {
    if (find_exclusion(alpha.exclusions(), p, alpha.exclusion_offset()) != nullptr) {
      throw NumericError("quadrature node inside an exclusion zone" +
                         (cube.label().empty() ? std::string() : " (cube " + cube.label() + ")"));
    }
    return evaluate_on(alpha(t, p), j);
  };
  const auto rule = tensor_rule(cube.degree(), order);
  const auto& table = cube.nodes();
  double sum = 0.0;
  if (table && table->order == order && table->points.size() == rule.size()) {
    for (std::size_t i = 0; i < rule.size(); ++i) sum += rule[i].weight * sample(table->points[i], table->jacobians[i]);
    return sum;
  }
  for (const auto& node : rule) sum += node.weight * sample(cube(node.s), cube.jacobian(node.s));
  return sum;
}

}  // namespace

double integrate(const FormField& alpha, const GeometricChain& c, int order, double t) {
  if (order < 2) throw NumericError("quadrature order must be at least 2");
  if (c.empty()) return 0.0;
  if (c.degree() != alpha.degree()) {
    throw DegreeError("cannot integrate a " + std::to_string(alpha.degree()) + "-form over a " +
                      std::to_string(c.degree()) + "-chain");
  }
  if (alpha.identically_zero()) return 0.0;
  double sum = 0.0;
  for (const auto& [coef, cube] : c.terms()) sum += coef * integrate_cube(alpha, cube, order, t);
  return sum;
}

StokesResult stokes_check(const FormField& alpha, const GeometricChain& c, int order, double t) {
  if (c.degree() != alpha.degree() + 1) throw DegreeError("Stokes check needs a (k+1)-chain for a k-form");
  StokesResult r;
  r.boundary_integral = integrate(alpha, c.boundary(), order, t);
  r.interior_integral = integrate(exterior_derivative(alpha), c, order, t);
  r.residual = std::abs(r.boundary_integral - r.interior_integral);
  return r;
}

double stokes_residual(const FormField& alpha, const GeometricChain& c, int order, double t) {
  return stokes_check(alpha, c, order, t).residual;
}

bool is_geometric_cycle(const GeometricChain& c, double tol) {
  if (c.degree() == 0) return false;
  if (c.empty()) return true;
  if (c.degree() == 1) return endpoints_cancel(c, tol);
  const int n = c.dim();
  const int k = c.degree() - 1;
  const GeometricChain b = c.boundary();
  // Generic smooth coefficients times each basis (k-1)-form.
  const auto masks = basis_masks(n, k);
  for (std::size_t m = 0; m < masks.size(); ++m) {
    for (int variant = 0; variant < 2; ++variant) {
      FormField probe(n, k, [n, k, m, variant](double, const Point& x) {
        FormValue v(n, k);
        double f = 1.0;
        if (variant == 1) {
          f = 0.37;
          for (int i = 0; i < n; ++i) f += (0.31 + 0.17 * i) * x(i) + (0.23 - 0.11 * i) * x(i) * x(i);
        }
        v[static_cast<int>(m)] = f;
        return v;
      });
      double total = 0.0;
      double scale = 0.0;
      for (const auto& [coef, cube] : b.terms()) {
        const double part = coef * integrate(probe, GeometricChain(cube), kDefaultQuadratureOrder);
        total += part;
        scale += std::abs(part);
      }
      if (std::abs(total) > tol * (1.0 + scale)) return false;
    }
  }
  return true;
}

DerhamResult derham_classify(const FormField& alpha, const std::vector<DerhamProbe>& probes, double tol, int order,
                             double t) {
  DerhamResult r;
  if (probes.empty()) {
    r.inconclusive = true;
    return r;
  }
  bool boundaries_vanish = true;
  bool cycles_vanish = true;
  for (const auto& p : probes) {
    const double v = integrate(alpha, p.chain, order, t);
    r.integrals.emplace_back(p.label, v);
    const bool small = std::abs(v) < tol;
    if (p.kind == DerhamProbe::Kind::boundary) {
      boundaries_vanish = boundaries_vanish && small;
    } else {
      cycles_vanish = cycles_vanish && small;
    }
  }
  r.closed = boundaries_vanish;
  r.exact = boundaries_vanish && cycles_vanish;
  return r;
}

}  // namespace vorhom
