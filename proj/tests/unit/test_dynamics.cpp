#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vorhom/dynamics.hpp"

using namespace vorhom;
using std::numbers::pi;

namespace {

Point pt(double x, double y) { return (Vec(2) << x, y).finished(); }

FormField steady(FormField f) {
  f.set_steady();
  return f;
}

FormField constant_scalar(int n, double c) {
  return steady(scalar_field(n, [c](double, const Point&) { return c; }, [n](double, const Point&) { return Vec(Vec::Zero(n)); }));
}

constexpr double kG = 9.81;

FluidState hydrostatic() {
  FluidState s;
  s.flow = VectorFieldSpec::zero(3);
  s.density = constant_scalar(3, 1.0);
  s.pressure = scalar_field(3, [](double, const Point& x) { return 1.0 - kG * x(2); });
  s.potential = scalar_field(3, [](double, const Point& x) { return kG * x(2); });
  FormValue f(3, 1);
  f[2] = -kG;
  s.force = FormField::constant(f);
  return s;
}

FluidState rigid_rotation(double w) {
  FluidState s;
  s.flow = VectorFieldSpec::from_functions(2, [w](double, const Point& x) { return Vec((Vec(2) << -w * x(1), w * x(0)).finished()); });
  s.density = constant_scalar(2, 1.0);
  s.pressure = steady(scalar_field(2, [w](double, const Point& x) { return 1.0 + 0.5 * w * w * x.squaredNorm(); }));
  return s;
}

FluidState point_vortex() {
  FluidState s;
  s.flow = VectorFieldSpec::from_functions(
      2,
      [](double, const Point& x) {
        const double r2 = x.squaredNorm();
        return Vec((Vec(2) << -x(1) / r2, x(0) / r2).finished());
      },
      {}, true, {Exclusion::at_point(pt(0, 0), 0.25)});
  s.density = constant_scalar(2, 1.0);
  s.pressure = steady(scalar_field(2, [](double, const Point& x) { return 1.0 - 0.5 / x.squaredNorm(); }));
  return s;
}

// rho = exp(-t), v = x / 3: uniform expansion that conserves mass.
FluidState expansion() {
  FluidState s;
  s.flow = VectorFieldSpec::from_functions(3, [](double, const Point& x) { return Vec(x / 3.0); });
  s.density = scalar_field(3, [](double t, const Point&) { return std::exp(-t); });
  return s;
}

std::vector<Point> grid(int n, const ExclusionSet& zones = {}) {
  return uniform_grid(Point::Constant(n, -1.0), Point::Constant(n, 1.0), n == 2 ? 9 : 5, zones, 0.05);
}

}  // namespace

TEST_CASE("uniform grids skip exclusion zones") {
  const ExclusionSet zones{Exclusion::at_point(pt(0, 0), 0.3)};
  const auto g = uniform_grid(pt(-1, -1), pt(1, 1), 5, zones, 0.1);
  CHECK(g.size() == 24);
  for (const auto& p : g) CHECK(p.norm() >= 0.4);
  CHECK(uniform_grid(pt(-1, -1), pt(1, 1), 1).front().norm() == 0.0);
}

TEST_CASE("hydrostatic state balances every law") {
  const FluidState s = hydrostatic();
  const auto g = grid(3);
  CHECK(euler_residual(s, g).pass);
  CHECK(power_balance_residual(s, g).pass);
  CHECK(continuity_residual(s, g).pass);
  CHECK(mass_balance_cochain(s, box(Point::Constant(3, -0.5), Point::Constant(3, 0.5))).pass);
  CHECK(barotropic_check(s, g).pass);
  CHECK(magnus_force(s, g).report.pass);
}

TEST_CASE("rigid rotation with its centripetal pressure balances") {
  const FluidState s = rigid_rotation(1.3);
  const auto g = grid(2);
  const BalanceReport e = euler_residual(s, g);
  CHECK(e.pass);
  CHECK(e.worst_ratio <= 1.0);
  CHECK(power_balance_residual(s, g).pass);
  CHECK(continuity_residual(s, g).pass);
  CHECK(magnus_force(s, g).report.pass);
  CHECK(barotropic_check(s, g).pass);
  // Steady, incompressible and force-free: the head is constant on each circular streamline.
  CHECK(bernoulli_check(s, {pt(0.5, 0.0), pt(0.0, 0.8)}, 1.0).pass);
}

TEST_CASE("a wrong pressure breaks the Euler balance") {
  FluidState s = rigid_rotation(1.0);
  s.pressure = constant_scalar(2, 1.0);
  const BalanceReport e = euler_residual(s, grid(2));
  CHECK_FALSE(e.pass);
  CHECK(e.worst_ratio > 1.0);
}

TEST_CASE("Bernoulli head is constant along point vortex streamlines") {
  const BalanceReport b = bernoulli_check(point_vortex(), {pt(0.5, 0.0), pt(1.0, 0.3), pt(-0.7, 0.6)}, 1.0);
  CHECK(b.applicable);
  CHECK(b.pass);
  for (const auto& [label, spread] : b.entries) {
    CAPTURE(label);
    CHECK(spread < 1e-6);
  }
}

TEST_CASE("Bernoulli is not applicable to unsteady flow") {
  FluidState s = rigid_rotation(1.0);
  s.flow = VectorFieldSpec::from_functions(
      2, [](double t, const Point& x) { return Vec((Vec(2) << -t * x(1), t * x(0)).finished()); }, {}, false);
  CHECK_FALSE(bernoulli_check(s, {pt(0.5, 0.0)}, 1.0).applicable);
}

TEST_CASE("power balance is not applicable when the pressure changes in time") {
  FluidState s = rigid_rotation(1.0);
  s.pressure = scalar_field(2, [](double t, const Point& x) { return t + 0.5 * x.squaredNorm(); });
  CHECK_FALSE(power_balance_residual(s, grid(2)).applicable);
}

TEST_CASE("uniform expansion conserves mass") {
  const FluidState s = expansion();
  CHECK(continuity_residual(s, grid(3), 0.3).pass);
  const BalanceReport m = mass_balance_cochain(s, box(Point::Constant(3, -0.4), Point::Constant(3, 0.6)), 0.3);
  CHECK(m.pass);
  // A density that does not decay violates continuity.
  FluidState bad = s;
  bad.density = constant_scalar(3, 1.0);
  CHECK_FALSE(continuity_residual(bad, grid(3), 0.3).pass);
}

TEST_CASE("barotropic wedge test accepts rho(pi) and rejects stratification") {
  FluidState s = rigid_rotation(1.0);
  // rho = 2 pi - 1 is a function of the pressure.
  s.density = scalar_field(2, [](double, const Point& x) { return 1.0 + x.squaredNorm(); });
  s.barotropic = [](double p) { return 2.0 * p - 1.0; };
  const BalanceReport ok = barotropic_check(s, grid(2));
  CHECK(ok.pass);
  s.density = scalar_field(2, [](double, const Point& x) { return 1.0 + 0.1 * x(1) + 0.1 * x(0) * x(0); });
  s.barotropic = {};
  CHECK_FALSE(barotropic_check(s, grid(2)).pass);
}
