#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "vorhom/integrate.hpp"
#include "vorhom/kinematics.hpp"

using namespace vorhom;
using std::numbers::pi;

namespace {

Point pt(double x, double y) { return (Vec(2) << x, y).finished(); }
Point pt(double x, double y, double z) { return (Vec(3) << x, y, z).finished(); }

// The angle form (-y dx + x dy) / (x^2 + y^2) with the origin excluded.
FormField angle_form() {
  FormField f(2, 1, [](double, const Point& x) {
    const double r2 = x(0) * x(0) + x(1) * x(1);
    FormValue v(2, 1);
    v[0] = -x(1) / r2;
    v[1] = x(0) / r2;
    return v;
  });
  f.set_steady();
  f.set_exclusions({Exclusion::at_point(pt(0.0, 0.0), 0.1)});
  return f;
}

VectorFieldSpec point_vortex() {
  return VectorFieldSpec::from_functions(
      2,
      [](double, const Point& x) {
        const double r2 = x.squaredNorm();
        return Vec((Vec(2) << -x(1) / r2, x(0) / r2).finished());
      },
      {}, true, {Exclusion::at_point(pt(0.0, 0.0), 0.25)});
}

VectorFieldSpec rotation() {
  return VectorFieldSpec::from_functions(
      2, [](double, const Point& x) { return Vec((Vec(2) << -x(1), x(0)).finished()); },
      [](double, const Point&) { return Mat((Mat(2, 2) << 0.0, -1.0, 1.0, 0.0).finished()); });
}

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials of degree 2n - 1 exactly") {
  for (int n = 1; n <= 16; ++n) {
    const GaussRule& rule = gauss_legendre(n);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], p);
      CHECK(s == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
    }
  }
  CHECK(tensor_rule(2, 3).size() == 9);
  CHECK(tensor_rule(0, 5).size() == 1);
}

TEST_CASE("face signs make the geometric boundary of a boundary cancel") {
  CHECK(SingularCube::face_sign(0, 0) == -1);
  CHECK(SingularCube::face_sign(0, 1) == 1);
  CHECK(SingularCube::face_sign(1, 0) == 1);
  CHECK(SingularCube::face_sign(1, 1) == -1);
  const GeometricChain cube = box(pt(0, 0, 0), pt(1, 2, 3));
  CHECK(cube.boundary().size() == 6);
  CHECK(is_geometric_cycle(cube.boundary()));
  CHECK(is_geometric_cycle(disc(pt(0, 0), 1.0).boundary()));
  CHECK(endpoints_cancel(circle(pt(0.3, 0.1), 0.7)));
  CHECK_FALSE(endpoints_cancel(GeometricChain(segment(pt(0, 0), pt(1, 0)))));
  // A square's boundary runs counter-clockwise: the integral of x dy is its area.
  const GeometricChain sq(parallelogram(pt(0, 0), pt(2, 0), pt(0, 3)));
  const FormField f(2, 1, [](double, const Point& x) {
    FormValue v(2, 1);
    v[1] = x(0);
    return v;
  });
  CHECK(integrate(f, sq.boundary()) == doctest::Approx(6.0));
}

TEST_CASE("integrals of 0-forms over segments obey the fundamental theorem") {
  oracle::Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto polys = oracle::random_polys(rng, 2, 1);
    const FormField f = oracle::polynomial_form(polys, 2, 0);
    const Point a = rng.point(2, -1, 1);
    const Point b = rng.point(2, -1, 1);
    const double got = integrate(exterior_derivative(f), GeometricChain(segment(a, b)));
    CHECK(got == doctest::Approx(polys[0].value(b) - polys[0].value(a)).epsilon(1e-12));
  }
}

TEST_CASE("Stokes holds on random polynomial forms and parallelepipeds") {
  oracle::Rng rng(32);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = rng.integer(2, 3);
    const int k = rng.integer(1, n);  // cube degree
    const auto polys = oracle::random_polys(rng, n, binomial(n, k - 1));
    const FormField alpha = oracle::polynomial_form(polys, n, k - 1);
    const Point o = rng.point(n, -1, 0);
    SingularCube cube;
    if (k == 1) {
      cube = segment(o, rng.point(n, 0, 1));
    } else if (k == 2) {
      cube = parallelogram(o, rng.point(n, 0.2, 1), rng.point(n, -1, 0.2));
    } else {
      cube = parallelepiped(o, pt(1, 0.1, 0), pt(0.2, 1, 0.1), pt(0, 0.3, 1));
    }
    const StokesResult r = stokes_check(alpha, GeometricChain(cube));
    CHECK(r.residual < 1e-9 * (1.0 + std::abs(r.interior_integral)));
  }
}

TEST_CASE("the angle form winds 2 pi per turn and is closed but not exact") {
  const FormField theta = angle_form();
  CHECK(std::abs(integrate(theta, circle(pt(0, 0), 1.0)) - 2.0 * pi) < 1e-8);
  CHECK(std::abs(integrate(theta, circle(pt(0, 0), 1.0, 2)) - 4.0 * pi) < 1e-7);
  CHECK(std::abs(integrate(theta, circle(pt(2, 0), 0.5))) < 1e-10);
  const DerhamResult d = derham_classify(
      theta, {{"loop", circle(pt(0, 0), 1.0), DerhamProbe::Kind::cycle},
              {"disc rim", disc(pt(1.5, 0.5), 0.4).boundary(), DerhamProbe::Kind::boundary}});
  CHECK(d.closed);
  CHECK_FALSE(d.exact);
  FormValue c(2, 1);
  c[0] = 1.0;
  const DerhamResult e = derham_classify(FormField::constant(c), {{"loop", circle(pt(0, 0), 1.0), DerhamProbe::Kind::cycle}});
  CHECK(e.exact);
}

TEST_CASE("advected chains start at the base chain and sweep a cylinder") {
  const VectorFieldSpec u = rotation();
  const GeometricChain c(segment(pt(0.5, 0), pt(1.0, 0)));
  const AdvectedChainFamily fam = advect_chain(c, u, 0.0, pi / 2, {64, 16, 8});
  REQUIRE(fam.snapshots().size() == 17);
  const auto& first = fam.snapshots().front().terms().front().second;
  const auto& last = fam.snapshots().back().terms().front().second;
  const Vec s0 = Vec::Constant(1, 0.0);
  CHECK((first(s0) - pt(0.5, 0)).norm() < 1e-12);
  CHECK((last(s0) - pt(0, 0.5)).norm() < 1e-8);
  // The swept quarter annulus has area (1 - 0.25) pi / 4.
  const GeometricChain swept = swept_chain(fam);
  FormValue area(2, 2);
  area[0] = 1.0;
  CHECK(std::abs(integrate(FormField::constant(area), swept)) == doctest::Approx(0.75 * pi / 4).epsilon(1e-8));
  CHECK(is_geometric_cycle(swept.boundary()));
}

TEST_CASE("advection refuses to enter an exclusion zone") {
  const VectorFieldSpec inward = VectorFieldSpec::from_functions(
      2, [](double, const Point& x) { return Vec(-x); }, {}, true, {Exclusion::at_point(pt(0, 0), 0.3)});
  CHECK_THROWS_AS(advect_chain(GeometricChain(segment(pt(1, 0), pt(1, 1))), inward, 0.0, 5.0), AdvectionError);
}

TEST_CASE("series differentiation is exact on cubics") {
  std::vector<double> v;
  const double dt = 0.1;
  for (int i = 0; i <= 20; ++i) {
    const double t = i * dt;
    v.push_back(t * t * t - 2.0 * t);
  }
  const auto d = differentiate_series(v, dt);
  for (int i = 0; i <= 20; ++i) {
    const double t = i * dt;
    CHECK(d[static_cast<std::size_t>(i)] == doctest::Approx(3.0 * t * t - 2.0).epsilon(1e-10));
  }
}

TEST_CASE("area is an absolute invariant of rigid rotation") {
  FormValue area(2, 2);
  area[0] = 1.0;
  InvariantOptions opt;
  opt.advection = {128, 32, 8};
  const InvariantReport r = invariant_report(FormField::constant(area), rotation(), disc(pt(0.2, 0.1), 0.5), 0.0, 1.0, opt);
  CHECK(r.classification == InvariantClass::absolute);
  CHECK(r.rate_ok);
  CHECK(r.values.front() == doctest::Approx(0.25 * pi));
}

TEST_CASE("covelocity of a point vortex is a relative invariant") {
  const VectorFieldSpec u = point_vortex();
  InvariantOptions opt;
  opt.advection = {256, 64, 8};
  const GeometricChain loop = circle(pt(0, 0), 1.0);
  opt.probes = {{"loop", loop}, {"chord", GeometricChain(segment(pt(0.6, 0), pt(1.0, 0.5)))}};
  const InvariantReport r = invariant_report(covelocity(u), u, loop, 0.0, 1.0, opt);
  CHECK(r.classification == InvariantClass::relative);
  CHECK(r.rate_residual < 1e-5);
  CHECK(r.lhs_drift < 1e-9);
}
