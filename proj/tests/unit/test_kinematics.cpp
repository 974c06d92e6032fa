#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vorhom/kinematics.hpp"

using namespace vorhom;

namespace {

Point pt(double x, double y) { return (Vec(2) << x, y).finished(); }
Point pt(double x, double y, double z) { return (Vec(3) << x, y, z).finished(); }

VectorFieldSpec rotation(double w) {
  return VectorFieldSpec::from_functions(2, [w](double, const Point& x) { return Vec((Vec(2) << -w * x(1), w * x(0)).finished()); });
}

// v = (t y, 0): unsteady shear.
VectorFieldSpec growing_shear() {
  return VectorFieldSpec::from_functions(
      2, [](double t, const Point& x) { return Vec((Vec(2) << t * x(1), 0.0).finished()); }, {}, false);
}

}  // namespace

TEST_CASE("velocity gradient decomposes into strain rate and spin") {
  oracle::Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.integer(2, 3);
    const auto polys = oracle::random_polys(rng, n, n);
    const VectorFieldSpec u = oracle::polynomial_flow(polys);
    const Point x = rng.point(n, -1, 1);
    const VelocityGradient g = velocity_gradient(u, 0.0, x);
    CHECK((g.strain_rate + g.spin - 2.0 * g.gradient).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(g.deviatoric.trace()) < 1e-12);
    double div = 0.0;
    for (int i = 0; i < n; ++i) {
      div += polys[static_cast<std::size_t>(i)].partial(x, i);
      for (int j = 0; j < n; ++j) CHECK(g.gradient(i, j) == doctest::Approx(polys[static_cast<std::size_t>(i)].partial(x, j)));
    }
    CHECK(compressibility(u, 0.0, x) == doctest::Approx(div));
    CHECK(g.trace_rate == doctest::Approx(div / n));
  }
}

TEST_CASE("vorticity of rigid rotation is twice the angular velocity") {
  const VectorFieldSpec u = rotation(1.5);
  CHECK(vorticity_scalar(u)(0.0, pt(0.3, -0.2))[0] == doctest::Approx(3.0));
  CHECK(vorticity_form(u)(0.0, pt(0.3, -0.2))[0] == doctest::Approx(3.0));
  const VectorFieldSpec u3 = VectorFieldSpec::from_functions(
      3, [](double, const Point& x) { return Vec((Vec(3) << -x(1), x(0), 0.0).finished()); });
  const Vec w = to_vector(vorticity_vector(u3)(0.0, pt(0.1, 0.2, 0.3)));
  CHECK(w(0) == doctest::Approx(0.0));
  CHECK(w(1) == doctest::Approx(0.0));
  CHECK(w(2) == doctest::Approx(2.0));
  CHECK(to_vector(half_curl_vorticity(u3)(0.0, pt(0.1, 0.2, 0.3)))(2) == doctest::Approx(kHalfCurl * 2.0));
}

TEST_CASE("vorticity vector is the curl of a random polynomial flow") {
  oracle::Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = oracle::random_polys(rng, 3, 3);
    const Point x = rng.point(3, -1, 1);
    const Vec w = to_vector(vorticity_vector(oracle::polynomial_flow(p))(0.0, x));
    CHECK(w(0) == doctest::Approx(p[2].partial(x, 1) - p[1].partial(x, 2)));
    CHECK(w(1) == doctest::Approx(p[0].partial(x, 2) - p[2].partial(x, 0)));
    CHECK(w(2) == doctest::Approx(p[1].partial(x, 0) - p[0].partial(x, 1)));
  }
}

TEST_CASE("convective split of rigid rotation balances centripetal acceleration") {
  const VectorFieldSpec u = rotation(2.0);
  const Point x = pt(0.4, -0.3);
  const ConvectiveSplit s = convective_split(u, 0.0, x);
  CHECK(s.convected(0) == doctest::Approx(-4.0 * x(0)));
  CHECK(s.convected(1) == doctest::Approx(-4.0 * x(1)));
  CHECK(s.half_grad_v2(0) == doctest::Approx(4.0 * x(0)));
  CHECK(s.spatial.norm() < 1e-12);
  // The Lie form agrees with the term-by-term split.
  const FormValue a = convective_acceleration(u)(0.0, pt(0.0, 0.4, -0.3));
  CHECK(a.at(0b010u) == doctest::Approx(s.spatial(0)));
  CHECK(a.at(0b100u) == doctest::Approx(s.spatial(1)));
}

TEST_CASE("spacetime covelocity and vorticity of an unsteady shear") {
  const VectorFieldSpec u = growing_shear();
  const double t = 0.7;
  const Point xt = pt(t, 0.2, 0.5);
  const FormValue c = spacetime_covelocity(u)(0.0, xt);
  CHECK(c.at(0b001u) == doctest::Approx(1.0));
  CHECK(c.at(0b010u) == doctest::Approx(t * 0.5));
  CHECK(c.at(0b100u) == doctest::Approx(0.0));
  const FormValue big = spacetime_vorticity(u)(0.0, xt);
  CHECK(big.at(0b011u) == doctest::Approx(0.5));  // dt^dx: d_t v_x = y
  CHECK(big.at(0b110u) == doctest::Approx(-t));   // dx^dy: -d_y v_x
  CHECK(to_vector(spacetime_velocity(u)(0.0, xt))(0) == doctest::Approx(1.0));
}

TEST_CASE("incompressibility is judged on samples") {
  const std::vector<Point> samples{pt(0.1, 0.2), pt(-0.5, 0.7)};
  CHECK(is_incompressible(rotation(1.0), samples));
  const VectorFieldSpec source =
      VectorFieldSpec::from_functions(2, [](double, const Point& x) { return Vec(x); });
  CHECK_FALSE(is_incompressible(source, samples));
}

TEST_CASE("planar flows are completely integrable") {
  oracle::Rng rng(43);
  std::vector<Point> samples;
  for (int i = 0; i < 20; ++i) samples.push_back(rng.point(2, -1, 1));
  for (int trial = 0; trial < 20; ++trial) {
    const FrobeniusReport r = frobenius_classify(oracle::polynomial_flow(oracle::random_polys(rng, 2, 2)), samples);
    CHECK(r.completely_integrable);
    CHECK(r.vanishes[3]);
  }
}

TEST_CASE("gradient flows have vanishing I1 and contact forms nonvanishing I2") {
  oracle::Rng rng(44);
  std::vector<Point> samples;
  for (int i = 0; i < 20; ++i) samples.push_back(rng.point(3, -1, 1));
  // v = grad(x^2 y + z^3 - x z).
  const VectorFieldSpec grad = VectorFieldSpec::from_functions(3, [](double, const Point& x) {
    return Vec((Vec(3) << 2 * x(0) * x(1) - x(2), x(0) * x(0), 3 * x(2) * x(2) - x(0)).finished());
  });
  const FrobeniusReport g = frobenius_classify(grad, samples);
  CHECK(g.vanishes[1]);
  CHECK(g.first_vanishing_index == 1);
  CHECK(g.surface_orthogonal);
  // alpha = dz - y dx: alpha ^ d alpha = dx^dy^dz.
  const FormField contact(3, 1, [](double, const Point& x) {
    FormValue v(3, 1);
    v[0] = -x(1);
    v[2] = 1.0;
    return v;
  });
  const FrobeniusReport c = frobenius_classify(contact, samples);
  CHECK_FALSE(c.vanishes[2]);
  CHECK(c.max_norm[2] == doctest::Approx(1.0));
  CHECK_FALSE(c.surface_orthogonal);
}

TEST_CASE("integrability forms vanish from the first vanishing index on") {
  oracle::Rng rng(45);
  std::vector<Point> samples;
  for (int i = 0; i < 10; ++i) samples.push_back(rng.point(3, -1, 1));
  for (int trial = 0; trial < 30; ++trial) {
    const FrobeniusReport r = frobenius_classify(oracle::polynomial_flow(oracle::random_polys(rng, 3, 3)), samples);
    if (r.first_vanishing_index < 0) continue;
    for (int k = r.first_vanishing_index; k < 5; ++k) CHECK(r.vanishes[static_cast<std::size_t>(k)]);
  }
}
