#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "vorhom/forms.hpp"

using namespace vorhom;

namespace {

FormValue random_value(oracle::Rng& rng, int n, int k) {
  FormValue v(n, k);
  for (int i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1.0, 1.0);
  return v;
}

MultiVectorValue random_multivector(oracle::Rng& rng, int n, int k) {
  MultiVectorValue v(n, k);
  for (int i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1.0, 1.0);
  return v;
}

MultiVectorField polynomial_multivector(const std::vector<oracle::Poly>& comps, int n, int k, bool analytic) {
  auto eval = [comps, n, k](double, const Point& x) {
    MultiVectorValue v(n, k);
    for (std::size_t i = 0; i < comps.size(); ++i) v[static_cast<int>(i)] = comps[i].value(x);
    return v;
  };
  MultiVectorField::PartialFn partial;
  if (analytic) {
    partial = [comps, n, k](double, const Point& x, int axis) {
      MultiVectorValue v(n, k);
      for (std::size_t i = 0; i < comps.size(); ++i) v[static_cast<int>(i)] = comps[i].partial(x, axis);
      return v;
    };
  }
  MultiVectorField f(n, k, eval, partial);
  f.set_steady();
  return f;
}

double distance(const FormValue& a, const FormValue& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("basis order is lexicographic") {
  CHECK(basis_masks(3, 2).size() == 3);
  CHECK(basis_masks(3, 2)[0] == 0b011u);
  CHECK(basis_masks(3, 2)[1] == 0b101u);
  CHECK(basis_masks(3, 2)[2] == 0b110u);
  CHECK(basis_label(3, 0b101u, true) == "dx^dz");
  CHECK(binomial(4, 2) == 6);
  CHECK(merge_sign(0b010u, 0b001u) == -1);
  CHECK(merge_sign(0b001u, 0b010u) == 1);
}

TEST_CASE("wedge is graded-commutative and associative") {
  oracle::Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.integer(2, 4);
    const int p = rng.integer(0, n);
    const int q = rng.integer(0, n - p);
    const int r = rng.integer(0, n - p - q);
    const FormValue a = random_value(rng, n, p);
    const FormValue b = random_value(rng, n, q);
    const FormValue c = random_value(rng, n, r);
    const double sign = (p * q) % 2 == 0 ? 1.0 : -1.0;
    CHECK(distance(wedge(a, b), sign * wedge(b, a)) < 1e-14);
    CHECK(distance(wedge(wedge(a, b), c), wedge(a, wedge(b, c))) < 1e-14);
  }
}

TEST_CASE("wedge of covectors is the determinant on the vectors") {
  oracle::Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.integer(2, 4);
    const int k = rng.integer(1, n);
    Mat cov(n, k);
    Mat vec(n, k);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < k; ++j) {
        cov(i, j) = rng.uniform(-1.0, 1.0);
        vec(i, j) = rng.uniform(-1.0, 1.0);
      }
    }
    FormValue w = from_covector(cov.col(0));
    for (int j = 1; j < k; ++j) w = wedge(w, from_covector(cov.col(j)));
    const Eigen::MatrixXd gram = cov.transpose() * vec;
    CHECK(evaluate_on(w, vec) == doctest::Approx(gram.determinant()).epsilon(1e-12));
  }
}

TEST_CASE("interior product is a graded derivation") {
  oracle::Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.integer(2, 4);
    const int p = rng.integer(1, n - 1);
    const int q = rng.integer(1, n - p);
    const FormValue a = random_value(rng, n, p);
    const FormValue b = random_value(rng, n, q);
    const MultiVectorValue x = random_multivector(rng, n, 1);
    const double sign = p % 2 == 0 ? 1.0 : -1.0;
    const FormValue lhs = interior(x, wedge(a, b));
    const FormValue rhs = wedge(interior(x, a), b) + sign * wedge(a, interior(x, b));
    CHECK(distance(lhs, rhs) < 1e-13);
  }
}

TEST_CASE("sharp contracts the volume element") {
  // In 3D, #v = v^x dy^dz - v^y dx^dz + v^z dx^dy.
  const Vec v = (Vec(3) << 0.3, -1.2, 2.0).finished();
  const FormValue s = sharp(from_vector(v));
  CHECK(s[0] == doctest::Approx(2.0));
  CHECK(s[1] == doctest::Approx(1.2));
  CHECK(s[2] == doctest::Approx(0.3));
  oracle::Rng rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.integer(1, 4);
    const int k = rng.integer(0, n);
    const MultiVectorValue a = random_multivector(rng, n, k);
    const double rho = rng.uniform(0.5, 2.0);
    CHECK((sharp_inverse(sharp(a, rho), rho) - a).max_abs() < 1e-14);
  }
}

TEST_CASE("exterior derivative of a 0-form is its gradient") {
  oracle::Rng rng(25);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.integer(1, 4);
    const auto polys = oracle::random_polys(rng, n, 1);
    const FormField df = exterior_derivative(oracle::fd_form(polys, n, 0));
    const Point x = rng.point(n, -1.0, 1.0);
    const FormValue got = df(0.0, x);
    for (int i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(polys[0].partial(x, i)).epsilon(1e-8));
  }
}

TEST_CASE("d squared vanishes on random polynomial forms") {
  oracle::Rng rng(26);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.integer(2, 4);
    const int k = rng.integer(0, n - 2);
    const auto polys = oracle::random_polys(rng, n, binomial(n, k));
    const Point x = rng.point(n, -1.0, 1.0);
    CHECK(exterior_derivative(exterior_derivative(oracle::polynomial_form(polys, n, k)))(0.0, x).max_abs() < 1e-9);
    CHECK(exterior_derivative(exterior_derivative(oracle::fd_form(polys, n, k)))(0.0, x).max_abs() < 1e-6);
  }
}

TEST_CASE("divergence of a vector field is the trace of its gradient") {
  oracle::Rng rng(27);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.integer(1, 4);
    const auto polys = oracle::random_polys(rng, n, n);
    const Point x = rng.point(n, -1.0, 1.0);
    double trace = 0.0;
    for (int i = 0; i < n; ++i) trace += polys[static_cast<std::size_t>(i)].partial(x, i);
    for (bool analytic : {true, false}) {
      const MultiVectorValue d = divergence(polynomial_multivector(polys, n, 1, analytic))(0.0, x);
      CHECK(d.degree() == 0);
      CHECK(d[0] == doctest::Approx(trace).epsilon(1e-8));
    }
  }
}

TEST_CASE("div of div vanishes and sharp intertwines div with d") {
  oracle::Rng rng(28);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.integer(2, 4);
    const int k = rng.integer(2, n);
    const auto polys = oracle::random_polys(rng, n, binomial(n, k));
    const MultiVectorField a = polynomial_multivector(polys, n, k, false);
    const Point x = rng.point(n, -1.0, 1.0);
    CHECK(divergence(divergence(a))(0.0, x).max_abs() < 1e-4);
    CHECK(distance(sharp(divergence(a))(0.0, x), exterior_derivative(sharp(a))(0.0, x)) < 1e-6);
  }
}

TEST_CASE("Cartan formula matches the flow pullback") {
  oracle::Rng rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.integer(2, 3);
    const int k = rng.integer(0, n);
    const auto u = oracle::polynomial_flow(oracle::random_polys(rng, n, n, 0.5));
    const FormField alpha = oracle::polynomial_form(oracle::random_polys(rng, n, binomial(n, k)), n, k);
    const Point x = rng.point(n, -0.8, 0.8);
    const FormValue cartan = lie_derivative(u.field(), alpha)(0.0, x);
    CHECK(distance(cartan, oracle::pullback_rate(alpha, u, x)) < 1e-4);
  }
}

TEST_CASE("finite differences stay outside exclusion zones") {
  const ExclusionSet zones{Exclusion::at_point((Vec(2) << 0.0, 0.0).finished(), 0.5)};
  const FormField f = scalar_field(2, [](double, const Point& x) { return std::sin(x(0)) * std::exp(x(1)); });
  FormField g = f;
  g.set_exclusions(zones);
  // Just outside the zone the central stencil would cross it.
  const Point x = (Vec(2) << 0.50005, 0.0).finished();
  const FormValue d = exterior_derivative(g)(0.0, x);
  CHECK(d[0] == doctest::Approx(std::cos(x(0))).epsilon(1e-9));
  CHECK(d[1] == doctest::Approx(std::sin(x(0))).epsilon(1e-9));
  CHECK(zones.front().contains((Vec(2) << 0.1, 0.1).finished()));
  CHECK(find_exclusion(zones, (Vec(2) << 1.0, 0.0).finished()) == nullptr);
}

TEST_CASE("metric lowering and raising are inverse") {
  const Metric g(2, [](const Point& x) {
    Mat m(2, 2);
    m << 2.0 + x(0) * x(0), 0.3, 0.3, 1.0;
    return m;
  });
  const MultiVectorField v = MultiVectorField::constant(from_vector((Vec(2) << 1.0, -2.0).finished()));
  const Point x = (Vec(2) << 0.5, 0.1).finished();
  const FormValue low = lower(v, g)(0.0, x);
  CHECK(low[0] == doctest::Approx(2.25 * 1.0 + 0.3 * -2.0));
  CHECK(low[1] == doctest::Approx(0.3 - 2.0));
  CHECK((raise(lower(v, g), g)(0.0, x) - v(0.0, x)).max_abs() < 1e-14);
  const Metric bad(2, [](const Point&) { return Mat(Mat::Identity(2, 2) * -1.0); });
  CHECK_THROWS_AS(bad.at(x), NumericError);
}

TEST_CASE("spacetime lift keeps spatial components and adds no time parts") {
  oracle::Rng rng(30);
  const auto polys = oracle::random_polys(rng, 2, 2);
  const FormField a = oracle::polynomial_form(polys, 2, 1);
  const FormField lifted = spacetime_lift(a);
  CHECK(lifted.dim() == 3);
  const Point x = (Vec(3) << 0.7, 0.2, -0.4).finished();
  const FormValue v = lifted(0.0, x);
  const Point xs = (Vec(2) << 0.2, -0.4).finished();
  CHECK(v.at(0b001u) == 0.0);
  CHECK(v.at(0b010u) == doctest::Approx(polys[0].value(xs)));
  CHECK(v.at(0b100u) == doctest::Approx(polys[1].value(xs)));
  CHECK((spatial_part(lifted)(0.7, xs) - a(0.7, xs)).max_abs() < 1e-15);
}

TEST_CASE("degree errors are reported") {
  CHECK_THROWS_AS(FormValue(5, 1), DegreeError);
  CHECK_THROWS_AS(FormValue(2, 1) + FormValue(2, 2), DegreeError);
  const FormField top = FormField::constant(FormValue(2, 2));
  CHECK(exterior_derivative(top).identically_zero());
}
