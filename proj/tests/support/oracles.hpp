#pragma once

// Independent reference computations for the tests: random polynomials with
// hand-written derivatives, fields built from them, and an RK4 flow map with
// its Jacobian for pullback difference quotients.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/LU>

#include "vorhom/exterior.hpp"
#include "vorhom/forms.hpp"
#include "vorhom/vector_field.hpp"

namespace oracle {

using vorhom::Mat;
using vorhom::Point;
using vorhom::Vec;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  int integer(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  Point point(int n, double lo, double hi) {
    Point p(n);
    for (int i = 0; i < n; ++i) p(i) = uniform(lo, hi);
    return p;
  }

 private:
  std::mt19937_64 engine_;
};

/// Sum of c * prod x_i^e_i with total degree at most 3.
struct Poly {
  struct Term {
    double c;
    std::array<int, 4> e;
  };
  int n = 0;
  std::vector<Term> terms;

  static Poly random(Rng& rng, int n, int count = 6, double scale = 1.0) {
    Poly p;
    p.n = n;
    for (int k = 0; k < count; ++k) {
      Term t{rng.uniform(-scale, scale), {0, 0, 0, 0}};
      const int degree = rng.integer(0, 3);
      for (int d = 0; d < degree; ++d) ++t.e[static_cast<std::size_t>(rng.integer(0, n - 1))];
      p.terms.push_back(t);
    }
    return p;
  }

  double value(const Point& x) const {
    double s = 0.0;
    for (const auto& t : terms) {
      double m = t.c;
      for (int i = 0; i < n; ++i) m *= std::pow(x(i), t.e[static_cast<std::size_t>(i)]);
      s += m;
    }
    return s;
  }

  double partial(const Point& x, int axis) const {
    double s = 0.0;
    for (const auto& t : terms) {
      const int ea = t.e[static_cast<std::size_t>(axis)];
      if (ea == 0) continue;
      double m = t.c * ea;
      for (int i = 0; i < n; ++i) {
        const int e = t.e[static_cast<std::size_t>(i)] - (i == axis ? 1 : 0);
        m *= std::pow(x(i), e);
      }
      s += m;
    }
    return s;
  }
};

/// A k-form on n slots with one random polynomial per component and analytic partials.
inline vorhom::FormField polynomial_form(const std::vector<Poly>& comps, int n, int k) {
  auto eval = [comps, n, k](double, const Point& x) {
    vorhom::FormValue v(n, k);
    for (std::size_t i = 0; i < comps.size(); ++i) v[static_cast<int>(i)] = comps[i].value(x);
    return v;
  };
  auto partial = [comps, n, k](double, const Point& x, int axis) {
    vorhom::FormValue v(n, k);
    for (std::size_t i = 0; i < comps.size(); ++i) v[static_cast<int>(i)] = comps[i].partial(x, axis);
    return v;
  };
  return vorhom::FormField(n, k, eval, partial).set_steady();
}

inline std::vector<Poly> random_polys(Rng& rng, int n, int count, double scale = 1.0) {
  std::vector<Poly> out;
  for (int i = 0; i < count; ++i) out.push_back(Poly::random(rng, n, 6, scale));
  return out;
}

/// Same form without partials, so the library falls back to finite differences.
inline vorhom::FormField fd_form(const std::vector<Poly>& comps, int n, int k) {
  return vorhom::FormField(n, k, [comps, n, k](double, const Point& x) {
           vorhom::FormValue v(n, k);
           for (std::size_t i = 0; i < comps.size(); ++i) v[static_cast<int>(i)] = comps[i].value(x);
           return v;
         }).set_steady();
}

/// Steady polynomial velocity field with its exact gradient.
inline vorhom::VectorFieldSpec polynomial_flow(const std::vector<Poly>& comps) {
  const int n = comps.front().n;
  return vorhom::VectorFieldSpec::from_functions(
      n,
      [comps, n](double, const Point& x) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v(i) = comps[static_cast<std::size_t>(i)].value(x);
        return v;
      },
      [comps, n](double, const Point& x) {
        Mat g(n, n);
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) g(i, j) = comps[static_cast<std::size_t>(i)].partial(x, j);
        }
        return g;
      });
}

struct FlowMap {
  Point x;
  Mat jacobian;
};

/// Classical RK4 for dx/ds = u(x), dJ/ds = grad u(x) J over [0, s].
inline FlowMap flow(const vorhom::VectorFieldSpec& u, const Point& x0, double s, int steps = 64) {
  const int n = static_cast<int>(x0.size());
  FlowMap m{x0, Mat::Identity(n, n)};
  const double h = s / steps;
  auto rhs = [&](const Point& x, const Mat& j) { return std::pair<Vec, Mat>{u(0.0, x), u.gradient(0.0, x) * j}; };
  for (int i = 0; i < steps; ++i) {
    const auto [k1x, k1j] = rhs(m.x, m.jacobian);
    const auto [k2x, k2j] = rhs(m.x + 0.5 * h * k1x, m.jacobian + 0.5 * h * k1j);
    const auto [k3x, k3j] = rhs(m.x + 0.5 * h * k2x, m.jacobian + 0.5 * h * k2j);
    const auto [k4x, k4j] = rhs(m.x + h * k3x, m.jacobian + h * k3j);
    m.x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    m.jacobian += h / 6.0 * (k1j + 2.0 * k2j + 2.0 * k3j + k4j);
  }
  return m;
}

/// (Phi_s^* alpha)(x), component by component: alpha(Phi x) on the pushed basis vectors.
inline vorhom::FormValue pullback(const vorhom::FormField& alpha, const vorhom::VectorFieldSpec& u, const Point& x,
                                  double s) {
  const int n = alpha.dim();
  const int k = alpha.degree();
  const FlowMap m = flow(u, x, s);
  const vorhom::FormValue at = alpha(0.0, m.x);
  vorhom::FormValue out(n, k);
  int idx = 0;
  for (unsigned mask : vorhom::basis_masks(n, k)) {
    Mat cols(n, k);
    int c = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) cols.col(c++) = m.jacobian.col(i);
    }
    out[idx++] = k == 0 ? at[0] : vorhom::evaluate_on(at, cols);
  }
  return out;
}

/// Central difference quotient of the pullback at s = 0.
inline vorhom::FormValue pullback_rate(const vorhom::FormField& alpha, const vorhom::VectorFieldSpec& u,
                                       const Point& x, double h = 1e-3) {
  return (pullback(alpha, u, x, h) - pullback(alpha, u, x, -h)) * (1.0 / (2.0 * h));
}

/// Ranks of the integer incidence matrices give betti numbers by rank-nullity.
template <class Complex>
std::vector<int> betti_by_rank(const Complex& c) {
  const int top = c.dimension();
  std::vector<int> rank(static_cast<std::size_t>(top + 2), 0);
  for (int k = 1; k <= top; ++k) {
    const Eigen::MatrixXd m = c.incidence(k).template cast<double>();
    if (m.size() > 0) rank[static_cast<std::size_t>(k)] = static_cast<int>(Eigen::FullPivLU<Eigen::MatrixXd>(m).rank());
  }
  std::vector<int> b;
  for (int k = 0; k <= top; ++k) {
    const int cells = static_cast<int>(c.count(k));
    b.push_back(cells - rank[static_cast<std::size_t>(k)] - rank[static_cast<std::size_t>(k + 1)]);
  }
  return b;
}

}  // namespace oracle
