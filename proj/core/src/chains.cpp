#include "vorhom/chains.hpp"

#include <numbers>

namespace vorhom {

namespace {

constexpr double kMapStep = 1e-4;

Vec insert_slot(const Vec& s, int slot, double value) {
  Vec out(s.size() + 1);
  for (int i = 0, j = 0; i < out.size(); ++i) out(i) = (i == slot) ? value : s(j++);
  return out;
}

Mat drop_column(const Mat& m, int slot) {
  Mat out(m.rows(), m.cols() - 1);
  for (int c = 0, j = 0; c < m.cols(); ++c) {
    if (c != slot) out.col(j++) = m.col(c);
  }
  return out;
}

Vec unit(int dim, int axis) {
  Vec v = Vec::Zero(dim);
  v(axis) = 1.0;
  return v;
}

void require_dim(const Vec& v, int dim, const char* what) {
  if (v.size() != dim) throw DegreeError(std::string(what) + ": vectors of mismatched dimension");
}

}  // namespace

SingularCube::SingularCube(int degree, int dim, MapFn map, JacobianFn jacobian, std::string label)
    : degree_(degree), dim_(dim), map_(std::move(map)), jacobian_(std::move(jacobian)), label_(std::move(label)) {
  if (degree < 0 || degree > kMaxSlots) throw DegreeError("cube degree must lie in 0..4");
  if (dim < 1 || dim > kMaxSlots) throw DegreeError("cube target dimension must lie in 1..4");
  if (!map_) throw StructuralError("singular cube needs a map");
}

Point SingularCube::operator()(const Vec& s) const {
  if (s.size() != degree_) throw DegreeError("cube parameter of the wrong length");
  Point p = map_(s);
  if (p.size() != dim_) throw NumericError("cube map returned a point of the wrong dimension");
  if (!p.allFinite()) throw NumericError("cube map is undefined at a sample node");
  return p;
}

Mat SingularCube::jacobian(const Vec& s) const {
  if (jacobian_) return jacobian_(s);
  Mat j(dim_, degree_);
  const double h = kMapStep;
  for (int a = 0; a < degree_; ++a) {
    auto at = [&](double off) {
      Vec y = s;
      y(a) += off;
      return (*this)(y);
    };
    j.col(a) = (at(-2 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2 * h)) / (12.0 * h);
  }
  return j;
}

SingularCube SingularCube::face(int slot, int side) const {
  if (degree_ == 0) throw DegreeError("a 0-cube has no faces");
  if (slot < 0 || slot >= degree_ || (side != 0 && side != 1)) throw DegreeError("face index out of range");
  const double value = side;
  auto parent = *this;
  parent.nodes_.reset();
  JacobianFn jac;
  if (jacobian_) {
    jac = [parent, slot, value](const Vec& s) { return drop_column(parent.jacobian(insert_slot(s, slot, value)), slot); };
  }
  return SingularCube(
      degree_ - 1, dim_, [parent, slot, value](const Vec& s) { return parent(insert_slot(s, slot, value)); }, jac,
      label_.empty() ? std::string() : label_ + "/" + std::to_string(slot) + (side ? "+" : "-"));
}

SingularCube& SingularCube::set_nodes(std::shared_ptr<const NodeTable> table) {
  nodes_ = std::move(table);
  return *this;
}

SingularCube& SingularCube::set_label(std::string label) {
  label_ = std::move(label);
  return *this;
}

GeometricChain::GeometricChain(SingularCube cube, double coefficient) : degree_(cube.degree()), dim_(cube.dim()) {
  add(coefficient, std::move(cube));
}

GeometricChain& GeometricChain::add(double coefficient, SingularCube cube) {
  if (terms_.empty() && dim_ == 0) {
    degree_ = cube.degree();
    dim_ = cube.dim();
  }
  if (cube.degree() != degree_ || cube.dim() != dim_) {
    throw DegreeError("chain of degree " + std::to_string(degree_) + " cannot hold a cube of degree " +
                      std::to_string(cube.degree()));
  }
  if (coefficient != 0.0) terms_.emplace_back(coefficient, std::move(cube));
  return *this;
}

GeometricChain& GeometricChain::append(const GeometricChain& other, double scale) {
  for (const auto& [c, cube] : other.terms_) add(scale * c, cube);
  return *this;
}

GeometricChain GeometricChain::boundary() const {
  if (degree_ == 0) throw DegreeError("a 0-chain has no boundary");
  GeometricChain out(degree_ - 1, dim_);
  for (const auto& [c, cube] : terms_) {
    for (int a = 0; a < degree_; ++a) {
      for (int side = 0; side <= 1; ++side) out.add(c * SingularCube::face_sign(a, side), cube.face(a, side));
    }
  }
  return out;
}

GeometricChain operator*(double s, GeometricChain a) {
  GeometricChain out(a.degree(), a.dim());
  return out.append(a, s);
}

SingularCube point_cube(const Point& p) {
  return SingularCube(0, static_cast<int>(p.size()), [p](const Vec&) { return p; }, [p](const Vec&) {
    return Mat(p.size(), 0);
  });
}

SingularCube segment(const Point& a, const Point& b) {
  require_dim(b, static_cast<int>(a.size()), "segment");
  const Vec d = b - a;
  return SingularCube(
      1, static_cast<int>(a.size()), [a, d](const Vec& s) -> Point { return a + s(0) * d; },
      [d](const Vec&) -> Mat { return d; }, "segment");
}

SingularCube arc(const Point& center, double radius, double phi0, double phi1, const Vec& e1, const Vec& e2) {
  const int n = static_cast<int>(center.size());
  require_dim(e1, n, "arc");
  require_dim(e2, n, "arc");
  const double span = phi1 - phi0;
  return SingularCube(
      1, n,
      [=](const Vec& s) -> Point {
        const double phi = phi0 + span * s(0);
        return center + radius * (std::cos(phi) * e1 + std::sin(phi) * e2);
      },
      [=](const Vec& s) -> Mat {
        const double phi = phi0 + span * s(0);
        return radius * span * (-std::sin(phi) * e1 + std::cos(phi) * e2);
      },
      "arc");
}

SingularCube parallelogram(const Point& origin, const Vec& e1, const Vec& e2) {
  const int n = static_cast<int>(origin.size());
  require_dim(e1, n, "parallelogram");
  require_dim(e2, n, "parallelogram");
  Mat j(n, 2);
  j.col(0) = e1;
  j.col(1) = e2;
  return SingularCube(
      2, n, [=](const Vec& s) -> Point { return origin + s(0) * e1 + s(1) * e2; }, [j](const Vec&) { return j; },
      "parallelogram");
}

SingularCube parallelepiped(const Point& origin, const Vec& e1, const Vec& e2, const Vec& e3) {
  const int n = static_cast<int>(origin.size());
  require_dim(e1, n, "parallelepiped");
  require_dim(e2, n, "parallelepiped");
  require_dim(e3, n, "parallelepiped");
  Mat j(n, 3);
  j.col(0) = e1;
  j.col(1) = e2;
  j.col(2) = e3;
  return SingularCube(
      3, n, [=](const Vec& s) -> Point { return origin + s(0) * e1 + s(1) * e2 + s(2) * e3; },
      [j](const Vec&) { return j; }, "parallelepiped");
}

SingularCube annular_sector(const Point& center, double r0, double r1, double phi0, double phi1, const Vec& e1,
                            const Vec& e2) {
  const int n = static_cast<int>(center.size());
  require_dim(e1, n, "annular sector");
  require_dim(e2, n, "annular sector");
  const double dr = r1 - r0;
  const double span = phi1 - phi0;
  return SingularCube(
      2, n,
      [=](const Vec& s) -> Point {
        const double r = r0 + dr * s(0);
        const double phi = phi0 + span * s(1);
        return center + r * (std::cos(phi) * e1 + std::sin(phi) * e2);
      },
      [=](const Vec& s) -> Mat {
        const double r = r0 + dr * s(0);
        const double phi = phi0 + span * s(1);
        Mat j(n, 2);
        j.col(0) = dr * (std::cos(phi) * e1 + std::sin(phi) * e2);
        j.col(1) = r * span * (-std::sin(phi) * e1 + std::cos(phi) * e2);
        return j;
      },
      "sector");
}

GeometricChain circle(const Point& center, double radius, int turns, int arcs_per_turn) {
  const int n = static_cast<int>(center.size());
  if (n < 2) throw DegreeError("circles need at least two dimensions");
  return circle(center, radius, unit(n, 0), unit(n, 1), turns, arcs_per_turn);
}

GeometricChain circle(const Point& center, double radius, const Vec& e1, const Vec& e2, int turns,
                      int arcs_per_turn) {
  if (turns < 1 || arcs_per_turn < 1) throw DegreeError("circle needs positive turn and arc counts");
  GeometricChain c(1, static_cast<int>(center.size()));
  const double step = 2.0 * std::numbers::pi / arcs_per_turn;
  for (int t = 0; t < turns; ++t) {
    for (int i = 0; i < arcs_per_turn; ++i) c.add(1.0, arc(center, radius, i * step, (i + 1) * step, e1, e2));
  }
  return c;
}

GeometricChain disc(const Point& center, double radius, int sectors) {
  const int n = static_cast<int>(center.size());
  if (n < 2) throw DegreeError("discs need at least two dimensions");
  return disc(center, radius, unit(n, 0), unit(n, 1), sectors);
}

GeometricChain disc(const Point& center, double radius, const Vec& e1, const Vec& e2, int sectors) {
  if (sectors < 1) throw DegreeError("disc needs a positive sector count");
  GeometricChain c(2, static_cast<int>(center.size()));
  const double step = 2.0 * std::numbers::pi / sectors;
  for (int i = 0; i < sectors; ++i) c.add(1.0, annular_sector(center, 0.0, radius, i * step, (i + 1) * step, e1, e2));
  return c;
}

GeometricChain annulus(const Point& center, double r0, double r1, int sectors) {
  const int n = static_cast<int>(center.size());
  if (n < 2) throw DegreeError("annuli need at least two dimensions");
  GeometricChain c(2, n);
  const double step = 2.0 * std::numbers::pi / sectors;
  for (int i = 0; i < sectors; ++i) {
    c.add(1.0, annular_sector(center, r0, r1, i * step, (i + 1) * step, unit(n, 0), unit(n, 1)));
  }
  return c;
}

GeometricChain box(const Point& lo, const Point& hi) {
  const int n = static_cast<int>(lo.size());
  require_dim(hi, n, "box");
  const Vec d = hi - lo;
  Mat j = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) j(i, i) = d(i);
  return GeometricChain(SingularCube(
      n, n, [lo, d](const Vec& s) -> Point { return lo + d.cwiseProduct(s); }, [j](const Vec&) { return j; }, "box"));
}

bool endpoints_cancel(const GeometricChain& c, double tol) {
  if (c.degree() != 1) throw DegreeError("endpoint cancellation is defined for 1-chains");
  std::vector<std::pair<Point, double>> nets;
  auto deposit = [&](const Point& p, double w) {
    for (auto& [q, acc] : nets) {
      if ((q - p).norm() <= tol) {
        acc += w;
        return;
      }
    }
    nets.emplace_back(p, w);
  };
  for (const auto& [coef, cube] : c.terms()) {
    deposit(cube(Vec::Constant(1, 1.0)), coef);
    deposit(cube(Vec::Constant(1, 0.0)), -coef);
  }
  for (const auto& [p, w] : nets) {
    if (std::abs(w) > 1e-12) return false;
  }
  return true;
}

}  // namespace vorhom
