#pragma once

// Singular cubes (smooth maps [0,1]^k -> flow space) and real-coefficient
// chains of them.
//
// Face convention: the face of slot a (0-based) at side e in {0, 1} carries
// the sign (-1)^a * (e ? +1 : -1), and faces are listed slot-major with the
// 0-face first. This is the sign rule that makes boundary of boundary vanish.

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "vorhom/exterior.hpp"

namespace vorhom {

class SingularCube {
 public:
  using MapFn = std::function<Point(const Vec&)>;
  using JacobianFn = std::function<Mat(const Vec&)>;

  /// Map images and Jacobians precomputed at the tensor Gauss nodes of one order.
  struct NodeTable {
    int order = 0;
    std::vector<Point> points;
    std::vector<Mat> jacobians;
  };

  SingularCube() = default;
  /// `jacobian` returns the dim x degree matrix of column derivatives; when
  /// empty a fourth-order central difference in the parameters is used.
  SingularCube(int degree, int dim, MapFn map, JacobianFn jacobian = {}, std::string label = {});

  int degree() const noexcept { return degree_; }
  int dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }
  bool analytic_jacobian() const noexcept { return static_cast<bool>(jacobian_); }

  Point operator()(const Vec& s) const;
  Mat jacobian(const Vec& s) const;

  /// Face at slot `slot`, side `side` (0 or 1), without its sign.
  SingularCube face(int slot, int side) const;
  static int face_sign(int slot, int side) { return ((slot % 2 == 0) ? 1 : -1) * (side == 1 ? 1 : -1); }

  const std::shared_ptr<const NodeTable>& nodes() const noexcept { return nodes_; }
  SingularCube& set_nodes(std::shared_ptr<const NodeTable> table);
  SingularCube& set_label(std::string label);

 private:
  int degree_ = 0;
  int dim_ = 0;
  MapFn map_;
  JacobianFn jacobian_;
  std::string label_;
  std::shared_ptr<const NodeTable> nodes_;
};

class GeometricChain {
 public:
  using Term = std::pair<double, SingularCube>;

  GeometricChain() = default;
  GeometricChain(int degree, int dim) : degree_(degree), dim_(dim) {}
  /// Single-cube chain with coefficient 1.
  explicit GeometricChain(SingularCube cube, double coefficient = 1.0);

  int degree() const noexcept { return degree_; }
  int dim() const noexcept { return dim_; }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  GeometricChain& add(double coefficient, SingularCube cube);
  GeometricChain& append(const GeometricChain& other, double scale = 1.0);

  /// Signed faces of every cube; a 0-chain has no geometric boundary.
  GeometricChain boundary() const;

  friend GeometricChain operator+(GeometricChain a, const GeometricChain& b) { return a.append(b); }
  friend GeometricChain operator-(GeometricChain a, const GeometricChain& b) { return a.append(b, -1.0); }
  friend GeometricChain operator*(double s, GeometricChain a);

 private:
  int degree_ = 0;
  int dim_ = 0;
  std::vector<Term> terms_;
};

// ---- shape factories -------------------------------------------------------

SingularCube point_cube(const Point& p);
/// Straight segment s -> a + s (b - a).
SingularCube segment(const Point& a, const Point& b);
/// Arc center + r (cos phi e1 + sin phi e2), phi from phi0 to phi1.
SingularCube arc(const Point& center, double radius, double phi0, double phi1, const Vec& e1, const Vec& e2);
/// Parallelogram o + s0 e1 + s1 e2 (any target dimension).
SingularCube parallelogram(const Point& origin, const Vec& e1, const Vec& e2);
/// Parallelepiped o + s0 e1 + s1 e2 + s2 e3.
SingularCube parallelepiped(const Point& origin, const Vec& e1, const Vec& e2, const Vec& e3);
/// Annular sector (s0, s1) -> center + (r0 + (r1 - r0) s0) (cos phi e1 + sin phi e2),
/// phi = phi0 + (phi1 - phi0) s1. With r0 = 0 it is a disc sector.
SingularCube annular_sector(const Point& center, double r0, double r1, double phi0, double phi1, const Vec& e1,
                            const Vec& e2);

/// Counter-clockwise circle in the plane of (e1, e2), traversed `turns` times,
/// split into `arcs_per_turn` arcs. Defaults to the xy-plane.
GeometricChain circle(const Point& center, double radius, int turns = 1, int arcs_per_turn = 8);
GeometricChain circle(const Point& center, double radius, const Vec& e1, const Vec& e2, int turns = 1,
                      int arcs_per_turn = 8);
/// Disc as a union of polar sectors; its boundary is the circle above.
GeometricChain disc(const Point& center, double radius, int sectors = 8);
GeometricChain disc(const Point& center, double radius, const Vec& e1, const Vec& e2, int sectors = 8);
/// Annulus r0 < r < r1; boundary = outer circle - inner circle.
GeometricChain annulus(const Point& center, double r0, double r1, int sectors = 8);
/// Axis-aligned box [lo, hi] as a single cube of degree lo.size().
GeometricChain box(const Point& lo, const Point& hi);

/// True when the 1-chain's endpoints cancel (as points within `tol`).
bool endpoints_cancel(const GeometricChain& c, double tol = 1e-10);

}  // namespace vorhom
