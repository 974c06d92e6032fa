#pragma once

// Finite cubical chain complexes with real coefficients.
//
// Cells are identified by name. Each k-cell (k >= 1) carries a signed face
// list; the face lists are the incidence matrices of the boundary operator and
// are also the only place where identifications (glued edges, collapsed
// faces) are expressed. Geometry is optional.

#include <algorithm>
#include <cmath>
#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vorhom/error.hpp"

namespace vorhom {

class SingularCube;

/// Opaque cell identifier, unique within a complex.
struct CubeId {
  std::string name;

  CubeId() = default;
  CubeId(std::string n) : name(std::move(n)) {}  // NOLINT(google-explicit-constructor)
  CubeId(const char* n) : name(n) {}             // NOLINT(google-explicit-constructor)

  auto operator<=>(const CubeId&) const = default;
  bool operator==(const CubeId&) const = default;
};

struct BasisCube {
  CubeId id;
  int degree = 0;
  std::shared_ptr<const SingularCube> geometry;  // may be null
};

struct SignedFace {
  CubeId face;
  int sign = 1;
};

struct ChainTag {};
struct CochainTag {};

/// Sparse formal sum over basis cells of one degree. Zero coefficients are
/// never stored.
template <class Tag>
class FormalSum {
 public:
  using Terms = std::map<CubeId, double>;

  explicit FormalSum(int degree = 0) : degree_(degree) {}

  static FormalSum basis(int degree, const CubeId& id, double coefficient = 1.0) {
    FormalSum s(degree);
    s.add(id, coefficient);
    return s;
  }

  int degree() const noexcept { return degree_; }
  const Terms& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  double coefficient(const CubeId& id) const {
    auto it = terms_.find(id);
    return it == terms_.end() ? 0.0 : it->second;
  }

  void add(const CubeId& id, double coefficient) {
    if (coefficient == 0.0) return;
    auto [it, inserted] = terms_.emplace(id, coefficient);
    if (!inserted) {
      it->second += coefficient;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& [id, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  FormalSum& operator+=(const FormalSum& other) {
    check_degree(other);
    for (const auto& [id, c] : other.terms_) add(id, c);
    return *this;
  }
  FormalSum& operator-=(const FormalSum& other) {
    check_degree(other);
    for (const auto& [id, c] : other.terms_) add(id, -c);
    return *this;
  }
  FormalSum& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [id, c] : terms_) c *= s;
    return *this;
  }

  friend FormalSum operator+(FormalSum a, const FormalSum& b) { return a += b; }
  friend FormalSum operator-(FormalSum a, const FormalSum& b) { return a -= b; }
  friend FormalSum operator*(double s, FormalSum a) { return a *= s; }
  friend FormalSum operator*(FormalSum a, double s) { return a *= s; }
  friend FormalSum operator-(FormalSum a) { return a *= -1.0; }

  bool operator==(const FormalSum& other) const = default;

 private:
  void check_degree(const FormalSum& other) const {
    if (other.degree_ != degree_) {
      throw DegreeError("cannot combine formal sums of degree " + std::to_string(degree_) +
                        " and " + std::to_string(other.degree_));
    }
  }

  int degree_;
  Terms terms_;
};

using Chain = FormalSum<ChainTag>;
using Cochain = FormalSum<CochainTag>;

/// Immutable, validated cubical complex. Build with ComplexBuilder.
class CubicalComplex {
 public:
  const std::string& name() const noexcept { return name_; }

  /// Top cell degree; -1 for the empty complex.
  int dimension() const noexcept { return static_cast<int>(cells_.size()) - 1; }

  std::span<const BasisCube> cubes(int degree) const;
  std::size_t count(int degree) const { return cubes(degree).size(); }

  bool contains(const CubeId& id) const { return index_.count(id) != 0; }
  const BasisCube& cube(const CubeId& id) const;
  int degree_of(const CubeId& id) const { return cube(id).degree; }
  /// Position of the cell within its degree; the row/column order of the incidence matrices.
  int position_of(const CubeId& id) const;

  /// Signed face list of a cell of degree >= 1 (empty for 0-cells).
  const std::vector<SignedFace>& faces(const CubeId& id) const;

  /// Integer incidence matrix of the boundary C_k -> C_{k-1}: rows are
  /// (k-1)-cells, columns are k-cells. Empty for k <= 0 or k > dimension().
  Eigen::MatrixXi incidence(int k) const;

  Eigen::VectorXd to_vector(const Chain& c) const;
  Eigen::VectorXd to_vector(const Cochain& c) const;
  Chain chain_from_vector(int degree, const Eigen::VectorXd& coefficients) const;
  Cochain cochain_from_vector(int degree, const Eigen::VectorXd& coefficients) const;

 private:
  friend class ComplexBuilder;

  struct Slot {
    int degree;
    int position;
  };

  std::string name_;
  std::vector<std::vector<BasisCube>> cells_;
  std::vector<std::vector<std::vector<SignedFace>>> faces_;
  std::map<CubeId, Slot> index_;
};

class ComplexBuilder {
 public:
  explicit ComplexBuilder(std::string name = {});

  /// Faces must reference already-added cells of degree - 1.
  ComplexBuilder& add_cube(int degree, const CubeId& id, std::vector<SignedFace> faces = {},
                           std::shared_ptr<const SingularCube> geometry = nullptr);

  /// Validates the boundary-squared identity and returns the frozen complex.
  CubicalComplex build() const;

 private:
  CubicalComplex complex_;
};

struct HomologySummary {
  int degree = 0;
  int rank_cycles = 0;
  int rank_boundaries = 0;
  int betti = 0;
  std::vector<Chain> representative_cycles;
};

Chain boundary(const Chain& c, const CubicalComplex& complex);
Cochain coboundary(const Cochain& c, const CubicalComplex& complex);
double evaluate(const Cochain& c, const Chain& z);

bool is_cycle(const Chain& z, const CubicalComplex& complex);
bool is_boundary(const Chain& z, const CubicalComplex& complex);

HomologySummary homology(const CubicalComplex& complex, int k);
std::vector<int> betti_numbers(const CubicalComplex& complex);

inline constexpr double kPivotTolerance = 1e-10;
inline constexpr double kBoundaryResidualTolerance = 1e-8;

namespace linalg {

/// Row echelon reduction with partial pivoting; returns the rank.
int rank(Eigen::MatrixXd m, double pivot_tolerance = kPivotTolerance);

/// Columns span the null space of m.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double pivot_tolerance = kPivotTolerance);

}  // namespace linalg

// ---- complex definition files and shipped complexes -----------------------

/// Parses the structured-text complex format:
///
///     vorhom-complex 1
///     name circle
///     cell 0 a
///     cell 1 e1 = +b -a
///
/// Blank lines and `#` comments are ignored.
CubicalComplex parse_complex(const std::string& text);
CubicalComplex load_complex(const std::string& path);
std::string serialize_complex(const CubicalComplex& complex);

/// Names: circle, cylinder, punctured_plane, doubly_punctured, sphere, ball.
CubicalComplex golden_complex(const std::string& name);
std::vector<std::string> golden_complex_names();
/// Betti numbers the shipped complexes are known to have.
std::vector<int> golden_betti(const std::string& name);

/// Standard cubical complex of a box of unit cells; periodic axes are glued.
CubicalComplex grid_complex(const std::vector<int>& extents, const std::vector<bool>& periodic = {});

}  // namespace vorhom
