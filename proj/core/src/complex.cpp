#include "vorhom/complex.hpp"

#include <Eigen/QR>

#include <cmath>
#include <string>

namespace vorhom {

namespace {

void require_known(const CubicalComplex& complex, const CubeId& id) {
  if (!complex.contains(id)) throw StructuralError("unknown cube id '" + id.name + "'");
}

template <class Sum>
void require_members(const Sum& s, const CubicalComplex& complex) {
  for (const auto& [id, c] : s.terms()) {
    require_known(complex, id);
    if (complex.degree_of(id) != s.degree()) {
      throw StructuralError("cube '" + id.name + "' has degree " +
                            std::to_string(complex.degree_of(id)) + ", expected " +
                            std::to_string(s.degree()));
    }
  }
}

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> reduce_rows(Eigen::MatrixXd& m, double tol) {
  std::vector<int> pivots;
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index best = r;
    for (Eigen::Index i = r + 1; i < rows; ++i) {
      if (std::abs(m(i, c)) > std::abs(m(best, c))) best = i;
    }
    if (std::abs(m(best, c)) <= tol) continue;
    m.row(r).swap(m.row(best));
    m.row(r) /= m(r, c);
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i != r && m(i, c) != 0.0) m.row(i) -= m(i, c) * m.row(r);
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

Eigen::MatrixXd incidence_real(const CubicalComplex& complex, int k) {
  return complex.incidence(k).cast<double>();
}

}  // namespace

// ---- CubicalComplex -------------------------------------------------------

std::span<const BasisCube> CubicalComplex::cubes(int degree) const {
  if (degree < 0 || degree > dimension()) return {};
  return cells_[static_cast<std::size_t>(degree)];
}

const BasisCube& CubicalComplex::cube(const CubeId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw StructuralError("unknown cube id '" + id.name + "'");
  return cells_[static_cast<std::size_t>(it->second.degree)]
               [static_cast<std::size_t>(it->second.position)];
}

int CubicalComplex::position_of(const CubeId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw StructuralError("unknown cube id '" + id.name + "'");
  return it->second.position;
}

const std::vector<SignedFace>& CubicalComplex::faces(const CubeId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw StructuralError("unknown cube id '" + id.name + "'");
  return faces_[static_cast<std::size_t>(it->second.degree)]
               [static_cast<std::size_t>(it->second.position)];
}

Eigen::MatrixXi CubicalComplex::incidence(int k) const {
  if (k <= 0 || k > dimension()) {
    const auto rows = k <= 0 ? 0 : static_cast<Eigen::Index>(count(k - 1));
    return Eigen::MatrixXi::Zero(rows, 0);
  }
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(count(k - 1)),
                                            static_cast<Eigen::Index>(count(k)));
  const auto& cells = cells_[static_cast<std::size_t>(k)];
  for (std::size_t j = 0; j < cells.size(); ++j) {
    for (const auto& f : faces_[static_cast<std::size_t>(k)][j]) {
      m(position_of(f.face), static_cast<Eigen::Index>(j)) += f.sign;
    }
  }
  return m;
}

Eigen::VectorXd CubicalComplex::to_vector(const Chain& c) const {
  require_members(c, *this);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(count(c.degree())));
  for (const auto& [id, a] : c.terms()) v(position_of(id)) = a;
  return v;
}

Eigen::VectorXd CubicalComplex::to_vector(const Cochain& c) const {
  require_members(c, *this);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(count(c.degree())));
  for (const auto& [id, a] : c.terms()) v(position_of(id)) = a;
  return v;
}

Chain CubicalComplex::chain_from_vector(int degree, const Eigen::VectorXd& coefficients) const {
  const auto cells = cubes(degree);
  if (static_cast<std::size_t>(coefficients.size()) != cells.size()) {
    throw StructuralError("coefficient vector length does not match the number of cells");
  }
  Chain c(degree);
  for (std::size_t i = 0; i < cells.size(); ++i) c.add(cells[i].id, coefficients(static_cast<Eigen::Index>(i)));
  return c;
}

Cochain CubicalComplex::cochain_from_vector(int degree, const Eigen::VectorXd& coefficients) const {
  const auto cells = cubes(degree);
  if (static_cast<std::size_t>(coefficients.size()) != cells.size()) {
    throw StructuralError("coefficient vector length does not match the number of cells");
  }
  Cochain c(degree);
  for (std::size_t i = 0; i < cells.size(); ++i) c.add(cells[i].id, coefficients(static_cast<Eigen::Index>(i)));
  return c;
}

// ---- ComplexBuilder -------------------------------------------------------

ComplexBuilder::ComplexBuilder(std::string name) { complex_.name_ = std::move(name); }

ComplexBuilder& ComplexBuilder::add_cube(int degree, const CubeId& id, std::vector<SignedFace> faces,
                                         std::shared_ptr<const SingularCube> geometry) {
  if (degree < 0) throw DegreeError("cell degree must be non-negative");
  if (id.name.empty()) throw StructuralError("cell id must not be empty");
  if (complex_.contains(id)) throw StructuralError("duplicate cube id '" + id.name + "'");
  if (degree == 0 && !faces.empty()) throw StructuralError("0-cell '" + id.name + "' cannot have faces");
  for (const auto& f : faces) {
    if (!complex_.contains(f.face)) {
      throw StructuralError("cell '" + id.name + "' references unknown face '" + f.face.name + "'");
    }
    if (complex_.degree_of(f.face) != degree - 1) {
      throw StructuralError("face '" + f.face.name + "' of '" + id.name + "' has degree " +
                            std::to_string(complex_.degree_of(f.face)));
    }
    if (f.sign != 1 && f.sign != -1) throw StructuralError("face signs must be +1 or -1");
  }
  auto& cells = complex_.cells_;
  auto& face_lists = complex_.faces_;
  if (static_cast<int>(cells.size()) <= degree) {
    cells.resize(static_cast<std::size_t>(degree) + 1);
    face_lists.resize(static_cast<std::size_t>(degree) + 1);
  }
  auto& slot = cells[static_cast<std::size_t>(degree)];
  complex_.index_.emplace(id, CubicalComplex::Slot{degree, static_cast<int>(slot.size())});
  slot.push_back(BasisCube{id, degree, std::move(geometry)});
  face_lists[static_cast<std::size_t>(degree)].push_back(std::move(faces));
  return *this;
}

CubicalComplex ComplexBuilder::build() const {
  for (int k = 2; k <= complex_.dimension(); ++k) {
    const Eigen::MatrixXi sq = complex_.incidence(k - 1) * complex_.incidence(k);
    if (sq.size() != 0 && sq.cwiseAbs().maxCoeff() != 0) {
      throw StructuralError("complex '" + complex_.name_ + "': boundary of boundary is not zero in degree " +
                            std::to_string(k));
    }
  }
  return complex_;
}

// ---- operators ------------------------------------------------------------

Chain boundary(const Chain& c, const CubicalComplex& complex) {
  if (c.degree() <= 0) throw DegreeError("boundary of a 0-chain is undefined");
  require_members(c, complex);
  Chain result(c.degree() - 1);
  for (const auto& [id, a] : c.terms()) {
    for (const auto& f : complex.faces(id)) result.add(f.face, a * f.sign);
  }
  return result;
}

Cochain coboundary(const Cochain& c, const CubicalComplex& complex) {
  if (c.degree() < 0 || c.degree() >= complex.dimension()) {
    throw DegreeError("coboundary of a " + std::to_string(c.degree()) + "-cochain exceeds complex dimension " +
                      std::to_string(complex.dimension()));
  }
  require_members(c, complex);
  // Transpose of the incidence matrix: (delta c)(sigma) = sum over faces of sigma.
  Cochain result(c.degree() + 1);
  for (const auto& cell : complex.cubes(c.degree() + 1)) {
    double value = 0.0;
    for (const auto& f : complex.faces(cell.id)) value += f.sign * c.coefficient(f.face);
    result.add(cell.id, value);
  }
  return result;
}

double evaluate(const Cochain& c, const Chain& z) {
  if (c.degree() != z.degree()) {
    throw DegreeError("cannot pair a " + std::to_string(c.degree()) + "-cochain with a " +
                      std::to_string(z.degree()) + "-chain");
  }
  double sum = 0.0;
  for (const auto& [id, b] : z.terms()) sum += c.coefficient(id) * b;
  return sum;
}

bool is_cycle(const Chain& z, const CubicalComplex& complex) {
  require_members(z, complex);
  if (z.degree() == 0) return true;
  const Chain b = boundary(z, complex);
  return b.max_abs() <= 1e-12 * std::max(1.0, z.max_abs());
}

bool is_boundary(const Chain& z, const CubicalComplex& complex) {
  const Eigen::VectorXd rhs = complex.to_vector(z);
  const double norm = rhs.norm();
  if (norm == 0.0) return true;
  const Eigen::MatrixXd d = incidence_real(complex, z.degree() + 1);
  if (d.cols() == 0) return false;
  const Eigen::VectorXd x = d.completeOrthogonalDecomposition().solve(rhs);
  return (d * x - rhs).norm() <= kBoundaryResidualTolerance * norm;
}

HomologySummary homology(const CubicalComplex& complex, int k) {
  if (k < 0 || k > complex.dimension()) {
    throw DegreeError("homology degree " + std::to_string(k) + " outside 0.." + std::to_string(complex.dimension()));
  }
  const Eigen::MatrixXd dk = incidence_real(complex, k);
  const Eigen::MatrixXd dk1 = incidence_real(complex, k + 1);
  const int n = static_cast<int>(complex.count(k));

  HomologySummary h;
  h.degree = k;
  const int rank_dk = (k == 0 || dk.size() == 0) ? 0 : linalg::rank(dk);
  h.rank_cycles = n - rank_dk;
  h.rank_boundaries = dk1.cols() == 0 ? 0 : linalg::rank(dk1);
  h.betti = h.rank_cycles - h.rank_boundaries;

  // Cycles that extend a basis of the boundary space to one of the cycle space.
  const Eigen::MatrixXd cycles =
      (k == 0 || dk.rows() == 0) ? Eigen::MatrixXd::Identity(n, n) : linalg::null_space(dk);
  Eigen::MatrixXd span = dk1.cols() == 0 ? Eigen::MatrixXd(n, 0) : dk1;
  int span_rank = h.rank_boundaries;
  for (Eigen::Index j = 0; j < cycles.cols() && static_cast<int>(h.representative_cycles.size()) < h.betti; ++j) {
    Eigen::MatrixXd candidate(n, span.cols() + 1);
    candidate << span, cycles.col(j);
    const int r = linalg::rank(candidate);
    if (r > span_rank) {
      span = std::move(candidate);
      span_rank = r;
      Eigen::VectorXd z = cycles.col(j);
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        if (std::abs(z(i)) < 1e-12) z(i) = 0.0;
      }
      h.representative_cycles.push_back(complex.chain_from_vector(k, z));
    }
  }
  return h;
}

std::vector<int> betti_numbers(const CubicalComplex& complex) {
  std::vector<int> b;
  for (int k = 0; k <= complex.dimension(); ++k) b.push_back(homology(complex, k).betti);
  return b;
}

namespace linalg {

int rank(Eigen::MatrixXd m, double pivot_tolerance) {
  if (m.size() == 0) return 0;
  return static_cast<int>(reduce_rows(m, pivot_tolerance).size());
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double pivot_tolerance) {
  Eigen::MatrixXd r = m;
  const std::vector<int> pivots = reduce_rows(r, pivot_tolerance);
  const Eigen::Index cols = m.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;

  Eigen::MatrixXd basis(cols, cols - static_cast<Eigen::Index>(pivots.size()));
  Eigen::Index out = 0;
  for (Eigen::Index free = 0; free < cols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(cols);
    v(free) = 1.0;
    for (std::size_t i = 0; i < pivots.size(); ++i) v(pivots[i]) = -r(static_cast<Eigen::Index>(i), free);
    basis.col(out++) = v;
  }
  return basis;
}

}  // namespace linalg

}  // namespace vorhom
