#pragma once

// Pointwise exterior algebra on at most four coordinate slots.
//
// A degree-k value in n slots stores C(n, k) components, one per strictly
// increasing index tuple, in lexicographic order: for n = 3, k = 2 the order
// is (0,1), (0,2), (1,2), i.e. dx^dy, dx^dz, dy^dz. Index tuples are handled
// as bitmasks internally.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>

#include <Eigen/Core>

#include "vorhom/error.hpp"

namespace vorhom {

inline constexpr int kMaxSlots = 4;
inline constexpr int kMaxComponents = 6;  // C(4, 2)

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxSlots, 1>;
using Point = Vec;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxSlots, kMaxSlots>;

int binomial(int n, int k);

/// Bitmasks of the degree-k basis in n slots, lexicographic order.
std::span<const unsigned> basis_masks(int n, int k);

/// Position of a mask within basis_masks(n, popcount(mask)).
int basis_index(int n, unsigned mask);

/// Sign of the permutation sorting the concatenation I.J of disjoint index sets.
int merge_sign(unsigned first, unsigned second);

/// Human-readable basis label such as "dx^dz" or "d_y^d_z".
std::string basis_label(int n, unsigned mask, bool covariant, bool time_slot = false);

struct CovariantTag {};
struct ContravariantTag {};

/// Component array of an alternating tensor at one point.
template <class Tag>
class Alternating {
 public:
  Alternating() = default;
  Alternating(int dim, int degree) : dim_(dim), degree_(degree) {
    if (dim < 0 || dim > kMaxSlots) throw DegreeError("slot count must lie in 0..4");
    // Degrees above the slot count are legal and describe the zero space.
    if (degree < 0) throw DegreeError("negative degree " + std::to_string(degree));
  }

  static Alternating zero(int dim, int degree) { return Alternating(dim, degree); }
  static Alternating scalar(int dim, double value) {
    Alternating a(dim, 0);
    a.c_[0] = value;
    return a;
  }

  int dim() const noexcept { return dim_; }
  int degree() const noexcept { return degree_; }
  int size() const { return binomial(dim_, degree_); }

  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }

  double at(unsigned mask) const { return c_[static_cast<std::size_t>(basis_index(dim_, mask))]; }
  double& at(unsigned mask) { return c_[static_cast<std::size_t>(basis_index(dim_, mask))]; }

  double max_abs() const {
    double m = 0.0;
    for (int i = 0; i < size(); ++i) m = std::max(m, std::abs(c_[static_cast<std::size_t>(i)]));
    return m;
  }

  Alternating& operator+=(const Alternating& o) {
    check_shape(o);
    for (int i = 0; i < size(); ++i) c_[static_cast<std::size_t>(i)] += o.c_[static_cast<std::size_t>(i)];
    return *this;
  }
  Alternating& operator-=(const Alternating& o) {
    check_shape(o);
    for (int i = 0; i < size(); ++i) c_[static_cast<std::size_t>(i)] -= o.c_[static_cast<std::size_t>(i)];
    return *this;
  }
  Alternating& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }

  friend Alternating operator+(Alternating a, const Alternating& b) { return a += b; }
  friend Alternating operator-(Alternating a, const Alternating& b) { return a -= b; }
  friend Alternating operator*(double s, Alternating a) { return a *= s; }
  friend Alternating operator*(Alternating a, double s) { return a *= s; }
  friend Alternating operator-(Alternating a) { return a *= -1.0; }

  bool operator==(const Alternating&) const = default;

 private:
  void check_shape(const Alternating& o) const {
    if (o.dim_ != dim_ || o.degree_ != degree_) {
      throw DegreeError("alternating tensors of shape (" + std::to_string(dim_) + "," + std::to_string(degree_) +
                        ") and (" + std::to_string(o.dim_) + "," + std::to_string(o.degree_) + ") cannot be combined");
    }
  }

  int dim_ = 0;
  int degree_ = 0;
  std::array<double, kMaxComponents> c_{};
};

using FormValue = Alternating<CovariantTag>;
using MultiVectorValue = Alternating<ContravariantTag>;

FormValue wedge(const FormValue& a, const FormValue& b);
MultiVectorValue wedge(const MultiVectorValue& a, const MultiVectorValue& b);

/// (i_A alpha)(B) = alpha(A ^ B); requires degree(A) <= degree(alpha).
FormValue interior(const MultiVectorValue& a, const FormValue& alpha);

/// Full contraction of equal-degree values: sum over I of alpha_I A^I.
double pair(const FormValue& alpha, const MultiVectorValue& a);

/// alpha(X_1, ..., X_k) where the X_j are the columns of `vectors` (n x k).
double evaluate_on(const FormValue& alpha, const Mat& vectors);

/// #A = i_A V with V = density * dx^1 ^ ... ^ dx^n.
FormValue sharp(const MultiVectorValue& a, double density = 1.0);
/// Inverse of sharp: the multivector Y with beta(Y) = (beta ^ alpha)(V*) for every beta.
MultiVectorValue sharp_inverse(const FormValue& alpha, double density = 1.0);

MultiVectorValue from_vector(const Vec& v);
Vec to_vector(const MultiVectorValue& a);
FormValue from_covector(const Vec& c);
Vec to_covector(const FormValue& a);

}  // namespace vorhom
