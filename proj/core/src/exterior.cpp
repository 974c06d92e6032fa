#include "vorhom/exterior.hpp"

#include <bit>

#include <Eigen/LU>
#include <vector>

namespace vorhom {

namespace {

struct BasisTable {
  // masks[n][k] in lexicographic order of the increasing index tuples.
  std::vector<unsigned> masks[kMaxSlots + 1][kMaxSlots + 1];
  int index[kMaxSlots + 1][1u << kMaxSlots];

  BasisTable() {
    for (int n = 0; n <= kMaxSlots; ++n) {
      for (int k = 0; k <= n; ++k) fill(n, k, 0, 0u, k);
      for (int k = 0; k <= n; ++k) {
        for (std::size_t i = 0; i < masks[n][k].size(); ++i) index[n][masks[n][k][i]] = static_cast<int>(i);
      }
    }
  }

  // Recursive enumeration keeps lexicographic order: smallest first index first.
  void fill(int n, int k, int start, unsigned prefix, int remaining) {
    if (remaining == 0) {
      masks[n][k].push_back(prefix);
      return;
    }
    for (int i = start; i <= n - remaining; ++i) fill(n, k, i + 1, prefix | (1u << i), remaining - 1);
  }
};

const BasisTable& table() {
  static const BasisTable t;
  return t;
}

template <class V>
V wedge_impl(const V& a, const V& b) {
  if (a.dim() != b.dim()) throw DegreeError("wedge of values with different slot counts");
  const int n = a.dim();
  if (a.degree() + b.degree() > n) {
    throw DegreeError("wedge degree " + std::to_string(a.degree() + b.degree()) + " exceeds " + std::to_string(n) + " slots");
  }
  V out(n, a.degree() + b.degree());
  const auto am = basis_masks(n, a.degree());
  const auto bm = basis_masks(n, b.degree());
  for (std::size_t i = 0; i < am.size(); ++i) {
    const double ai = a[static_cast<int>(i)];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < bm.size(); ++j) {
      if (am[i] & bm[j]) continue;
      out.at(am[i] | bm[j]) += merge_sign(am[i], bm[j]) * ai * b[static_cast<int>(j)];
    }
  }
  return out;
}

}  // namespace

int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::span<const unsigned> basis_masks(int n, int k) {
  if (n < 0 || n > kMaxSlots || k < 0 || k > n) return {};
  return table().masks[n][k];
}

int basis_index(int n, unsigned mask) { return table().index[n][mask]; }

int merge_sign(unsigned first, unsigned second) {
  int inversions = 0;
  for (unsigned rest = first; rest != 0; rest &= rest - 1) {
    const int i = std::countr_zero(rest);
    inversions += std::popcount(second & ((1u << i) - 1u));
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

std::string basis_label(int n, unsigned mask, bool covariant, bool time_slot) {
  static const char* spatial[] = {"x", "y", "z", "w"};
  if (mask == 0) return "1";
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (!((mask >> i) & 1u)) continue;
    if (!out.empty()) out += "^";
    const char* name = time_slot ? (i == 0 ? "t" : spatial[i - 1]) : spatial[i];
    out += covariant ? "d" : "d_";
    out += name;
  }
  return out;
}

FormValue wedge(const FormValue& a, const FormValue& b) { return wedge_impl(a, b); }
MultiVectorValue wedge(const MultiVectorValue& a, const MultiVectorValue& b) { return wedge_impl(a, b); }

FormValue interior(const MultiVectorValue& a, const FormValue& alpha) {
  if (a.dim() != alpha.dim()) throw DegreeError("interior product of values with different slot counts");
  if (a.degree() > alpha.degree()) throw DegreeError("interior product lowers degree below zero");
  const int n = alpha.dim();
  FormValue out(n, alpha.degree() - a.degree());
  const auto am = basis_masks(n, a.degree());
  const auto jm = basis_masks(n, out.degree());
  for (std::size_t i = 0; i < am.size(); ++i) {
    const double ai = a[static_cast<int>(i)];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < jm.size(); ++j) {
      if (am[i] & jm[j]) continue;
      out[static_cast<int>(j)] += merge_sign(am[i], jm[j]) * ai * alpha.at(am[i] | jm[j]);
    }
  }
  return out;
}

double pair(const FormValue& alpha, const MultiVectorValue& a) {
  if (a.dim() != alpha.dim() || a.degree() != alpha.degree()) throw DegreeError("pairing needs equal shapes");
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += alpha[i] * a[i];
  return s;
}

double evaluate_on(const FormValue& alpha, const Mat& vectors) {
  const int n = alpha.dim();
  const int k = alpha.degree();
  if (vectors.rows() != n || vectors.cols() != k) throw DegreeError("evaluate_on needs an n x k matrix of vectors");
  if (k == 0) return alpha[0];
  double s = 0.0;
  const auto masks = basis_masks(n, k);
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const double c = alpha[static_cast<int>(i)];
    if (c == 0.0) continue;
    Mat minor(k, k);
    int r = 0;
    for (int row = 0; row < n; ++row) {
      if ((masks[i] >> row) & 1u) minor.row(r++) = vectors.row(row);
    }
    s += c * minor.determinant();
  }
  return s;
}

FormValue sharp(const MultiVectorValue& a, double density) {
  const int n = a.dim();
  FormValue out(n, n - a.degree());
  const unsigned full = (1u << n) - 1u;
  const auto im = basis_masks(n, out.degree());
  for (std::size_t i = 0; i < im.size(); ++i) {
    const unsigned comp = full & ~im[i];
    out[static_cast<int>(i)] = density * merge_sign(comp, im[i]) * a.at(comp);
  }
  return out;
}

MultiVectorValue sharp_inverse(const FormValue& alpha, double density) {
  const int n = alpha.dim();
  MultiVectorValue out(n, n - alpha.degree());
  const unsigned full = (1u << n) - 1u;
  const auto jm = basis_masks(n, out.degree());
  for (std::size_t j = 0; j < jm.size(); ++j) {
    const unsigned comp = full & ~jm[j];
    out[static_cast<int>(j)] = merge_sign(jm[j], comp) * alpha.at(comp) / density;
  }
  return out;
}

MultiVectorValue from_vector(const Vec& v) {
  MultiVectorValue a(static_cast<int>(v.size()), 1);
  for (int i = 0; i < v.size(); ++i) a[i] = v(i);
  return a;
}

Vec to_vector(const MultiVectorValue& a) {
  if (a.degree() != 1) throw DegreeError("to_vector needs a degree-1 multivector");
  Vec v(a.dim());
  for (int i = 0; i < a.dim(); ++i) v(i) = a[i];
  return v;
}

FormValue from_covector(const Vec& c) {
  FormValue a(static_cast<int>(c.size()), 1);
  for (int i = 0; i < c.size(); ++i) a[i] = c(i);
  return a;
}

Vec to_covector(const FormValue& a) {
  if (a.degree() != 1) throw DegreeError("to_covector needs a 1-form");
  Vec v(a.dim());
  for (int i = 0; i < a.dim(); ++i) v(i) = a[i];
  return v;
}

}  // namespace vorhom
