#pragma once

// Gauss-Legendre rules on [0, 1] and their tensor products on [0, 1]^k.

#include <vector>

#include "vorhom/exterior.hpp"

namespace vorhom {

inline constexpr int kDefaultQuadratureOrder = 8;

struct GaussRule {
  std::vector<double> nodes;    // ascending, inside (0, 1)
  std::vector<double> weights;  // sum to 1
};

/// n-point rule, exact for polynomials of degree 2n - 1. Cached per order.
const GaussRule& gauss_legendre(int order);

struct TensorNode {
  Vec s;
  double weight;
};

/// Tensor-product rule on [0, 1]^degree; a single unit-weight node when degree = 0.
/// Nodes are ordered with the last slot varying fastest.
std::vector<TensorNode> tensor_rule(int degree, int order);

}  // namespace vorhom
