#include "vorhom/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace vorhom {

namespace {

// Roots of P_n by Newton iteration from the Chebyshev-like initial guess,
// weights from the derivative; then mapped from [-1, 1] to [0, 1].
GaussRule compute_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Refresh the derivative at the converged root.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = 0.5 * (1.0 - x);
    rule.nodes[hi] = 0.5 * (1.0 + x);
    rule.weights[lo] = 0.5 * w;
    rule.weights[hi] = 0.5 * w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.5;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  if (order < 1 || order > 256) throw NumericError("quadrature order must lie in 1..256");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussRule>(compute_rule(order));
  return *slot;
}

std::vector<TensorNode> tensor_rule(int degree, int order) {
  if (degree < 0 || degree > kMaxSlots) throw DegreeError("tensor rule degree must lie in 0..4");
  const GaussRule& rule = gauss_legendre(order);
  std::vector<TensorNode> out{TensorNode{Vec(0), 1.0}};
  for (int d = 0; d < degree; ++d) {
    std::vector<TensorNode> next;
    next.reserve(out.size() * rule.nodes.size());
    for (const auto& node : out) {
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        Vec s(d + 1);
        s.head(d) = node.s;
        s(d) = rule.nodes[i];
        next.push_back(TensorNode{s, node.weight * rule.weights[i]});
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace vorhom
