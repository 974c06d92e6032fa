#pragma once

// A (possibly time-dependent) velocity field with its metric and deleted sets.

#include "vorhom/forms.hpp"

namespace vorhom {

class VectorFieldSpec {
 public:
  VectorFieldSpec() : metric_(1) {}
  /// Exclusion zones are attached to the velocity field so that its finite
  /// differences never sample inside them.
  explicit VectorFieldSpec(MultiVectorField velocity, ExclusionSet exclusions = {});
  VectorFieldSpec(MultiVectorField velocity, Metric metric, ExclusionSet exclusions = {});

  static VectorFieldSpec zero(int dim);
  /// Closure-based constructor; `gradient` returns (i, j) = d_j v^i.
  static VectorFieldSpec from_functions(int dim, std::function<Vec(double, const Point&)> v,
                                        std::function<Mat(double, const Point&)> gradient = {}, bool steady = true,
                                        ExclusionSet exclusions = {});

  int dim() const noexcept { return velocity_.dim(); }
  bool steady() const noexcept { return velocity_.steady(); }
  const MultiVectorField& field() const noexcept { return velocity_; }
  const Metric& metric() const noexcept { return metric_; }
  const ExclusionSet& exclusions() const noexcept { return exclusions_; }

  Vec operator()(double t, const Point& x) const { return to_vector(velocity_(t, x)); }
  /// (i, j) = d_j v^i.
  Mat gradient(double t, const Point& x) const;
  Vec time_derivative(double t, const Point& x) const { return to_vector(velocity_.time_partial(t, x)); }

  bool excluded(const Point& x) const { return find_exclusion(exclusions_, x) != nullptr; }
  /// Throws NumericError when x lies inside an exclusion zone.
  void require_outside(const Point& x) const;

 private:
  MultiVectorField velocity_;
  Metric metric_;
  ExclusionSet exclusions_;
};

}  // namespace vorhom
