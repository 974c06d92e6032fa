#include "vorhom/vector_field.hpp"

#include <fmt/format.h>

namespace vorhom {

VectorFieldSpec::VectorFieldSpec(MultiVectorField velocity, ExclusionSet exclusions)
    : VectorFieldSpec(velocity, Metric(velocity.dim()), std::move(exclusions)) {}

VectorFieldSpec::VectorFieldSpec(MultiVectorField velocity, Metric metric, ExclusionSet exclusions)
    : velocity_(std::move(velocity)), metric_(std::move(metric)), exclusions_(std::move(exclusions)) {
  if (velocity_.degree() != 1) throw DegreeError("a velocity field has degree 1");
  if (metric_.dim() != velocity_.dim()) throw DegreeError("metric and velocity live on different slot counts");
  if (!exclusions_.empty()) velocity_.set_exclusions(exclusions_, 0);
}

VectorFieldSpec VectorFieldSpec::zero(int dim) { return VectorFieldSpec(MultiVectorField::zero(dim, 1)); }

VectorFieldSpec VectorFieldSpec::from_functions(int dim, std::function<Vec(double, const Point&)> v,
                                                std::function<Mat(double, const Point&)> gradient, bool steady,
                                                ExclusionSet exclusions) {
  MultiVectorField::PartialFn partial;
  if (gradient) {
    partial = [gradient](double t, const Point& x, int j) -> MultiVectorValue {
      return from_vector(gradient(t, x).col(j));
    };
  }
  MultiVectorField field(
      dim, 1, [v](double t, const Point& x) { return from_vector(v(t, x)); }, partial);
  field.set_steady(steady);
  return VectorFieldSpec(std::move(field), std::move(exclusions));
}

Mat VectorFieldSpec::gradient(double t, const Point& x) const {
  const int n = dim();
  Mat g(n, n);
  for (int j = 0; j < n; ++j) g.col(j) = to_vector(velocity_.partial(t, x, j));
  return g;
}

void VectorFieldSpec::require_outside(const Point& x) const {
  if (excluded(x)) {
    std::string where;
    for (int i = 0; i < x.size(); ++i) where += fmt::format("{}{:.6g}", i ? ", " : "", x(i));
    throw NumericError("evaluation point (" + where + ") lies inside an exclusion zone");
  }
}

}  // namespace vorhom
