#pragma once

// Kinematic fields of a velocity field: covelocity, velocity-gradient
// decomposition, divergence, vorticity, convective acceleration and the
// Frobenius integrability sequence.

#include <array>
#include <string>
#include <vector>

#include "vorhom/forms.hpp"
#include "vorhom/vector_field.hpp"

namespace vorhom {

/// Spatial covelocity v_s = g(v, .).
FormField covelocity(const VectorFieldSpec& spec);
/// Spacetime covelocity dt + v_s on n + 1 slots (slot 0 = t).
FormField spacetime_covelocity(const VectorFieldSpec& spec);
/// Spacetime velocity d_t + v on n + 1 slots.
MultiVectorField spacetime_velocity(const VectorFieldSpec& spec);

struct VelocityGradient {
  Mat gradient;     // (i, j) = d_j v^i
  Mat strain_rate;  // v^i_j + v^j_i
  Mat spin;         // v^i_j - v^j_i
  double trace_rate = 0.0;  // (1/n) v^k_k
  Mat deviatoric;   // strain_rate - (tr strain_rate / n) I, trace-free
  Vec time_part;    // d_t v^i
};

/// Requires x outside the exclusion zones.
VelocityGradient velocity_gradient(const VectorFieldSpec& spec, double t, const Point& x);

/// div v = v^k_k.
double compressibility(const VectorFieldSpec& spec, double t, const Point& x);
/// True when |div v| < tol on every sample.
bool is_incompressible(const VectorFieldSpec& spec, const std::vector<Point>& samples, double t = 0.0,
                       double tol = 1e-8);

/// Spatial vorticity 2-form omega = d_s v_s.
FormField vorticity_form(const VectorFieldSpec& spec);
/// Spacetime vorticity Omega = d v = dt ^ d_t v_s + omega on n + 1 slots.
FormField spacetime_vorticity(const VectorFieldSpec& spec);

/// 2D dual of omega: the scalar d_1 v_2 - d_2 v_1.
FormField vorticity_scalar(const VectorFieldSpec& spec);
/// 3D dual of omega: w^i = (1/2) e^{ijk} (d_j v_k - d_k v_j), computed from the
/// velocity gradient. This equals #^-1 omega, i.e. the full curl.
MultiVectorField vorticity_vector(const VectorFieldSpec& spec);
/// Factor converting vorticity_vector to the half-curl normalization.
inline constexpr double kHalfCurl = 0.5;
MultiVectorField half_curl_vorticity(const VectorFieldSpec& spec);

/// a = L_v v for the spacetime velocity and covelocity (n + 1 slots).
FormField convective_acceleration(const VectorFieldSpec& spec);

struct ConvectiveSplit {
  Vec time_part;        // d_t v
  Vec convected;        // (v . grad) v
  Vec material;         // d_t v + (v . grad) v, the components of dv_s/dt
  Vec half_grad_v2;     // (1/2) grad v^2
  Vec spatial;          // material + half_grad_v2
  double temporal = 0;  // (1/2) d_t v^2
};

/// Term-by-term evaluation of a = dv_s/dt + (1/2) dv^2 from the velocity gradient.
ConvectiveSplit convective_split(const VectorFieldSpec& spec, double t, const Point& x);

inline constexpr double kVanishTolerance = 1e-7;

struct FrobeniusReport {
  int slots = 0;  // n, or n + 1 when the field is unsteady
  std::array<double, 5> max_norm{};  // I0 = v, I1 = dv, I2 = v^dv, I3 = dv^dv, I4 = v^dv^dv
  std::array<bool, 5> vanishes{};
  int first_vanishing_index = -1;
  int degree_of_integrability = 0;  // slots - first_vanishing_index
  bool surface_orthogonal = false;  // I2 vanishes
  bool completely_integrable = false;
  int sample_count = 0;
};

/// Evaluates I0..I4 of a 1-form on the samples (points on alpha's slots).
FrobeniusReport frobenius_classify(const FormField& v, const std::vector<Point>& samples, double t = 0.0,
                                   double tol = kVanishTolerance);
/// Uses the spatial covelocity when steady and the spacetime covelocity
/// (samples prefixed with t) when unsteady.
FrobeniusReport frobenius_classify(const VectorFieldSpec& spec, const std::vector<Point>& samples, double t = 0.0,
                                   double tol = kVanishTolerance);

}  // namespace vorhom
