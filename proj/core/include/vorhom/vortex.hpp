#pragma once

// Circulation and vorticity flux, their homology invariance, winding numbers,
// the Kelvin and Helmholtz checks and vortex tubes.

#include <optional>
#include <string>
#include <vector>

#include "vorhom/integrate.hpp"
#include "vorhom/kinematics.hpp"

namespace vorhom {

/// Integral of the covelocity over a 1-chain.
double circulation(const VectorFieldSpec& spec, const GeometricChain& c, int order = kDefaultQuadratureOrder,
                   double t = 0.0);
/// Integral of the vorticity 2-form over a 2-chain.
double vorticity_flux(const VectorFieldSpec& spec, const GeometricChain& c, int order = kDefaultQuadratureOrder,
                      double t = 0.0);

struct InvarianceReport {
  int degree = 0;       // 1: circulation, 2: flux
  double first = 0.0;
  double second = 0.0;
  double residual = 0.0;
  bool pass = false;
  // With a witness w (boundary c' - c): the integral of d(alpha) over w and
  // the Stokes mismatch between its boundary and c' - c.
  std::optional<double> witness_integral;
  std::optional<double> witness_stokes_residual;
};

/// Compares the circulations (degree 1) or fluxes (degree 2) of two chains;
/// passes when the residual is below tol * (1 + |value|).
InvarianceReport homology_invariance_check(const VectorFieldSpec& spec, const GeometricChain& c,
                                           const GeometricChain& c_prime,
                                           const std::optional<GeometricChain>& witness = std::nullopt,
                                           double tol = 1e-6, int order = kDefaultQuadratureOrder, double t = 0.0);

struct CirculationReport {
  std::string cycle_id;
  double value = 0.0;
  double strength = 0.0;  // circulation per unit winding
  std::optional<long> winding;
  double integrality_residual = 0.0;  // |C / strength - round(C / strength)|
};

/// Throws NumericError when the loop is not closed within 1e-10.
CirculationReport winding_circulation(const VectorFieldSpec& spec, const GeometricChain& loop, double strength,
                                      const std::string& cycle_id = {}, int order = kDefaultQuadratureOrder,
                                      double t = 0.0);

struct KelvinReport {
  InvariantReport invariant;
  double relative_drift = 0.0;
  double max_cycle_lie_integral = 0.0;  // max over samples of |integral of L_v v_s + d_t v_s|
  bool pass = false;
};

/// Advects a 1-cycle along the flow and tracks its circulation.
KelvinReport kelvin_check(const VectorFieldSpec& spec, const GeometricChain& cycle, double t0, double t1,
                          const InvariantOptions& options = {}, double tol = 1e-5);

struct HelmholtzReport {
  InvariantReport invariant;
  double relative_drift = 0.0;
  bool pass = false;
  // Pointwise identities on 3D samples; absent for 2D flows.
  std::optional<double> max_lie_omega_Omega;  // |L_w Omega|
  std::optional<double> max_lie_omega_v;      // |L_w v_s - d(v_s(w))|
};

HelmholtzReport helmholtz_check(const VectorFieldSpec& spec, const GeometricChain& surface, double t0, double t1,
                                const std::vector<Point>& samples, const InvariantOptions& options = {},
                                double tol = 1e-5, double pointwise_tol = 1e-6);

struct VortexTube {
  GeometricChain tube;  // swept 3-chain
  GeometricChain cap_start;
  GeometricChain cap_end;
  double parameter_length = 0.0;  // pseudo-time along the vortex lines
  double flux_start = 0.0;        // of the 2-form omega
  double flux_end = 0.0;
  double half_curl_flux_start = 0.0;  // the same flux in the half-curl normalization
  double half_curl_flux_end = 0.0;
  double lateral_flux = 0.0;
  std::vector<double> section_flux;  // at every intermediate cross-section
  double relative_spread = 0.0;      // max |flux_i - flux_start| / |flux_start|
  bool transverse = false;           // integrand sign constant on both caps
  bool pass = false;
};

/// Sweeps a 2-chain along the vortex lines dx/ds = w for pseudo-time
/// length / max|w| on the cap. Throws NumericError on a degenerate cap.
VortexTube vortex_tube(const VectorFieldSpec& spec, const GeometricChain& cap, double length, int steps = 64,
                       int order = kDefaultQuadratureOrder, double t = 0.0, double tol = 1e-6);

}  // namespace vorhom
