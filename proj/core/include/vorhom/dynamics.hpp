#pragma once

// Residual checkers for the balance laws of an inviscid fluid: continuity,
// mass balance on 3-chains, Euler momentum, power, Bernoulli head, the
// Magnus form and the barotropic condition.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vorhom/integrate.hpp"
#include "vorhom/kinematics.hpp"

namespace vorhom {

struct FluidState {
  VectorFieldSpec flow;
  FormField density;                  // 0-form rho > 0
  std::optional<FormField> pressure;  // 0-form pi
  std::optional<FormField> force;     // spatial 1-form F; zero when absent
  std::optional<FormField> potential;  // U with F = -dU
  std::optional<FormField> temporal_force;  // F_0, the dt component of the force; zero when absent
  std::function<double(double)> barotropic;  // pi -> rho, optional

  /// F, or -dU when only a potential is given, or zero.
  FormField force_form() const;
  bool conservative() const { return potential.has_value() || !force.has_value(); }
};

struct Thresholds {
  double atol = 1e-8;
  double rtol = 1e-6;
};

struct BalanceReport {
  std::string check;
  bool applicable = true;
  std::string note;
  int samples = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double max_scale = 0.0;   // largest term magnitude seen
  double worst_ratio = 0.0;  // max of residual / (atol + rtol * scale)
  bool pass = false;
  /// Secondary identities as (name, max residual).
  std::vector<std::pair<std::string, double>> extras;
  /// Per-item values (per streamline, per chain).
  std::vector<std::pair<std::string, double>> entries;
};

/// Uniform grid of `per_axis` points per axis on [lo, hi], omitting points in
/// (or within `margin` of) an exclusion zone.
std::vector<Point> uniform_grid(const Point& lo, const Point& hi, int per_axis, const ExclusionSet& zones = {},
                                double margin = 0.0);

/// d_t rho + div(rho v); also (1/rho)(d_t rho + v(rho)) + div v.
BalanceReport continuity_residual(const FluidState& s, const std::vector<Point>& grid, double t = 0.0,
                                  const Thresholds& th = {});

/// |dM/dt + Phi[boundary c3]| with M = integral of #rho and Phi = integral of #(rho v).
BalanceReport mass_balance_cochain(const FluidState& s, const GeometricChain& c3, double t = 0.0,
                                   const Thresholds& th = {}, int order = kDefaultQuadratureOrder,
                                   double time_step = 1e-3);

/// rho (d_t v + v . grad v) - F + grad pi; extras: per-mass form, Lie form
/// (spatial and temporal parts) and the temporal balance F_0 + (1/2) rho d_t v^2 - d_t pi.
BalanceReport euler_residual(const FluidState& s, const std::vector<Point>& grid, double t = 0.0,
                             const Thresholds& th = {});

/// v . F - [d_t + v . grad](1/2 rho v^2 + pi) - (1/2) rho (div v) v^2, taken
/// literally; not applicable when d_t pi does not vanish. With a potential
/// also dH/dt + (1/2) rho (div v) v^2.
BalanceReport power_balance_residual(const FluidState& s, const std::vector<Point>& grid, double t = 0.0,
                                     const Thresholds& th = {});

/// Integrates streamlines from the seeds and tracks H = U + 1/2 rho v^2 + pi.
/// Not applicable unless the state is steady, incompressible and conservative.
BalanceReport bernoulli_check(const FluidState& s, const std::vector<Point>& seeds, double span, int steps = 256,
                              const Thresholds& th = {});

struct MagnusResult {
  FormField i_p_Omega;  // spacetime 1-form on n + 1 slots
  BalanceReport report;
};

/// i_p Omega against F - d(1/2 rho v^2 + pi) + 1/2 v^2 d rho (spatial part), and
/// -dH + 1/2 v^2 d rho for conservative forces.
MagnusResult magnus_force(const FluidState& s, const std::vector<Point>& grid, double t = 0.0,
                          const Thresholds& th = {});

/// max |d rho ^ d pi| (pass below atol); extras: d((1/rho) d pi) and, when a
/// law is given, |rho - law(pi)|.
BalanceReport barotropic_check(const FluidState& s, const std::vector<Point>& grid, double t = 0.0,
                               const Thresholds& th = {});

}  // namespace vorhom
