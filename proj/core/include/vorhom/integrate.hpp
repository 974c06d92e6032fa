#pragma once

// Quadrature of forms over geometric chains, Stokes and de Rham checks,
// chain advection along a flow and the integral-invariant classifier.

#include <optional>
#include <string>
#include <vector>

#include "vorhom/chains.hpp"
#include "vorhom/forms.hpp"
#include "vorhom/quadrature.hpp"
#include "vorhom/vector_field.hpp"

namespace vorhom {

/// Sum over cubes of the tensor Gauss-Legendre quadrature of the pulled-back form.
double integrate(const FormField& alpha, const GeometricChain& c, int order = kDefaultQuadratureOrder, double t = 0.0);

struct StokesResult {
  double boundary_integral = 0.0;  // over the geometric boundary of c
  double interior_integral = 0.0;  // of d alpha over c
  double residual = 0.0;
};

StokesResult stokes_check(const FormField& alpha, const GeometricChain& c, int order = kDefaultQuadratureOrder,
                          double t = 0.0);
double stokes_residual(const FormField& alpha, const GeometricChain& c, int order = kDefaultQuadratureOrder,
                       double t = 0.0);

/// Geometric cycle test: 1-chains by endpoint cancellation, higher degrees by
/// integrating a fixed family of test forms over the boundary.
bool is_geometric_cycle(const GeometricChain& c, double tol = 1e-9);

struct DerhamProbe {
  enum class Kind { cycle, boundary };
  std::string label;
  GeometricChain chain;
  Kind kind = Kind::cycle;
};

struct DerhamResult {
  bool closed = false;
  bool exact = false;
  bool inconclusive = false;
  std::vector<std::pair<std::string, double>> integrals;
};

/// closed iff every boundary probe integrates to ~0; exact iff additionally every cycle probe does.
DerhamResult derham_classify(const FormField& alpha, const std::vector<DerhamProbe>& probes, double tol = 1e-8,
                             int order = kDefaultQuadratureOrder, double t = 0.0);

// ---- advection -------------------------------------------------------------

inline constexpr int kDefaultAdvectionSteps = 256;

struct AdvectionOptions {
  int steps = kDefaultAdvectionSteps;  // fixed RK4 steps over [t0, t1]
  int samples = 128;                   // snapshots after t0; must divide steps
  int order = kDefaultQuadratureOrder;  // quadrature order of the node tables
};

/// Position and parameter Jacobian of one node carried from t0 to t by the
/// flow, integrating dJ/dt = grad(u) J alongside dx/dt = u.
struct TransportedNode {
  Point x;
  Mat jacobian;
};

TransportedNode transport(const VectorFieldSpec& u, const Point& x0, const Mat& j0, double t0, double t, double step,
                          const std::string& node_label = {});

class AdvectedChainFamily {
 public:
  AdvectedChainFamily(GeometricChain base, VectorFieldSpec flow, double t0, double t1, AdvectionOptions options,
                      std::vector<double> times, std::vector<GeometricChain> snapshots)
      : base_(std::move(base)), flow_(std::move(flow)), t0_(t0), t1_(t1), options_(options), times_(std::move(times)),
        snapshots_(std::move(snapshots)) {}

  const GeometricChain& base() const noexcept { return base_; }
  const VectorFieldSpec& flow() const noexcept { return flow_; }
  double t0() const noexcept { return t0_; }
  double t1() const noexcept { return t1_; }
  const AdvectionOptions& options() const noexcept { return options_; }
  double step() const noexcept { return (t1_ - t0_) / options_.steps; }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<GeometricChain>& snapshots() const noexcept { return snapshots_; }

 private:
  GeometricChain base_;
  VectorFieldSpec flow_;
  double t0_;
  double t1_;
  AdvectionOptions options_;
  std::vector<double> times_;
  std::vector<GeometricChain> snapshots_;
};

/// Throws AdvectionError naming the node and time when a trajectory enters an exclusion zone.
AdvectedChainFamily advect_chain(const GeometricChain& c, const VectorFieldSpec& u, double t0, double t1,
                                 const AdvectionOptions& options = {});

/// The (k+1)-chain (tau, s) -> Phi_{t0 + tau (t1 - t0)}(sigma(s)) with tau in slot 0,
/// so its boundary is final - initial + lateral faces.
GeometricChain swept_chain(const AdvectedChainFamily& family);

// ---- integral invariants ---------------------------------------------------

enum class InvariantClass { absolute, relative, none };
const char* to_string(InvariantClass c);

struct InvariantProbe {
  std::string label;
  GeometricChain chain;
};

struct BetaCandidate {
  std::string label;
  FormField beta;
};

struct InvariantOptions {
  AdvectionOptions advection;
  /// Probes compared for the relative test; defaults to c and its first cube.
  std::vector<InvariantProbe> probes;
  /// Extra (k-1)-forms tried as witnesses of L_u alpha = d beta; i_u alpha is always tried.
  std::vector<BetaCandidate> betas;
  double absolute_tol = 1e-7;
  double relative_tol = 1e-6;
  double rate_tol = 1e-5;
  int lie_samples = 1000;
};

struct ProbeDrift {
  std::string label;
  bool cycle = false;
  double initial = 0.0;
  double drift = 0.0;
};

struct InvariantReport {
  std::string label;
  std::vector<double> times;
  std::vector<double> values;        // C(t)
  std::vector<double> rates;         // dC/dt by fourth-order differences
  std::vector<double> lie_integral;  // integral of L_u alpha + d_t alpha over c(t)
  double lhs_drift = 0.0;
  double rate_residual = 0.0;  // max over interior samples of |rate - lie| / (1 + |lie|)
  bool rate_ok = false;
  double max_lie_norm = 0.0;   // over the point sample
  int lie_sample_count = 0;
  std::vector<ProbeDrift> probes;
  InvariantClass classification = InvariantClass::none;
  std::optional<std::string> beta_witness;
  double beta_residual = 0.0;
};

InvariantReport invariant_report(const FormField& alpha, const VectorFieldSpec& u, const GeometricChain& c, double t0,
                                 double t1, const InvariantOptions& options = {});

/// Series C(t_i) over the snapshots of an advected family.
std::vector<double> integrate_series(const FormField& alpha, const AdvectedChainFamily& family);

/// dC/dt at every sample of a uniform series, fourth order (one-sided near the ends).
std::vector<double> differentiate_series(const std::vector<double>& values, double dt);

}  // namespace vorhom
