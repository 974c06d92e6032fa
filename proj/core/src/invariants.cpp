#include <algorithm>
#include <cmath>
#include <limits>

#include "vorhom/integrate.hpp"

namespace vorhom {

const char* to_string(InvariantClass c) {
  switch (c) {
    case InvariantClass::absolute:
      return "absolute";
    case InvariantClass::relative:
      return "relative";
    case InvariantClass::none:
      break;
  }
  return "none";
}

std::vector<double> integrate_series(const FormField& alpha, const AdvectedChainFamily& family) {
  std::vector<double> out;
  out.reserve(family.times().size());
  for (std::size_t i = 0; i < family.times().size(); ++i) {
    out.push_back(integrate(alpha, family.snapshots()[i], family.options().order, family.times()[i]));
  }
  return out;
}

std::vector<double> differentiate_series(const std::vector<double>& f, double dt) {
  const std::size_t n = f.size();
  if (n < 5) throw NumericError("time differences need at least five samples");
  const double c = 1.0 / (12.0 * dt);
  std::vector<double> d(n);
  d[0] = c * (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]);
  d[1] = c * (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]);
  for (std::size_t i = 2; i + 2 < n; ++i) d[i] = c * (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]);
  d[n - 2] = -c * (-3 * f[n - 1] - 10 * f[n - 2] + 18 * f[n - 3] - 6 * f[n - 4] + f[n - 5]);
  d[n - 1] = -c * (-25 * f[n - 1] + 48 * f[n - 2] - 36 * f[n - 3] + 16 * f[n - 4] - 3 * f[n - 5]);
  return d;
}

namespace {

double max_drift(const std::vector<double>& series) {
  double m = 0.0;
  for (double v : series) m = std::max(m, std::abs(v - series.front()));
  return m;
}

struct TimedPoint {
  double t;
  Point x;
};

// Evenly strided subset of the node tables of every snapshot.
std::vector<TimedPoint> lie_sample_points(const AdvectedChainFamily& family, int wanted) {
  std::vector<TimedPoint> all;
  for (std::size_t i = 0; i < family.times().size(); ++i) {
    for (const auto& [coef, cube] : family.snapshots()[i].terms()) {
      if (!cube.nodes()) continue;
      for (const auto& p : cube.nodes()->points) all.push_back(TimedPoint{family.times()[i], p});
    }
  }
  if (static_cast<int>(all.size()) <= wanted) return all;
  std::vector<TimedPoint> out;
  out.reserve(static_cast<std::size_t>(wanted));
  const double stride = static_cast<double>(all.size() - 1) / (wanted - 1);
  for (int i = 0; i < wanted; ++i) out.push_back(all[static_cast<std::size_t>(std::lround(i * stride))]);
  return out;
}

}  // namespace

InvariantReport invariant_report(const FormField& alpha, const VectorFieldSpec& u, const GeometricChain& c, double t0,
                                 double t1, const InvariantOptions& options) {
  if (alpha.degree() != c.degree()) throw DegreeError("invariant report needs a form and chain of equal degree");
  if (alpha.dim() != u.dim()) throw DegreeError("form and flow live on different slot counts");
  InvariantReport r;
  const AdvectedChainFamily family = advect_chain(c, u, t0, t1, options.advection);
  r.times = family.times();
  r.values = integrate_series(alpha, family);
  r.lhs_drift = max_drift(r.values);

  FormField lie = lie_derivative(u.field(), alpha);
  if (!alpha.steady()) lie = lie + time_derivative(alpha);
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    r.lie_integral.push_back(integrate(lie, family.snapshots()[i], options.advection.order, r.times[i]));
  }
  if (r.times.size() >= 5) {
    r.rates = differentiate_series(r.values, r.times[1] - r.times[0]);
    for (std::size_t i = 1; i + 1 < r.times.size(); ++i) {
      r.rate_residual =
          std::max(r.rate_residual, std::abs(r.rates[i] - r.lie_integral[i]) / (1.0 + std::abs(r.lie_integral[i])));
    }
    r.rate_ok = r.rate_residual < options.rate_tol;
  }

  const auto samples = lie_sample_points(family, options.lie_samples);
  r.lie_sample_count = static_cast<int>(samples.size());
  for (const auto& p : samples) r.max_lie_norm = std::max(r.max_lie_norm, lie(p.t, p.x).max_abs());

  std::vector<InvariantProbe> probes = options.probes;
  if (probes.empty()) {
    probes.push_back(InvariantProbe{"chain", c});
    if (c.size() > 1) probes.push_back(InvariantProbe{"first cube", GeometricChain(c.terms().front().second)});
  }
  for (const auto& probe : probes) {
    ProbeDrift d;
    d.label = probe.label;
    d.cycle = is_geometric_cycle(probe.chain);
    const auto series = integrate_series(alpha, advect_chain(probe.chain, u, t0, t1, options.advection));
    d.initial = series.front();
    d.drift = max_drift(series);
    r.probes.push_back(d);
  }

  if (r.max_lie_norm < options.absolute_tol) {
    r.classification = InvariantClass::absolute;
  } else {
    bool any_cycle = false;
    bool cycles_constant = true;
    bool some_open_drifts = false;
    for (const auto& d : r.probes) {
      const bool constant = d.drift < options.relative_tol * (1.0 + std::abs(d.initial));
      if (d.cycle) {
        any_cycle = true;
        cycles_constant = cycles_constant && constant;
      } else if (!constant) {
        some_open_drifts = true;
      }
    }
    if (any_cycle && cycles_constant && some_open_drifts) r.classification = InvariantClass::relative;
  }

  if (r.classification == InvariantClass::relative) {
    std::vector<BetaCandidate> candidates = options.betas;
    if (alpha.degree() >= 1) candidates.push_back(BetaCandidate{"i_u alpha", interior_product(u.field(), alpha)});
    double best = std::numeric_limits<double>::infinity();
    for (const auto& cand : candidates) {
      const FormField d_beta = exterior_derivative(cand.beta);
      double residual = 0.0;
      for (const auto& p : samples) residual = std::max(residual, (lie(p.t, p.x) - d_beta(p.t, p.x)).max_abs());
      if (residual < best) best = residual;
      if (residual < 1e-6 * (1.0 + r.max_lie_norm)) {
        r.beta_witness = cand.label;
        r.beta_residual = residual;
        break;
      }
    }
    if (!r.beta_witness) r.beta_residual = best;
  }
  return r;
}

}  // namespace vorhom
