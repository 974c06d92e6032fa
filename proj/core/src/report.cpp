#include "vorhom/report.hpp"

#include <fmt/format.h>

#include <json.hpp>

namespace vorhom {

std::string format_number(double v) { return fmt::format("{}", v); }

std::string to_json(const InvariantReport& r, int indent) {
  nlohmann::ordered_json j;
  j["label"] = r.label;
  j["classification"] = to_string(r.classification);
  j["lhs_drift"] = r.lhs_drift;
  j["rate_residual"] = r.rate_residual;
  j["rate_ok"] = r.rate_ok;
  j["max_lie_norm"] = r.max_lie_norm;
  j["lie_sample_count"] = r.lie_sample_count;
  if (r.beta_witness) {
    j["beta_witness"] = *r.beta_witness;
  } else {
    j["beta_witness"] = nullptr;
  }
  j["beta_residual"] = r.beta_residual;
  auto probes = nlohmann::ordered_json::array();
  for (const auto& p : r.probes) {
    probes.push_back({{"label", p.label}, {"cycle", p.cycle}, {"initial", p.initial}, {"drift", p.drift}});
  }
  j["probes"] = probes;
  auto series = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    nlohmann::ordered_json row = {{"t", r.times[i]}, {"C", r.values[i]}};
    if (i < r.rates.size()) row["dCdt"] = r.rates[i];
    if (i < r.lie_integral.size()) row["lie_integral"] = r.lie_integral[i];
    series.push_back(row);
  }
  j["series"] = series;
  return j.dump(indent);
}

std::string to_text(const InvariantReport& r) {
  std::string out;
  if (!r.label.empty()) out += fmt::format("invariant: {}\n", r.label);
  out += fmt::format("classification: {}\n", to_string(r.classification));
  out += fmt::format("C(t0): {}\n", r.values.empty() ? 0.0 : r.values.front());
  out += fmt::format("lhs_drift: {}\n", r.lhs_drift);
  out += fmt::format("rate_residual: {} ({})\n", r.rate_residual, r.rate_ok ? "ok" : "exceeds tolerance");
  out += fmt::format("max_lie_norm: {} over {} samples\n", r.max_lie_norm, r.lie_sample_count);
  if (r.beta_witness) out += fmt::format("beta_witness: {} (residual {})\n", *r.beta_witness, r.beta_residual);
  for (const auto& p : r.probes) {
    out += fmt::format("probe {}: {} initial={} drift={}\n", p.label, p.cycle ? "cycle" : "open", p.initial, p.drift);
  }
  out += fmt::format("samples: {}\n", r.times.size());
  return out;
}

std::string to_csv(const InvariantReport& r) {
  std::string out = "t,C,dCdt,lie_integral\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    out += fmt::format("{},{},{},{}\n", r.times[i], r.values[i], i < r.rates.size() ? r.rates[i] : 0.0,
                       i < r.lie_integral.size() ? r.lie_integral[i] : 0.0);
  }
  return out;
}

}  // namespace vorhom
