#include <cmath>

#include <fmt/format.h>

#include "vorhom/integrate.hpp"

namespace vorhom {

namespace {

struct State {
  Point x;
  Mat j;
};

std::string describe(const Point& x) {
  std::string out;
  for (int i = 0; i < x.size(); ++i) out += fmt::format("{}{:.6g}", i ? ", " : "", x(i));
  return "(" + out + ")";
}

void check_node(const VectorFieldSpec& u, const Point& x, double t, const std::string& label) {
  if (!x.allFinite()) {
    throw AdvectionError(fmt::format("node {} left the domain (non-finite position) at t = {:.6g}", label, t));
  }
  if (u.excluded(x)) {
    throw AdvectionError(fmt::format("node {} entered an exclusion zone at {} at t = {:.6g}", label, describe(x), t));
  }
}

// Stage positions are checked too: a stage inside a zone (or too close for a
// finite-difference gradient) means the trajectory is entering it.
State rate(const VectorFieldSpec& u, double t, const State& s, const std::string& label) {
  check_node(u, s.x, t, label);
  try {
    State d{u(t, s.x), Mat(s.j.rows(), s.j.cols())};
    if (s.j.cols() > 0) d.j = u.gradient(t, s.x) * s.j;
    return d;
  } catch (const AdvectionError&) {
    throw;
  } catch (const NumericError& e) {
    throw AdvectionError(
        fmt::format("node {} reached the edge of an exclusion zone at {} at t = {:.6g}: {}", label, describe(s.x), t,
                    e.what()));
  }
}

State axpy(const State& s, double h, const State& d) { return State{s.x + h * d.x, s.j + h * d.j}; }

State rk4_step(const VectorFieldSpec& u, double t, const State& s, double h, const std::string& label) {
  const State k1 = rate(u, t, s, label);
  const State k2 = rate(u, t + 0.5 * h, axpy(s, 0.5 * h, k1), label);
  const State k3 = rate(u, t + 0.5 * h, axpy(s, 0.5 * h, k2), label);
  const State k4 = rate(u, t + h, axpy(s, h, k3), label);
  return State{s.x + (h / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
               s.j + (h / 6.0) * (k1.j + 2.0 * k2.j + 2.0 * k3.j + k4.j)};
}

std::string node_name(const SingularCube& cube, std::size_t term, const Vec& s) {
  std::string params;
  for (int i = 0; i < s.size(); ++i) params += fmt::format("{}{:.4f}", i ? "," : "", s(i));
  return fmt::format("{}[{}]@({})", cube.label().empty() ? "cube" : cube.label(), term, params);
}

// Cube whose map transports the base cube's points from t0 to t.
SingularCube transported_cube(const SingularCube& base, const VectorFieldSpec& u, double t0, double t, double step) {
  const int k = base.degree();
  return SingularCube(
      k, base.dim(),
      [base, u, t0, t, step](const Vec& s) {
        return transport(u, base(s), Mat(base.dim(), 0), t0, t, step, base.label()).x;
      },
      [base, u, t0, t, step](const Vec& s) {
        return transport(u, base(s), base.jacobian(s), t0, t, step, base.label()).jacobian;
      },
      fmt::format("{}@t={:.6g}", base.label().empty() ? "cube" : base.label(), t));
}

}  // namespace

TransportedNode transport(const VectorFieldSpec& u, const Point& x0, const Mat& j0, double t0, double t, double step,
                          const std::string& node_label) {
  State s{x0, j0};
  const double span = t - t0;
  if (span == 0.0) return TransportedNode{s.x, s.j};
  if (!(std::abs(step) > 0.0)) throw NumericError("transport step must be non-zero");
  const int m = std::max(1, static_cast<int>(std::ceil(std::abs(span / step) - 1e-9)));
  const double h = span / m;
  double time = t0;
  const std::string label = node_label.empty() ? "node" : node_label;
  for (int i = 0; i < m; ++i) {
    s = rk4_step(u, time, s, h, label);
    time = t0 + (i + 1) * h;
    check_node(u, s.x, time, label);
  }
  return TransportedNode{s.x, s.j};
}

AdvectedChainFamily advect_chain(const GeometricChain& c, const VectorFieldSpec& u, double t0, double t1,
                                 const AdvectionOptions& options) {
  if (options.steps < 1) throw NumericError("advection needs at least one step");
  if (options.samples < 1 || options.steps % options.samples != 0) {
    throw NumericError("advection samples must divide the step count");
  }
  if (c.dim() != u.dim() && !c.empty()) throw DegreeError("chain and flow live in spaces of different dimension");
  const int stride = options.steps / options.samples;
  const double h = (t1 - t0) / options.steps;

  std::vector<double> times;
  for (int i = 0; i <= options.samples; ++i) times.push_back(t0 + i * stride * h);
  std::vector<GeometricChain> snapshots(times.size(), GeometricChain(c.degree(), c.dim()));

  std::size_t term_index = 0;
  for (const auto& [coef, cube] : c.terms()) {
    const auto rule = tensor_rule(cube.degree(), options.order);
    std::vector<std::shared_ptr<SingularCube::NodeTable>> tables(times.size());
    for (auto& table : tables) {
      table = std::make_shared<SingularCube::NodeTable>();
      table->order = options.order;
      table->points.reserve(rule.size());
      table->jacobians.reserve(rule.size());
    }
    for (const auto& node : rule) {
      const std::string label = node_name(cube, term_index, node.s);
      State s{cube(node.s), cube.jacobian(node.s)};
      check_node(u, s.x, t0, label);
      tables[0]->points.push_back(s.x);
      tables[0]->jacobians.push_back(s.j);
      for (int step = 0; step < options.steps; ++step) {
        const double time = t0 + step * h;
        s = rk4_step(u, time, s, h, label);
        check_node(u, s.x, time + h, label);
        if ((step + 1) % stride == 0) {
          const auto idx = static_cast<std::size_t>((step + 1) / stride);
          tables[idx]->points.push_back(s.x);
          tables[idx]->jacobians.push_back(s.j);
        }
      }
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
      SingularCube moved = (i == 0) ? cube : transported_cube(cube, u, t0, times[i], h);
      moved.set_nodes(tables[i]);
      snapshots[i].add(coef, std::move(moved));
    }
    ++term_index;
  }
  return AdvectedChainFamily(c, u, t0, t1, options, std::move(times), std::move(snapshots));
}

GeometricChain swept_chain(const AdvectedChainFamily& family) {
  if (family.times().size() < 2) throw NumericError("a swept chain needs at least two snapshots");
  const GeometricChain& base = family.base();
  if (base.degree() + 1 > kMaxSlots) throw DegreeError("swept chain degree exceeds four");
  const VectorFieldSpec& u = family.flow();
  const double t0 = family.t0();
  const double span = family.t1() - t0;
  const double h = family.step();
  GeometricChain out(base.degree() + 1, base.dim());
  for (const auto& [coef, cube] : base.terms()) {
    const int k = cube.degree();
    auto split = [k](const Vec& v) { return std::pair<double, Vec>(v(0), v.tail(k)); };
    out.add(coef, SingularCube(
                      k + 1, cube.dim(),
                      [cube, u, t0, span, h, split](const Vec& v) {
                        const auto [tau, s] = split(v);
                        return transport(u, cube(s), Mat(cube.dim(), 0), t0, t0 + tau * span, h, cube.label()).x;
                      },
                      [cube, u, t0, span, h, split, k](const Vec& v) {
                        const auto [tau, s] = split(v);
                        const double t = t0 + tau * span;
                        const auto moved = transport(u, cube(s), cube.jacobian(s), t0, t, h, cube.label());
                        Mat j(cube.dim(), k + 1);
                        j.col(0) = span * u(t, moved.x);
                        if (k > 0) j.rightCols(k) = moved.jacobian;
                        return j;
                      },
                      fmt::format("swept({})", cube.label().empty() ? "cube" : cube.label())));
  }
  return out;
}

}  // namespace vorhom
