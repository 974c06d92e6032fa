#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <numeric>
#include <random>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "vorhom/complex.hpp"
#include "vorhom/report.hpp"
#include "vorhom/scenario.hpp"
#include "vorhom/vortex.hpp"

namespace vorhom::cli {

namespace {

enum class Status { pass, fail, na, info };

const char* status_word(Status s) {
  switch (s) {
    case Status::pass:
      return "PASS";
    case Status::fail:
      return "FAIL";
    case Status::na:
      return "N/A";
    case Status::info:
      return "INFO";
  }
  return "?";
}

struct Row {
  std::string name;
  std::string value;
  std::string expected;
  Status status = Status::info;
  std::string detail;
};

struct Section {
  std::string title;
  std::vector<Row> rows;
};

std::string num(double v) { return format_number(v); }

std::string point_text(const Point& p) {
  std::vector<std::string> parts;
  for (int i = 0; i < p.size(); ++i) parts.push_back(num(p(i)));
  return fmt::format("({})", fmt::join(parts, ", "));
}

Row judged(std::string name, double value, std::string expected, bool pass, std::string detail = {}) {
  return Row{std::move(name), num(value), std::move(expected), pass ? Status::pass : Status::fail, std::move(detail)};
}

Row not_applicable(std::string name, std::string detail) {
  return Row{std::move(name), "", "", Status::na, std::move(detail)};
}

Row info(std::string name, std::string value, std::string detail = {}) {
  return Row{std::move(name), std::move(value), "", Status::info, std::move(detail)};
}

// Runs one check, turning library errors into a failed row that names it.
template <class F>
void guarded(Section& sec, const std::string& name, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    sec.rows.push_back(Row{name, "", "", Status::fail, e.what()});
  }
}

// ---------------------------------------------------------------- geometry

struct Site {
  Point center;
  double clearance = 0.0;
};

double clearance_at(const Scenario& s, const Point& p) {
  double c = std::numeric_limits<double>::infinity();
  for (int i = 0; i < s.dim; ++i) c = std::min({c, p(i) - s.lo(i), s.hi(i) - p(i)});
  for (const auto& z : s.exclusions) c = std::min(c, z.distance(p) - z.radius);
  return c;
}

// True when every piecewise definition keeps one interval on the ball of
// radius r about p (sampled on a polar grid in the xy-plane and along z).
bool smooth_ball(const Scenario& s, const Point& p, double r) {
  const std::vector<int> ref = s.piece_signature(0.0, p);
  if (ref.empty()) return true;
  for (int i = 1; i <= 8; ++i) {
    for (int k = 0; k < 32; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / 32;
      Point q = p;
      q(0) += r * i / 8 * std::cos(phi);
      q(1) += r * i / 8 * std::sin(phi);
      if (s.dim == 3) q(2) += r * i / 8 * std::sin(3.0 * phi);
      if (s.piece_signature(0.0, q) != ref) return false;
    }
  }
  return true;
}

// The sample point farthest from exclusions, bounds and piecewise seams;
// first one on ties. Probes use radius clearance / 2.
Site clear_site(const Scenario& s) {
  Site best{Point::Zero(s.dim), -1.0};
  for (const auto& p : uniform_grid(s.lo, s.hi, 9)) {
    double c = clearance_at(s, p);
    for (int halvings = 0; c > 0.0 && halvings < 12 && !smooth_ball(s, p, c); ++halvings) c *= 0.5;
    if (c > best.clearance + 1e-12) best = Site{p, c};
  }
  return best;
}

Point planar_center(const Exclusion& z, int dim) {
  Point c = Point::Zero(dim);
  c(0) = z.center(0);
  c(1) = z.center(1);
  return c;
}

struct Puncture {
  std::string label;
  Point center;
  double radius = 0.0;
};

// Exclusions the xy-plane loops can wind around: points, or lines along z.
std::vector<Puncture> punctures(const Scenario& s) {
  std::vector<Puncture> out;
  for (const auto& z : s.exclusions) {
    if (z.kind == Exclusion::Kind::line && std::abs(std::abs(z.direction(2)) - 1.0) > 1e-12) continue;
    out.push_back({fmt::format("({}, {})", num(z.center(0)), num(z.center(1))), planar_center(z, s.dim), z.radius});
  }
  return out;
}

double revolution_time(const VectorFieldSpec& v, const Point& center, double r) {
  constexpr int n = 64;
  double speed = 0.0;
  for (int i = 0; i < n; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / n;
    Point p = center;
    p(0) += r * std::cos(phi);
    p(1) += r * std::sin(phi);
    speed += v(0.0, p).norm();
  }
  speed /= n;
  return speed < 1e-12 ? 1.0 : 2.0 * std::numbers::pi * r / speed;
}

// Advection interval for a loop: one revolution when it carries circulation, else unit time.
double advection_time(const VectorFieldSpec& v, const Point& center, double r, int order) {
  const double c = circulation(v, circle(center, r), order);
  return std::abs(c) > 1e-9 ? revolution_time(v, center, r) : 1.0;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------- checks

class Runner {
 public:
  explicit Runner(const RunConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

  Thresholds thresholds() const { return Thresholds{cfg_.atol, cfg_.rtol}; }

  AdvectionOptions advection() const {
    return AdvectionOptions{cfg_.steps, std::gcd(cfg_.steps, 128), cfg_.quad_order};
  }

  void goldens(const Scenario& s, Section& sec) {
    for (const auto& g : evaluate_goldens(s, cfg_.quad_order, 1e-8)) {
      sec.rows.push_back(Row{g.label, num(g.value), g.expected_text, g.pass ? Status::pass : Status::fail,
                             fmt::format("{}, residual {}", to_string(g.tag), num(g.residual))});
    }
  }

  void homology(const std::string& which, Section& sec) {
    std::vector<std::string> names;
    if (which.empty()) {
      names = golden_complex_names();
    } else {
      names.push_back(which);
    }
    for (const auto& n : names) {
      guarded(sec, n, [&] {
        const bool shipped = std::find(golden_complex_names().begin(), golden_complex_names().end(), n) !=
                             golden_complex_names().end();
        const CubicalComplex c = shipped ? golden_complex(n) : load_complex(n);
        const std::vector<int> b = betti_numbers(c);
        const std::string got = fmt::format("[{}]", fmt::join(b, ", "));
        sec.rows.push_back(info("complex", c.name()));
        sec.rows.push_back(info("betti", got));
        if (shipped) {
          const std::vector<int> want = golden_betti(n);
          sec.rows.push_back(Row{n, got, fmt::format("[{}]", fmt::join(want, ", ")),
                                 b == want ? Status::pass : Status::fail, ""});
        }
      });
    }
  }

  void stokes(const Scenario& s, Section& sec) {
    const VectorFieldSpec v = s.flow();
    const FormField vs = covelocity(v);
    const Site site = clear_site(s);
    const double r = 0.5 * site.clearance;
    std::vector<std::tuple<std::string, FormField, GeometricChain>> pairs;
    pairs.emplace_back("covelocity on disc", vs, disc(site.center, r));
    for (const auto& p : punctures(s)) {
      pairs.emplace_back("covelocity on annulus around " + p.label, vs, annulus(p.center, 2.0 * p.radius, 3.0 * p.radius));
    }
    if (s.pressure) {
      Point a = site.center;
      Point b = site.center;
      a(0) -= r;
      b(0) += r;
      b(1) += 0.5 * r;
      pairs.emplace_back("pressure on segment", s.scalar(*s.pressure), GeometricChain(segment(a, b)));
    }
    if (s.dim == 3) {
      const Point h = Point::Constant(3, 0.5 * r);
      pairs.emplace_back("vorticity on box", vorticity_form(v), box(site.center - h, site.center + h));
    }
    for (const auto& [label, alpha, c] : pairs) {
      guarded(sec, "stokes/" + label, [&] {
        const StokesResult base = stokes_check(alpha, c, cfg_.quad_order);
        const StokesResult fine = stokes_check(alpha, c, 2 * cfg_.quad_order);
        const double rel = base.residual / (1.0 + std::abs(base.interior_integral));
        const double doubling = std::max(std::abs(fine.boundary_integral - base.boundary_integral),
                                         std::abs(fine.interior_integral - base.interior_integral));
        sec.rows.push_back(judged("stokes/" + label, rel, "< 1e-7 relative", rel < 1e-7 && doubling < 1e-9,
                                  fmt::format("integral {}, order doubling changes {}", num(base.interior_integral),
                                              num(doubling))));
      });
    }
  }

  void derham(const Scenario& s, Section& sec) {
    guarded(sec, "derham/covelocity", [&] {
      const VectorFieldSpec v = s.flow();
      const Site site = clear_site(s);
      std::vector<DerhamProbe> probes;
      for (const auto& p : punctures(s)) {
        probes.push_back({"loop around " + p.label, circle(p.center, 2.0 * p.radius), DerhamProbe::Kind::cycle});
      }
      probes.push_back({"clear loop", circle(site.center, 0.5 * site.clearance), DerhamProbe::Kind::cycle});
      probes.push_back(
          {"boundary of clear disc", disc(site.center, 0.5 * site.clearance).boundary(), DerhamProbe::Kind::boundary});
      const DerhamResult r = derham_classify(covelocity(v), probes, 1e-8, cfg_.quad_order);
      const std::string got = r.exact ? "exact" : (r.closed ? "closed, not exact" : "not closed");
      std::string detail;
      for (const auto& [label, value] : r.integrals) detail += fmt::format("{}{} = {}", detail.empty() ? "" : "; ", label, num(value));
      if (s.declares(Property::irrotational)) {
        sec.rows.push_back(Row{"derham/covelocity", got, "closed", r.closed ? Status::pass : Status::fail, detail});
      } else {
        sec.rows.push_back(info("derham/covelocity", got, detail));
      }
    });
  }

  void circulation_checks(const Scenario& s, Section& sec, bool with_goldens) {
    const VectorFieldSpec v = s.flow();
    for (const auto& g : s.goldens) {
      if (!with_goldens) break;
      if (g.quantity != "circulation") continue;
      guarded(sec, g.label, [&] {
        const GeometricChain c = s.probe_chain(g);
        const double expected = expr::eval(g.expected, {});
        const double value = circulation(v, c, cfg_.quad_order);
        const double res = std::abs(value - expected);
        sec.rows.push_back(Row{g.label, num(value), expr::pretty(g.expected),
                               res <= 1e-8 * (1.0 + std::abs(expected)) ? Status::pass : Status::fail,
                               fmt::format("residual {}", num(res))});
      });
    }
    if (!s.declares(Property::irrotational)) return;
    // Winding quantization around every puncture.
    for (const auto& p : punctures(s)) {
      const std::string name = "winding/around " + p.label;
      guarded(sec, name, [&] {
        const double strength = circulation(v, circle(p.center, 2.0 * p.radius), cfg_.quad_order);
        if (std::abs(strength) < 1e-12) {
          sec.rows.push_back(info(name, "0", "puncture carries no circulation"));
          return;
        }
        for (int turns : {1, 2, 3}) {
          const CirculationReport r =
              winding_circulation(v, circle(p.center, 2.0 * p.radius, turns), strength, p.label, cfg_.quad_order);
          sec.rows.push_back(judged(fmt::format("{} turns={}", name, turns), r.value,
                                    fmt::format("{} x {}", turns, num(strength)),
                                    r.winding && *r.winding == turns && r.integrality_residual < 1e-6,
                                    fmt::format("C/strength off integer by {}", num(r.integrality_residual))));
        }
      });
    }
  }

  void homology_invariance(const Scenario& s, Section& sec) {
    if (!s.declares(Property::irrotational)) {
      sec.rows.push_back(not_applicable("invariance/circulation", "scenario is not irrotational"));
      return;
    }
    const VectorFieldSpec v = s.flow();
    std::vector<std::tuple<std::string, GeometricChain, GeometricChain>> pairs;
    for (const auto& p : punctures(s)) {
      Point shifted = p.center;
      shifted(0) += rng_.uniform(-0.4, 0.4) * p.radius;
      shifted(1) += rng_.uniform(-0.4, 0.4) * p.radius;
      pairs.emplace_back("around " + p.label, circle(p.center, 2.0 * p.radius),
                         circle(shifted, rng_.uniform(2.5, 3.0) * p.radius));
    }
    const Site site = clear_site(s);
    Point shifted = site.center;
    const double r = 0.5 * site.clearance;
    shifted(0) += rng_.uniform(-0.2, 0.2) * r;
    shifted(1) += rng_.uniform(-0.2, 0.2) * r;
    pairs.emplace_back("clear region", circle(site.center, r), circle(shifted, rng_.uniform(0.5, 0.9) * r));
    for (const auto& [label, a, b] : pairs) {
      guarded(sec, "invariance/circulation " + label, [&] {
        const InvarianceReport r2 = homology_invariance_check(v, a, b, std::nullopt, 1e-6, cfg_.quad_order);
        sec.rows.push_back(judged("invariance/circulation " + label, r2.residual, "< 1e-6 relative", r2.pass,
                                  fmt::format("{} vs {}", num(r2.first), num(r2.second))));
      });
    }
  }

  void identities_3d(const Scenario& s, Section& sec) {
    if (s.dim != 3) return;
    guarded(sec, "identity/div omega", [&] {
      const VectorFieldSpec v = s.flow();
      const MultiVectorField w = vorticity_vector(v);
      const MultiVectorField from_dual = divergence(sharp_inverse(covelocity(v)));
      const MultiVectorField div_w = divergence(w);
      double a = 0.0;
      double b = 0.0;
      for (const auto& p : s.grid(std::min(cfg_.grid, 12), 0.05)) {
        a = std::max(a, div_w(0.0, p).max_abs());
        b = std::max(b, (from_dual(0.0, p) - w(0.0, p)).max_abs());
      }
      sec.rows.push_back(judged("identity/div omega", a, "< 1e-6", a < 1e-6));
      sec.rows.push_back(judged("identity/omega = div #^-1 v_s", b, "< 1e-6", b < 1e-6));
    });
  }

  InvariantReport write_csv(const InvariantReport& r, const std::string& tag) {
    if (cfg_.csv.empty()) return r;
    std::string path = cfg_.csv;
    if (csv_written_++ > 0 || !tag.empty()) {
      std::filesystem::path p(cfg_.csv);
      path = (p.parent_path() / (p.stem().string() + "." + tag + p.extension().string())).string();
    }
    std::ofstream f(path);
    if (!f) throw Error("cannot write CSV file '" + path + "'");
    f << to_csv(r);
    return r;
  }

  void kelvin(const Scenario& s, Section& sec) {
    guarded(sec, "kelvin", [&] {
      const VectorFieldSpec v = s.flow();
      InvariantOptions options;
      options.advection = advection();
      // Loops around each puncture in turn; streamlines bent by other
      // punctures can carry a wide loop into an exclusion, so tighter loops
      // are tried before moving on.
      std::vector<std::pair<Point, double>> loops;
      for (const auto& z : s.exclusions) {
        for (double f : {2.0, 1.75, 1.5, 1.25}) loops.emplace_back(planar_center(z, s.dim), f * z.radius);
      }
      if (loops.empty()) {
        const Site site = clear_site(s);
        loops.emplace_back(site.center, 0.5 * site.clearance);
      }
      for (std::size_t i = 0; i < loops.size(); ++i) {
        const auto& [center, r] = loops[i];
        const double t1 = advection_time(v, center, r, cfg_.quad_order);
        try {
          const KelvinReport k = kelvin_check(v, circle(center, r, 1, 32), 0.0, t1, options);
          write_csv(k.invariant, csv_tag(s, "kelvin"));
          sec.rows.push_back(judged("kelvin/circulation drift", k.relative_drift, "< 1e-5 relative", k.pass,
                                    fmt::format("C0 = {}, center {}, r = {}, t1 = {}, max cycle Lie integral {}",
                                                num(k.invariant.values.front()), point_text(center), num(r), num(t1),
                                                num(k.max_cycle_lie_integral))));
          return;
        } catch (const AdvectionError&) {
          if (i + 1 == loops.size()) throw;
        }
      }
    });
  }

  void helmholtz(const Scenario& s, Section& sec) {
    guarded(sec, "helmholtz", [&] {
      const Scenario s3 = s.dim == 3 ? s : extrude(s);
      const VectorFieldSpec v = s3.flow();
      const Site site = clear_site(s3);
      Point center = site.center;
      center(2) = 0.0;
      const double r = 0.5 * std::min(site.clearance, 1.0);
      const double t1 = advection_time(v, center, r, cfg_.quad_order);
      InvariantOptions options;
      options.advection = advection();
      const HelmholtzReport h =
          helmholtz_check(v, disc(center, r), 0.0, t1, s3.grid(4, 0.05), options);
      write_csv(h.invariant, csv_tag(s, "helmholtz"));
      sec.rows.push_back(judged("helmholtz/flux drift", h.relative_drift, "< 1e-5 relative",
                                h.relative_drift < 1e-5,
                                fmt::format("flux0 = {}, t1 = {}", num(h.invariant.values.front()), num(t1))));
      if (h.max_lie_omega_Omega) {
        sec.rows.push_back(judged("helmholtz/L_w Omega", *h.max_lie_omega_Omega, "< 1e-6", *h.max_lie_omega_Omega < 1e-6));
        sec.rows.push_back(judged("helmholtz/L_w v - d(v(w))", *h.max_lie_omega_v, "< 1e-6", *h.max_lie_omega_v < 1e-6));
      }
    });
  }

  void tube(const Scenario& s, Section& sec) {
    guarded(sec, "tube", [&] {
      const Scenario s3 = s.dim == 3 ? s : extrude(s);
      const VectorFieldSpec v = s3.flow();
      const MultiVectorField w = vorticity_vector(v);
      // Cap around the strongest vorticity among the sample points.
      Point center;
      double best = -1.0;
      for (const auto& p : s3.grid(9, 0.0)) {
        const double m = to_vector(w(0.0, p)).norm();
        const double c = clearance_at(s3, p);
        if (c > 1e-9 && m > best + 1e-12) {
          best = m;
          center = p;
        }
      }
      if (best < 1e-9) {
        sec.rows.push_back(not_applicable("tube/flux", "vorticity vanishes; no vortex tube"));
        return;
      }
      center(2) = 0.0;
      const double r = std::min(0.25 * clearance_at(s3, center), 0.25);
      const VortexTube t = vortex_tube(v, disc(center, r), 0.5 * (s3.hi(2) - s3.lo(2)), 64, cfg_.quad_order);
      sec.rows.push_back(judged("tube/cross-section flux spread", t.relative_spread, "< 1e-6 relative", t.pass,
                                fmt::format("flux {} -> {}, lateral {}, transverse caps {}", num(t.flux_start),
                                            num(t.flux_end), num(t.lateral_flux), t.transverse ? "yes" : "no")));
      sec.rows.push_back(info("tube/half-curl flux", num(t.half_curl_flux_start)));
    });
  }

  void invariants(const Scenario& s, Section& sec, const std::string& which) {
    const VectorFieldSpec v = s.flow();
    const Site site = clear_site(s);
    const double r = 0.5 * std::min(site.clearance, 1.0);
    InvariantOptions options;
    options.advection = advection();
    const bool want_area = which.empty() || which == "area";
    const bool want_cov = which.empty() || which == "covelocity";
    const bool want_vort = which == "vorticity";
    if (want_area) {
      guarded(sec, "invariant/area form", [&] {
        if (s.dim != 2) {
          sec.rows.push_back(not_applicable("invariant/area form", "the area form is planar"));
          return;
        }
        FormValue area(2, 2);
        area[0] = 1.0;
        const InvariantReport rep =
            invariant_report(FormField::constant(area), v, disc(site.center, r), 0.0, 1.0, options);
        write_csv(rep, csv_tag(s, "area"));
        const std::string got = to_string(rep.classification);
        const std::string detail =
            fmt::format("rate residual {}, max |L_u alpha| {}", num(rep.rate_residual), num(rep.max_lie_norm));
        if (s.declares(Property::incompressible)) {
          sec.rows.push_back(Row{"invariant/area form", got, "absolute",
                                 rep.classification == InvariantClass::absolute && rep.rate_ok ? Status::pass
                                                                                              : Status::fail,
                                 detail});
        } else {
          sec.rows.push_back(Row{"invariant/area form", got, "", rep.rate_ok ? Status::info : Status::fail, detail});
        }
      });
    }
    if (want_cov || want_vort) {
      const std::string name = want_vort ? "invariant/vorticity" : "invariant/covelocity";
      guarded(sec, name, [&] {
        const bool vort = want_vort;
        if (vort && s.dim != 3) {
          sec.rows.push_back(not_applicable(name, "the vorticity 2-form is checked on 3D surfaces"));
          return;
        }
        const FormField alpha = vort ? vorticity_form(v) : covelocity(v);
        const GeometricChain c = vort ? disc(site.center, r) : circle(site.center, r);
        if (!vort) {
          // Endpoints at different distances from the center so that radial
          // potentials do not cancel along the chord.
          Point a = site.center;
          Point b = site.center;
          a(0) += 0.1 * r;
          b(0) += 0.6 * r;
          b(1) += 0.7 * r;
          options.probes = {{"loop", c}, {"arc", GeometricChain(c.terms().front().second)},
                            {"chord", GeometricChain(segment(a, b))}};
        }
        const InvariantReport rep = invariant_report(alpha, v, c, 0.0, 1.0, options);
        write_csv(rep, csv_tag(s, vort ? "vorticity" : "covelocity"));
        const bool barotropic_conservative = s.declares(Property::barotropic) && s.declares(Property::conservative);
        const bool ok = rep.rate_ok && rep.classification != InvariantClass::none;
        std::string detail =
            fmt::format("rate residual {}, max |L_u alpha| {}", num(rep.rate_residual), num(rep.max_lie_norm));
        for (const auto& p : rep.probes) detail += fmt::format("; {} drift {}", p.label, num(p.drift));
        if (rep.beta_witness) detail += fmt::format("; beta = {}", *rep.beta_witness);
        sec.rows.push_back(Row{name, to_string(rep.classification), barotropic_conservative ? "absolute or relative" : "",
                               barotropic_conservative ? (ok ? Status::pass : Status::fail) : Status::info, detail});
      });
    }
  }

  Row balance_row(const std::string& name, const BalanceReport& r) {
    if (!r.applicable) return not_applicable(name, r.note);
    std::string detail = fmt::format("worst ratio {} over {} samples", num(r.worst_ratio), r.samples);
    for (const auto& [k, v] : r.extras) detail += fmt::format("; {} = {}", k, num(v));
    for (const auto& [k, v] : r.entries) detail += fmt::format("; {} = {}", k, num(v));
    if (!r.note.empty()) detail += "; " + r.note;
    return judged(name, r.max_residual, "<= atol + rtol*scale", r.pass, detail);
  }

  void dynamics(const Scenario& s, Section& sec, const std::string& which) {
    const FluidState f = s.fluid();
    const auto grid = s.grid(cfg_.grid, 0.05);
    const Thresholds th = thresholds();
    auto want = [&](const char* k) { return which.empty() || which == k; };
    if (want("continuity")) {
      guarded(sec, "continuity", [&] { sec.rows.push_back(balance_row("continuity", continuity_residual(f, grid, 0.0, th))); });
      if (s.dim == 3) {
        guarded(sec, "mass balance", [&] {
          const Site site = clear_site(s);
          const Point h = Point::Constant(3, 0.5 * site.clearance);
          sec.rows.push_back(balance_row(
              "mass balance", mass_balance_cochain(f, box(site.center - h, site.center + h), 0.0, th, cfg_.quad_order)));
        });
      }
    }
    if (want("euler")) guarded(sec, "euler", [&] { sec.rows.push_back(balance_row("euler", euler_residual(f, grid, 0.0, th))); });
    if (want("power")) {
      guarded(sec, "power", [&] { sec.rows.push_back(balance_row("power", power_balance_residual(f, grid, 0.0, th))); });
    }
    if (want("magnus")) {
      guarded(sec, "magnus", [&] { sec.rows.push_back(balance_row("magnus", magnus_force(f, grid, 0.0, th).report)); });
    }
    if (want("barotropic")) {
      guarded(sec, "barotropic", [&] {
        sec.rows.push_back(balance_row("barotropic", barotropic_check(f, grid, 0.0, th)));
        // The wedge test must also reject a density that is not a function of the pressure.
        if (s.pressure) {
          FluidState wrong = f;
          const expr::Expr stratified = expr::parse("1 + 0.1*y + 0.1*x^2");
          wrong.density = s.scalar(stratified);
          const BalanceReport r = barotropic_check(wrong, grid, 0.0, th);
          const bool pressure_flat = [&] {
            for (const auto& p : grid) {
              for (int i = 0; i < s.dim; ++i) {
                if (std::abs(f.pressure->partial(0.0, p, i)[0]) > 1e-12) return false;
              }
            }
            return true;
          }();
          if (pressure_flat) {
            sec.rows.push_back(not_applicable("barotropic/negative case", "pressure is uniform; every density is barotropic"));
          } else {
            sec.rows.push_back(judged("barotropic/negative case", r.max_residual, "rejected", !r.pass,
                                      "density 1 + 0.1 y + 0.1 x^2 against the scenario pressure"));
          }
        }
      });
    }
    if (want("bernoulli")) {
      guarded(sec, "bernoulli", [&] {
        double margin = 0.05;
        for (const auto& z : s.exclusions) margin = std::max(margin, z.radius);
        const auto pool = s.grid(std::max(cfg_.grid, 4), margin);
        std::vector<Point> seeds;
        for (int i = 0; i < 6 && !pool.empty(); ++i) {
          seeds.push_back(pool[static_cast<std::size_t>(rng_.uniform() * static_cast<double>(pool.size())) % pool.size()]);
        }
        sec.rows.push_back(balance_row("bernoulli", bernoulli_check(f, seeds, 1.0, cfg_.steps, th)));
      });
    }
  }

  void frobenius(const Scenario& s, Section& sec) {
    guarded(sec, "frobenius", [&] {
      const FrobeniusReport r = frobenius_classify(s.flow(), s.grid(6, 0.05));
      const std::string detail = fmt::format("|v| {}, |dv| {}, |v^dv| {}, |dv^dv| {}; first vanishing I{}",
                                             num(r.max_norm[0]), num(r.max_norm[1]), num(r.max_norm[2]),
                                             num(r.max_norm[3]), r.first_vanishing_index);
      const std::string got = r.completely_integrable ? "completely integrable" : "not integrable";
      if (s.dim == 2 && r.slots == 2) {
        sec.rows.push_back(
            Row{"frobenius", got, "completely integrable", r.completely_integrable ? Status::pass : Status::fail, detail});
      } else {
        sec.rows.push_back(info("frobenius", got, detail));
      }
    });
  }

  std::string csv_tag(const Scenario& s, const std::string& check) const {
    return subcommand_ == "suite" ? s.name + "." + check : std::string();
  }

  void set_subcommand(const std::string& sc) { subcommand_ = sc; }

 private:
  const RunConfig& cfg_;
  Rng rng_;
  int csv_written_ = 0;
  std::string subcommand_;
};

// ---------------------------------------------------------------- output

std::string render_text(const std::vector<Section>& sections) {
  std::string out;
  int pass = 0;
  int fail = 0;
  int na = 0;
  for (const auto& sec : sections) {
    if (!sec.title.empty()) out += "== " + sec.title + " ==\n";
    for (const auto& r : sec.rows) {
      std::string line = r.name + ":";
      if (!r.value.empty()) line += " " + r.value;
      if (!r.expected.empty()) line += " (expected " + r.expected + ")";
      if (r.status != Status::info) line += std::string(" ") + status_word(r.status);
      if (!r.detail.empty()) line += " | " + r.detail;
      out += line + "\n";
      pass += r.status == Status::pass;
      fail += r.status == Status::fail;
      na += r.status == Status::na;
    }
  }
  out += fmt::format("summary: {} passed, {} failed, {} not applicable\n", pass, fail, na);
  return out;
}

std::string render_json(const std::vector<Section>& sections) {
  nlohmann::ordered_json j;
  auto arr = nlohmann::ordered_json::array();
  bool ok = true;
  for (const auto& sec : sections) {
    nlohmann::ordered_json s;
    s["title"] = sec.title;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : sec.rows) {
      rows.push_back({{"name", r.name},
                      {"value", r.value},
                      {"expected", r.expected},
                      {"status", status_word(r.status)},
                      {"detail", r.detail}});
      ok = ok && r.status != Status::fail;
    }
    s["rows"] = rows;
    arr.push_back(s);
  }
  j["sections"] = arr;
  j["pass"] = ok;
  return j.dump(2) + "\n";
}

const std::vector<std::pair<std::string, std::string>>& subcommands() {
  static const std::vector<std::pair<std::string, std::string>> list{
      {"homology", "Betti numbers of a shipped or user cubical complex"},
      {"stokes", "Stokes residuals on smooth (form, chain) pairs"},
      {"derham", "closed/exact classification of the covelocity"},
      {"invariant", "integral-invariant classification (absolute, relative, none)"},
      {"circulation", "circulation goldens and winding quantization"},
      {"flux", "vorticity flux goldens and vortex tube cross-sections"},
      {"kelvin", "circulation of an advected cycle"},
      {"helmholtz", "vorticity flux of an advected surface"},
      {"tube", "flux along a vortex tube"},
      {"continuity", "continuity equation and cochain mass balance"},
      {"euler", "Euler momentum residual"},
      {"bernoulli", "Bernoulli head along streamlines"},
      {"power", "power balance"},
      {"magnus", "Magnus form i_p Omega"},
      {"barotropic", "barotropic wedge test"},
      {"suite", "full acceptance matrix over the builtins"},
  };
  return list;
}

void add_common(CLI::App* sc, RunConfig& cfg) {
  sc->add_option("--builtin", cfg.builtin, "builtin scenario name")
      ->check(CLI::IsMember(builtin_names()));
  sc->add_option("--scenario", cfg.scenario_path, "scenario file")->check(CLI::ExistingFile);
  sc->add_option("--grid", cfg.grid, "grid points per axis")->check(CLI::Range(2, 256));
  sc->add_option("--quad-order", cfg.quad_order, "Gauss-Legendre points per axis")->check(CLI::Range(2, 128));
  sc->add_option("--steps", cfg.steps, "RK4 steps per advection")->check(CLI::Range(4, 1 << 20));
  sc->add_option("--atol", cfg.atol, "absolute residual tolerance")->check(CLI::PositiveNumber);
  sc->add_option("--rtol", cfg.rtol, "relative residual tolerance")->check(CLI::PositiveNumber);
  sc->add_option("--seed", cfg.seed, "random seed for probe generation");
  sc->add_option("--csv", cfg.csv, "write time series as CSV to this path");
  sc->add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"text", "json"}));
}

std::vector<Section> execute(const RunConfig& cfg, std::vector<Scenario>& scenarios) {
  Runner runner(cfg);
  runner.set_subcommand(cfg.subcommand);
  std::vector<Section> out;
  const std::string& sc = cfg.subcommand;
  if (sc == "homology") {
    Section sec{"homology", {}};
    runner.homology(cfg.complex, sec);
    out.push_back(std::move(sec));
    return out;
  }
  if (sc == "suite") {
    Section sec{"homology", {}};
    runner.homology({}, sec);
    out.push_back(std::move(sec));
  }
  for (const auto& s : scenarios) {
    Section sec{s.name, {}};
    if (sc == "suite") {
      runner.goldens(s, sec);
      runner.stokes(s, sec);
      runner.derham(s, sec);
      runner.circulation_checks(s, sec, false);
      runner.homology_invariance(s, sec);
      runner.identities_3d(s, sec);
      runner.kelvin(s, sec);
      runner.helmholtz(s, sec);
      runner.tube(s, sec);
      runner.invariants(s, sec, {});
      runner.dynamics(s, sec, {});
      runner.frobenius(s, sec);
    } else if (sc == "stokes") {
      runner.stokes(s, sec);
      runner.identities_3d(s, sec);
    } else if (sc == "derham") {
      runner.derham(s, sec);
    } else if (sc == "invariant") {
      runner.invariants(s, sec, cfg.form);
    } else if (sc == "circulation") {
      runner.circulation_checks(s, sec, true);
      runner.homology_invariance(s, sec);
    } else if (sc == "flux") {
      Scenario only_flux = s;
      std::erase_if(only_flux.goldens, [](const Golden& g) { return g.quantity != "flux"; });
      runner.goldens(only_flux, sec);
      runner.tube(s, sec);
    } else if (sc == "kelvin") {
      runner.kelvin(s, sec);
    } else if (sc == "helmholtz") {
      runner.helmholtz(s, sec);
    } else if (sc == "tube") {
      runner.tube(s, sec);
    } else {
      runner.dynamics(s, sec, sc);
    }
    out.push_back(std::move(sec));
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Cubical homology, exterior calculus and vortex theorem checks on analytic flows", "vorhom"};
  app.require_subcommand(1);
  for (const auto& [name, description] : subcommands()) {
    CLI::App* sc = app.add_subcommand(name, description);
    add_common(sc, cfg);
    if (name == "homology") sc->add_option("--complex", cfg.complex, "shipped complex name or complex file");
    if (name == "invariant") {
      sc->add_option("--form", cfg.form, "form to classify")->check(CLI::IsMember({"area", "covelocity", "vorticity"}));
    }
  }
  if (args.empty()) {
    err << app.help();
    return kExitUsage;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    for (const auto* sc : app.get_subcommands()) {
      err << sc->help();
      return kExitUsage;
    }
    err << app.help();
    return kExitUsage;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (!cfg.builtin.empty() && !cfg.scenario_path.empty()) {
    err << "error: --builtin and --scenario are mutually exclusive\n";
    return kExitUsage;
  }

  std::vector<Scenario> scenarios;
  try {
    if (!cfg.scenario_path.empty()) {
      scenarios.push_back(load_scenario(cfg.scenario_path));
    } else if (!cfg.builtin.empty()) {
      scenarios.push_back(builtin(cfg.builtin));
    } else if (cfg.subcommand == "suite") {
      for (const auto& n : builtin_names()) scenarios.push_back(builtin(n));
    } else if (cfg.subcommand != "homology") {
      err << "error: " << cfg.subcommand << " needs --builtin NAME or --scenario PATH\n";
      return kExitUsage;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<Section> sections;
  try {
    sections = execute(cfg, scenarios);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
  out << (cfg.format == "json" ? render_json(sections) : render_text(sections));
  std::vector<std::string> failed;
  for (const auto& sec : sections) {
    for (const auto& r : sec.rows) {
      if (r.status == Status::fail) failed.push_back(sec.title.empty() ? r.name : sec.title + "/" + r.name);
    }
  }
  if (!failed.empty()) {
    for (const auto& f : failed) err << "failed: " << f << "\n";
    return kExitFail;
  }
  return kExitPass;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace vorhom::cli
