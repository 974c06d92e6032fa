#pragma once

// Analytic flow scenarios: expression-defined velocity, density, pressure and
// force fields with exclusion zones, declared properties re-verified at load
// time, and golden values with their provenance.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vorhom/dynamics.hpp"
#include "vorhom/expression.hpp"

namespace vorhom {

enum class Property { steady, incompressible, irrotational, barotropic, conservative };
const char* to_string(Property p);

/// Provenance of a golden value: an exact analytic value, the result of an
/// independent oracle computation, or a consequence of a theorem (homology
/// invariance, Stokes) applied to another golden.
enum class GoldenTag { exact, oracle, identity };
const char* to_string(GoldenTag t);

struct Golden {
  std::string label;
  std::string quantity;  // circulation | flux | vorticity | divergence
  std::string probe;     // circle | figure8 | disc | segment | point
  std::vector<expr::Expr> args;
  expr::Expr expected;
  GoldenTag tag = GoldenTag::exact;
};

struct GoldenResult {
  std::string label;
  std::string quantity;
  double value = 0.0;
  double expected = 0.0;
  std::string expected_text;  // display form, e.g. "2π"
  GoldenTag tag = GoldenTag::exact;
  double residual = 0.0;
  bool pass = false;
};

class Scenario {
 public:
  std::string name;
  int dim = 0;
  std::vector<std::pair<std::string, expr::Expr>> params;  // in declaration order
  std::vector<expr::Expr> velocity;
  std::optional<expr::Expr> density;
  std::optional<expr::Expr> pressure;
  std::optional<expr::Expr> potential;
  std::optional<std::vector<expr::Expr>> force;
  std::optional<expr::Expr> barotropic;  // rho as a function of p
  ExclusionSet exclusions;
  Point lo;
  Point hi;
  std::set<Property> declared;
  std::vector<Golden> goldens;

  bool declares(Property p) const { return declared.count(p) > 0; }
  double param(const std::string& key) const;

  VectorFieldSpec flow() const;
  /// Density defaults to 1 when absent; pressure and force stay optional.
  FluidState fluid() const;
  /// A 0-form from an expression in t and the coordinates.
  FormField scalar(const expr::Expr& e) const;

  /// Active interval of every piecewise definition at (t, x); regions with a
  /// constant signature are smooth.
  std::vector<int> piece_signature(double t, const Point& x) const;

  /// Uniform sample grid over the bounds with exclusions removed.
  std::vector<Point> grid(int per_axis, double margin = 0.0) const;
  GeometricChain probe_chain(const Golden& g) const;
};

/// Parses a scenario file and verifies its declarations.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);
std::string serialize(const Scenario& s);

/// Re-checks every declared property and seam continuity; throws
/// ValidationError naming the failing property.
void verify_declarations(const Scenario& s);

const std::vector<std::string>& builtin_names();
Scenario builtin(const std::string& name);
std::string builtin_text(const std::string& name);

/// The planar flow (v_x, v_y, 0) on R^3; point exclusions become lines along z.
Scenario extrude(const Scenario& s, double half_height = 1.0);

std::vector<GoldenResult> evaluate_goldens(const Scenario& s, int order = kDefaultQuadratureOrder,
                                           double rtol = 1e-7);

}  // namespace vorhom
