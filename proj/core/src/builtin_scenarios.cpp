#include <map>

#include "vorhom/scenario.hpp"

namespace vorhom {

namespace {

// Every builtin is ordinary scenario text so that it exercises the same
// parser and load-time verification as user files.
const std::map<std::string, std::string>& texts() {
  static const std::map<std::string, std::string> table{
      {"point_vortex", R"sc(vorhom-scenario 1
name point_vortex
dim 2
param G = 2*pi
param rho0 = 1
param p0 = 1
velocity -G/(2*pi)*y/(x^2 + y^2), G/(2*pi)*x/(x^2 + y^2)
density rho0
pressure p0 - rho0*G^2/(8*pi^2*(x^2 + y^2))
exclude point 0, 0 radius 0.25
bounds -2 2 -2 2
declare steady incompressible irrotational barotropic conservative
golden "circulation/winding=1" circulation circle(0, 0, 1) = 2*pi [exact]
golden "circulation/winding=2" circulation circle(0, 0, 1, 2) = 4*pi [exact]
golden "circulation/off-center" circulation circle(0.3, -0.2, 1) = 2*pi [identity]
golden "circulation/not-enclosing" circulation circle(1.2, 0, 0.5) = 0 [identity]
golden "vorticity/(1,0)" vorticity point(1, 0) = 0 [exact]
golden "divergence/(1,0)" divergence point(1, 0) = 0 [exact]
)sc"},
      {"rigid_rotation", R"sc(vorhom-scenario 1
name rigid_rotation
dim 2
param w0 = 1
param rho0 = 1
param p0 = 1
velocity -w0*y, w0*x
density rho0
pressure p0 + 0.5*rho0*w0^2*(x^2 + y^2)
bounds -2 2 -2 2
declare steady incompressible barotropic conservative
golden "vorticity/origin" vorticity point(0, 0) = 2*w0 [oracle]
golden "circulation/unit circle" circulation circle(0, 0, 1) = 2*pi*w0 [exact]
golden "flux/unit disc" flux disc(0, 0, 1) = 2*pi*w0 [identity]
)sc"},
      {"rankine_vortex", R"sc(vorhom-scenario 1
name rankine_vortex
dim 2
param G = 2*pi
param a = 0.5
param rho0 = 1
param p0 = 1
velocity piecewise(x^2 + y^2; [0, a^2): -G/(2*pi*a^2)*y; [a^2, inf): -G/(2*pi)*y/(x^2 + y^2)), piecewise(x^2 + y^2; [0, a^2): G/(2*pi*a^2)*x; [a^2, inf): G/(2*pi)*x/(x^2 + y^2))
density rho0
pressure piecewise(x^2 + y^2; [0, a^2): p0 - rho0*G^2/(8*pi^2*a^2)*(2 - (x^2 + y^2)/a^2); [a^2, inf): p0 - rho0*G^2/(8*pi^2*(x^2 + y^2)))
bounds -2 2 -2 2
declare steady incompressible barotropic conservative
golden "vorticity/core" vorticity point(0, 0) = G/(pi*a^2) [oracle]
golden "vorticity/outside" vorticity point(1, 0) = 0 [exact]
golden "circulation/outside core" circulation circle(0, 0, 1) = G [exact]
golden "circulation/inside core" circulation circle(0, 0, a/2) = G/4 [oracle]
golden "flux/core disc" flux disc(0, 0, a) = G [identity]
)sc"},
      {"shear_flow", R"sc(vorhom-scenario 1
name shear_flow
dim 3
param k = 1
param rho0 = 1
param p0 = 1
velocity k*y, 0, 0
density rho0
pressure p0
bounds -1 1 -1 1 -1 1
declare steady incompressible barotropic conservative
golden "vorticity/z" vorticity point(0, 0, 0) = -k [oracle]
golden "flux/unit disc" flux disc(0, 0, 0, 1) = -k*pi [identity]
golden "circulation/unit circle" circulation circle(0, 0, 0, 1) = -k*pi [oracle]
)sc"},
      {"vortex_pair", R"sc(vorhom-scenario 1
name vortex_pair
dim 2
param G = 2*pi
param rho0 = 1
param p0 = 1
velocity -G/(2*pi)*y/((x + 1)^2 + y^2) + G/(2*pi)*y/((x - 1)^2 + y^2), G/(2*pi)*(x + 1)/((x + 1)^2 + y^2) - G/(2*pi)*(x - 1)/((x - 1)^2 + y^2)
density rho0
pressure p0 - 0.5*rho0*((-G/(2*pi)*y/((x + 1)^2 + y^2) + G/(2*pi)*y/((x - 1)^2 + y^2))^2 + (G/(2*pi)*(x + 1)/((x + 1)^2 + y^2) - G/(2*pi)*(x - 1)/((x - 1)^2 + y^2))^2)
exclude point -1, 0 radius 0.25
exclude point 1, 0 radius 0.25
bounds -3 3 -2 2
declare steady incompressible irrotational barotropic conservative
golden "circulation/left" circulation circle(-1, 0, 0.5) = G [exact]
golden "circulation/right" circulation circle(1, 0, 0.5) = -G [exact]
golden "circulation/both" circulation circle(0, 0, 2.5) = 0 [identity]
)sc"},
      {"expansion", R"sc(vorhom-scenario 1
name expansion
dim 3
param p0 = 1
velocity x/3, y/3, z/3
density exp(-t)
pressure p0 - 0.5*exp(-t)*(x^2 + y^2 + z^2)/9
bounds -1 1 -1 1 -1 1
declare irrotational barotropic conservative
golden "divergence/origin" divergence point(0, 0, 0) = 1 [exact]
golden "circulation/unit circle" circulation circle(0, 0, 0, 1) = 0 [exact]
)sc"},
      {"uniform", R"sc(vorhom-scenario 1
name uniform
dim 2
param U = 1
param rho0 = 1
param p0 = 1
velocity U, 0
density rho0
pressure p0
bounds -2 2 -2 2
declare steady incompressible irrotational barotropic conservative
golden "circulation/unit circle" circulation circle(0, 0, 1) = 0 [exact]
golden "circulation/segment" circulation segment(0, 0, 1, 0) = U [exact]
golden "divergence/origin" divergence point(0, 0) = 0 [exact]
)sc"},
      {"hydrostatic", R"sc(vorhom-scenario 1
name hydrostatic
dim 3
param g = 9.81
param rho0 = 1
param p0 = 1
velocity 0, 0, 0
density rho0
pressure p0 - rho0*g*z
potential rho0*g*z
force 0, 0, -rho0*g
bounds -1 1 -1 1 -1 1
declare steady incompressible irrotational barotropic conservative
golden "circulation/unit circle" circulation circle(0, 0, 0, 1) = 0 [exact]
golden "divergence/origin" divergence point(0, 0, 0) = 0 [exact]
)sc"},
      {"doubly_punctured", R"sc(vorhom-scenario 1
name doubly_punctured
dim 2
param G1 = 2*pi
param G2 = 4*pi
param rho0 = 1
param p0 = 1
velocity -G1/(2*pi)*y/((x + 1)^2 + y^2) - G2/(2*pi)*y/((x - 1)^2 + y^2), G1/(2*pi)*(x + 1)/((x + 1)^2 + y^2) + G2/(2*pi)*(x - 1)/((x - 1)^2 + y^2)
density rho0
pressure p0 - 0.5*rho0*((-G1/(2*pi)*y/((x + 1)^2 + y^2) - G2/(2*pi)*y/((x - 1)^2 + y^2))^2 + (G1/(2*pi)*(x + 1)/((x + 1)^2 + y^2) + G2/(2*pi)*(x - 1)/((x - 1)^2 + y^2))^2)
exclude point -1, 0 radius 0.25
exclude point 1, 0 radius 0.25
bounds -3 3 -2 2
declare steady incompressible irrotational barotropic conservative
golden "circulation/around -1" circulation circle(-1, 0, 0.5) = G1 [exact]
golden "circulation/around +1" circulation circle(1, 0, 0.5) = G2 [exact]
golden "circulation/around both" circulation circle(0, 0, 2.5) = G1 + G2 [identity]
golden "circulation/figure-eight" circulation figure8(-1, 0, 1, 0) = G1 + G2 [identity]
)sc"},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"point_vortex", "rigid_rotation", "rankine_vortex",
                                              "shear_flow",   "vortex_pair",    "expansion",
                                              "uniform",      "hydrostatic",    "doubly_punctured"};
  return names;
}

std::string builtin_text(const std::string& name) {
  const auto it = texts().find(name);
  if (it == texts().end()) throw Error("unknown builtin scenario '" + name + "'");
  return it->second;
}

Scenario builtin(const std::string& name) { return parse_scenario(builtin_text(name)); }

}  // namespace vorhom
