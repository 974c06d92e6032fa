#pragma once

// The vorhom command-line front end as a library so that tests can drive it.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace vorhom::cli {

struct RunConfig {
  std::string subcommand;
  std::string builtin;
  std::string scenario_path;
  std::string complex;
  std::string form;  // invariant: area | covelocity | vorticity
  int grid = 16;
  int quad_order = 8;
  int steps = 256;
  double atol = 1e-8;
  double rtol = 1e-6;
  std::uint64_t seed = 1;
  std::string csv;
  std::string format = "text";
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// `args` excludes the program name. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace vorhom::cli
