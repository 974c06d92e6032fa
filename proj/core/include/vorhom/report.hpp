#pragma once

// Serialization of invariant reports: JSON, structured text and CSV.

#include <string>

#include "vorhom/integrate.hpp"

namespace vorhom {

std::string to_json(const InvariantReport& r, int indent = 2);
std::string to_text(const InvariantReport& r);
/// Columns t, C, dCdt, lie_integral.
std::string to_csv(const InvariantReport& r);

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);

}  // namespace vorhom
