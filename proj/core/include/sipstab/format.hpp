#pragma once

#include <string>

namespace sipstab {

/// Decimal rendering with 17 significant digits ("inf"/"-inf"/"nan" for
/// non-finite values). Round-trips every double exactly.
std::string format_double(double value);

}  // namespace sipstab
