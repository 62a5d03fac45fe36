// format.hpp: number-to-text helpers shared by the file writers.
#pragma once

#include <string>

namespace sbafnet {

/// 17 significant digits; round-trips a double exactly through text.
std::string format_g17(double v);

/// %g with the given number of significant digits, for report tables.
std::string format_g(double v, int digits);

}  // namespace sbafnet
