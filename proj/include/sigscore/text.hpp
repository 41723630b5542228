#pragma once

#include <string>

namespace sigscore {

// Shortest representation that round-trips a double: outputs are stable
// across runs, which the export determinism contract depends on.
std::string format_double(double value);

// Quotes a CSV field only when it contains a delimiter, quote, or newline.
std::string csv_field(const std::string& value);

}  // namespace sigscore
