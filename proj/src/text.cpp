#include "sigscore/text.hpp"

#include <cstdio>
#include <cstring>

namespace sigscore {

std::string format_double(double value) {
  char buffer[40];
  // %.17g always round-trips; try shorter forms first so common values
  // print cleanly (0.5 rather than 0.5000000000000000).
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
    double parsed = 0.0;
    std::sscanf(buffer, "%lf", &parsed);
    if (parsed == value) {
      return buffer;
    }
  }
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) {
    return value;
  }
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') {
      quoted += '"';
    }
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace sigscore
