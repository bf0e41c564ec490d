#pragma once

#include <string>

namespace driftlab::detail {

/// Shortest round-trip decimal form; identical on every run and platform.
std::string format_double(double x);

/// CSV-quotes a field when it contains a separator, quote or newline.
std::string csv_field(const std::string& s);

}  // namespace driftlab::detail
