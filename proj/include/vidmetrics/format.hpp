#pragma once

#include <string>

namespace vidmetrics {

/// Fixed-point with `precision` decimals, independent of the C++ locale.
std::string format_fixed(double value, int precision = 6);

}  // namespace vidmetrics
