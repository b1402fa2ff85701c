#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace frenkel {

/// %.17g, the shortest fixed-width form that round-trips every double.
inline std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace frenkel
