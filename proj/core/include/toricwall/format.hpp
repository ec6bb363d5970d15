#pragma once

#include <cstdio>
#include <string>

namespace tw {

// Fixed 17-significant-digit rendering used for every floating output.
inline std::string fmt17(double x) {
  if (x == 0) return "0";  // also folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace tw
