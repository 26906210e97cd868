#pragma once

#include <cstdio>
#include <string>

namespace mfgp {

/// Nine significant digits, the precision used in every CSV/JSON export.
inline std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace mfgp
