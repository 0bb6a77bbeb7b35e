#pragma once

#include <cmath>

namespace orthocycle {

// T = R/Z with canonical representative in [0,1). Every arithmetic result is
// reduced immediately so that 10^7-step orbits cannot drift out of range.
using TorusValue = double;

inline double wrap_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;  // x = -eps rounds to r == 1.0
  if (r < 0.0) r += 1.0;   // defensive; unreachable for finite x
  return r;
}

// Signed representative in [-1/2, 1/2).
inline double wrap_signed(double x) {
  double r = wrap_unit(x);
  return r >= 0.5 ? r - 1.0 : r;
}

// Distance on R/Z.
inline double circle_dist(double a, double b) {
  double d = wrap_unit(a - b);
  return d <= 0.5 ? d : 1.0 - d;
}

}  // namespace orthocycle
