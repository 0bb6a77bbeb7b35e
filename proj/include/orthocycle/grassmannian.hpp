#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "orthocycle/errors.hpp"
#include "orthocycle/o2.hpp"
#include "orthocycle/torus.hpp"

namespace orthocycle {

// Coordinate on Gr_1(C^2), identified with the Riemann sphere via
// z <-> span{v1 + z v2}, v1 = (1, i), v2 = (1, -i); infinity <-> span{v2}.
// The pole is an explicit variant, never a large float: {0, inf} is a
// dynamically meaningful pair and must be exact.
struct GrassCoordC {
  std::complex<double> z{0.0, 0.0};
  bool is_inf = false;

  static GrassCoordC finite(std::complex<double> value) { return {value, false}; }
  static GrassCoordC infinity() { return {{0.0, 0.0}, true}; }

  bool is_pole() const { return is_inf || z == std::complex<double>(0.0, 0.0); }

  std::string str() const {
    if (is_inf) return "inf";
    return "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")";
  }
};

// Chordal metric on the sphere; the chart metric used for section residuals.
inline double chordal(const GrassCoordC& a, const GrassCoordC& b) {
  const auto weight = [](const GrassCoordC& g) {
    return std::sqrt(1.0 + std::norm(g.z));
  };
  if (a.is_inf && b.is_inf) return 0.0;
  if (a.is_inf) return 2.0 / weight(b);
  if (b.is_inf) return 2.0 / weight(a);
  return 2.0 * std::abs(a.z - b.z) / (weight(a) * weight(b));
}

// Decompose v = a v1 + b v2 and return b/a. For v = (x, y):
// a = (x - i y)/2, b = (x + i y)/2.
inline GrassCoordC coordC_of_span(std::complex<double> x,
                                  std::complex<double> y) {
  const std::complex<double> i{0.0, 1.0};
  const std::complex<double> a = (x - i * y) / 2.0;
  const std::complex<double> b = (x + i * y) / 2.0;
  const double scale = std::abs(a) + std::abs(b);
  if (scale == 0.0) throw std::domain_error("coordinate of the zero vector");
  if (std::abs(a) < 1e-14 * scale) return GrassCoordC::infinity();
  return GrassCoordC::finite(b / a);
}

// Induced action of an invertible M on the chart: with M v1 = p v1 + q v2 and
// M v2 = r v1 + s v2, z maps to (q + s z)/(p + r z). Denominators below 1e-14
// map to the pole; the input pole maps to s/r with the same convention.
inline GrassCoordC matrix_action_coordC(const CMat2& m, const GrassCoordC& g) {
  const std::complex<double> i{0.0, 1.0};
  const std::complex<double> det = m[0] * m[3] - m[1] * m[2];
  if (std::abs(det) < 1e-14) throw std::domain_error("singular matrix action");

  const std::complex<double> mv1x = m[0] + m[1] * i, mv1y = m[2] + m[3] * i;
  const std::complex<double> mv2x = m[0] - m[1] * i, mv2y = m[2] - m[3] * i;
  const std::complex<double> p = (mv1x - i * mv1y) / 2.0;
  const std::complex<double> q = (mv1x + i * mv1y) / 2.0;
  const std::complex<double> r = (mv2x - i * mv2y) / 2.0;
  const std::complex<double> s = (mv2x + i * mv2y) / 2.0;

  if (g.is_inf) {
    if (std::abs(r) < 1e-14) return GrassCoordC::infinity();
    return GrassCoordC::finite(s / r);
  }
  const std::complex<double> den = p + r * g.z;
  if (std::abs(den) < 1e-14) return GrassCoordC::infinity();
  return GrassCoordC::finite((q + s * g.z) / den);
}

inline GrassCoordC matrix_action_coordC(const Mat2& m, const GrassCoordC& g) {
  return matrix_action_coordC(to_cmatrix(m), g);
}

// Real Grassmannian Gr_1(R^2) ~ T: y in [0,1) is the line of angle pi*y.
using GrassCoordR = double;

inline void direction_of_coordR(double y, double& dx, double& dy) {
  dx = std::cos(std::numbers::pi * y);
  dy = std::sin(std::numbers::pi * y);
}

inline GrassCoordR coordR_of_direction(double dx, double dy) {
  if (dx == 0.0 && dy == 0.0)
    throw std::domain_error("coordinate of the zero direction");
  return wrap_unit(std::atan2(dy, dx) / std::numbers::pi);
}

// Closed-form action on line angles; agrees with acting by to_matrix on a
// direction vector and reading the angle back (chart-consistency property).
inline GrassCoordR matrix_action_coordR(const O2Element& e, GrassCoordR y) {
  if (e.is_rotation()) return wrap_unit(y + 2.0 * e.angle);
  return wrap_unit(4.0 * e.angle - y);
}

// k(z) = min(|z|, 1/|z|): 0 at the poles, 1 on the unit circle, conserved by
// every O2 action (rotations fix |z|, reflections swap |z| <-> 1/|z|).
inline double k_of(const GrassCoordC& g) {
  if (g.is_inf) return 0.0;
  const double r = std::abs(g.z);
  if (r == 0.0) return 0.0;
  return std::min(r, 1.0 / r);
}

// P_C = {|z| = C} u {|z| = 1/C}; membership up to tol in the k coordinate.
struct CirclePair {
  double C = 1.0;
};

inline bool in_circle_pair(const GrassCoordC& z, const CirclePair& p,
                           double tol) {
  return std::abs(k_of(z) - p.C) <= tol;
}

// Orthogonal complement under the Hermitian product: z -> -1/conj(z), 0 <-> inf.
inline GrassCoordC perp_coord(const GrassCoordC& g) {
  if (g.is_inf) return GrassCoordC::finite({0.0, 0.0});
  if (g.z == std::complex<double>(0.0, 0.0)) return GrassCoordC::infinity();
  return GrassCoordC::finite(-1.0 / std::conj(g.z));
}

inline GrassCoordR perp_coord_real(GrassCoordR y) { return wrap_unit(y + 0.5); }

}  // namespace orthocycle
