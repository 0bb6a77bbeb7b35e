#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "orthocycle/base_system.hpp"
#include "orthocycle/errors.hpp"
#include "orthocycle/generator.hpp"
#include "orthocycle/grassmannian.hpp"

namespace orthocycle {

// Fibre maps of the product systems, written on the O2 element alone so the
// skew assembly has a single seam (generator_at).

// Torus fibre (system S): rotations translate the line angle, reflections
// reverse it about the axis.
inline TorusValue f_step(const O2Element& e, TorusValue y) {
  if (e.is_rotation()) return wrap_unit(y + 2.0 * e.angle);
  return wrap_unit(4.0 * e.angle - y);
}

// Z2 fibre (system R): orientation bookkeeping.
inline int g_step(const O2Element& e, int a) {
  return e.is_rotation() ? a : (a ^ 1);
}

// Sphere fibre (system N): rotations fix the poles pointwise and multiply by
// e^{2 i alpha}; reflections swap the poles and act by e^{4 i beta} / z.
inline GrassCoordC n_step(const O2Element& e, const GrassCoordC& g) {
  if (e.is_rotation()) {
    if (g.is_inf || g.z == std::complex<double>(0.0, 0.0)) return g;
    const double th = 4.0 * std::numbers::pi * e.angle;  // 2 alpha
    return GrassCoordC::finite(std::polar(1.0, th) * g.z);
  }
  if (g.is_inf) return GrassCoordC::finite({0.0, 0.0});
  if (g.z == std::complex<double>(0.0, 0.0)) return GrassCoordC::infinity();
  const double th = 8.0 * std::numbers::pi * e.angle;  // 4 beta
  return GrassCoordC::finite(std::polar(1.0, th) / g.z);
}

namespace detail {
// Multiple of 1/3 carried by an angle that must be exactly commensurate for
// the Z3 factor to exist: scale * angle must be an integer.
inline int thirds_multiple(const O2Element& e, int scale, const char* what) {
  if (e.exact) {
    const Rational m = *e.exact * Rational(scale);
    if (m.den() != 1)
      throw std::domain_error(std::string(what) +
                              ": angle is not a multiple of 1/3, no Z3 factor");
    return static_cast<int>(((m.num() % 3) + 3) % 3);
  }
  const double m = static_cast<double>(scale) * e.angle;
  const double r = std::round(m);
  if (std::abs(m - r) > 1e-9)
    throw std::domain_error(std::string(what) +
                            ": angle is not a multiple of 1/3, no Z3 factor");
  return static_cast<int>((static_cast<long long>(r) % 3 + 3) % 3);
}
}  // namespace detail

// Z3 fibre (factor of S through project_thirds). A rotation translating the
// fibre by m/3 shifts a by m; a reflection y -> c - y with c = m/3 sends the
// third [a/3,(a+1)/3) into [(m-1-a)/3, (m-a)/3) off boundary points, so
// a -> m - 1 - a (mod 3).
inline int z3_step(const O2Element& e, int a) {
  if (e.is_rotation()) {
    const int m = detail::thirds_multiple(e, 6, "z3 rotation branch");
    return (a + m) % 3;
  }
  const int m = detail::thirds_multiple(e, 12, "z3 reflection branch");
  return ((m - 1 - a) % 3 + 3) % 3;
}

// iota: C-bar minus the unit circle -> Z2. Hard error inside the excluded
// annulus: iota is genuinely undefined there and silent rounding would
// corrupt the Z2 statistics downstream.
inline int iota(const GrassCoordC& g, double annulus_half_width = 1e-12) {
  if (g.is_inf) return 1;
  const double r = std::abs(g.z);
  if (std::abs(r - 1.0) <= annulus_half_width)
    throw std::domain_error("iota is undefined on the unit circle");
  return r < 1.0 ? 0 : 1;
}

// tau(z) = arg(z) / (2 pi) in [0,1); undefined at the poles.
inline TorusValue tau(const GrassCoordC& g) {
  if (g.is_pole()) throw std::domain_error("tau is undefined at 0 and infinity");
  return wrap_unit(std::arg(g.z) / (2.0 * std::numbers::pi));
}

// pi_3(y) = floor(3y). The three boundary points carry no measure; callers
// that need the strict factor property exclude them.
inline int project_thirds(TorusValue y) {
  int a = static_cast<int>(std::floor(3.0 * y));
  if (a < 0) a = 0;
  if (a > 2) a = 2;
  return a;
}

enum class SkewKind { S, R, N, Z3 };

inline const char* skew_kind_name(SkewKind k) {
  switch (k) {
    case SkewKind::S: return "S";
    case SkewKind::R: return "R";
    case SkewKind::N: return "N";
    case SkewKind::Z3: return "Z3";
  }
  return "?";
}

// A product system over `base` driven by `gen`; one step advances the base by
// T and the fibre by the map of A0(x).
template <class Base>
struct SkewSystem {
  Base base;
  CocycleGenerator gen;

  using Point = typename Base::Point;

  std::string id() const { return gen.id() + "@" + base.label(); }

  O2Element element_at(const Point& x) const { return generator_at(gen, x); }

  std::pair<Point, TorusValue> step_S(const Point& x, TorusValue y) const {
    return {base.step(x), f_step(element_at(x), y)};
  }
  std::pair<Point, int> step_R(const Point& x, int a) const {
    return {base.step(x), g_step(element_at(x), a)};
  }
  std::pair<Point, GrassCoordC> step_N(const Point& x, const GrassCoordC& z) const {
    return {base.step(x), n_step(element_at(x), z)};
  }
  std::pair<Point, int> step_Z3(const Point& x, int a) const {
    return {base.step(x), z3_step(element_at(x), a)};
  }
};

}  // namespace orthocycle
