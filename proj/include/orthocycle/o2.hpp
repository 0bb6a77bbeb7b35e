#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>

#include "orthocycle/rational.hpp"
#include "orthocycle/torus.hpp"

namespace orthocycle {

struct Mat2 {
  // Row-major [[a, b], [c, d]].
  double a = 1, b = 0, c = 0, d = 1;

  friend Mat2 operator*(const Mat2& l, const Mat2& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
            l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
  }
  double det() const { return a * d - b * c; }
};

inline double max_abs_diff(const Mat2& l, const Mat2& r) {
  double m = std::abs(l.a - r.a);
  m = std::max(m, std::abs(l.b - r.b));
  m = std::max(m, std::abs(l.c - r.c));
  m = std::max(m, std::abs(l.d - r.d));
  return m;
}

enum class O2Kind { rotation, reflection };

// An element of O2(R) in angle coordinates, measured in turns (fractions of a
// full revolution) so that the rational angles of the exact checks are
// representable without pi. A rotation by angle alpha is t = alpha/(2 pi) in
// [0,1); a reflection in the line of angle beta is b = beta/(2 pi) in [0,1/2)
// (the line of angle beta + pi is the same line, hence the half range).
//
// `exact` carries the turns value as a rational when it is exactly known;
// composition propagates it whenever both operands have it, and the float
// angle is then re-derived from the rational, so rational subgroups compose
// without drift.
struct O2Element {
  O2Kind kind = O2Kind::rotation;
  double angle = 0.0;
  std::optional<Rational> exact = Rational(0);

  static O2Element rotation(double t) {
    return {O2Kind::rotation, wrap_unit(t), std::nullopt};
  }
  static O2Element rotation(const Rational& t) {
    Rational r = t.frac();
    return {O2Kind::rotation, r.to_double(), r};
  }
  static O2Element reflection(double b) {
    return {O2Kind::reflection, wrap_unit(2.0 * b) / 2.0, std::nullopt};
  }
  static O2Element reflection(const Rational& b) {
    Rational r = b.mod(Rational(1, 2));
    return {O2Kind::reflection, r.to_double(), r};
  }
  static O2Element identity() { return rotation(Rational(0)); }

  bool is_rotation() const { return kind == O2Kind::rotation; }

  std::string str() const {
    return (is_rotation() ? "rot(t=" : "ref(b=") + std::to_string(angle) + ")";
  }
};

// second_applied . first_applied, i.e. the matrix product M2 * M1. Fixing the
// "apply first argument first" convention once keeps all the orbit folds of
// cocycle products orientation-safe.
inline O2Element compose(const O2Element& first_applied,
                         const O2Element& second_applied) {
  const O2Element& f = first_applied;
  const O2Element& s = second_applied;
  const bool exact = f.exact && s.exact;

  if (f.is_rotation() && s.is_rotation()) {
    if (exact) return O2Element::rotation(*f.exact + *s.exact);
    return O2Element::rotation(f.angle + s.angle);
  }
  if (!f.is_rotation() && !s.is_rotation()) {
    // ref(b2) * ref(b1) = rot(2 (b2 - b1))
    if (exact) return O2Element::rotation((*s.exact - *f.exact) * Rational(2));
    return O2Element::rotation(2.0 * (s.angle - f.angle));
  }
  if (!f.is_rotation() && s.is_rotation()) {
    // rot(t) * ref(b) = ref(b + t/2)
    if (exact) return O2Element::reflection(*f.exact + *s.exact / Rational(2));
    return O2Element::reflection(f.angle + s.angle / 2.0);
  }
  // ref(b) * rot(t) = ref(b - t/2)
  if (exact) return O2Element::reflection(*s.exact - *f.exact / Rational(2));
  return O2Element::reflection(s.angle - f.angle / 2.0);
}

inline O2Element inverse(const O2Element& e) {
  if (e.is_rotation()) {
    if (e.exact) return O2Element::rotation(-*e.exact);
    return O2Element::rotation(-e.angle);
  }
  return e;  // reflections are involutions; already canonical
}

inline Mat2 to_matrix(const O2Element& e) {
  if (e.is_rotation()) {
    const double th = 2.0 * std::numbers::pi * e.angle;
    const double c = std::cos(th), s = std::sin(th);
    return {c, -s, s, c};
  }
  const double th = 4.0 * std::numbers::pi * e.angle;
  const double c = std::cos(th), s = std::sin(th);
  return {c, s, s, -c};
}

using CMat2 = std::array<std::complex<double>, 4>;  // row-major

inline CMat2 to_cmatrix(const Mat2& m) {
  return {std::complex<double>(m.a), std::complex<double>(m.b),
          std::complex<double>(m.c), std::complex<double>(m.d)};
}

}  // namespace orthocycle
