#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "orthocycle/grassmannian.hpp"
#include "orthocycle/skew.hpp"

namespace orthocycle {

// Character-style test functions for the ergodicity scans. All are bounded by
// 1 and, except for the radial observable, have space average 0 against the
// product of the base measure with the uniform fibre measure.
struct Observable {
  enum class Kind {
    torus_char,  // e^{2 pi i (j x + k y)} on torus-fibre systems
    fibre_cos,   // cos(2 pi k y): reflection-invariant fibre detector
    z2_char,     // s^a e^{2 pi i j x} with s = +-1
    z3_char,     // omega^{chi a} e^{2 pi i j x}, omega = e^{2 pi i / 3}
    k_radial     // k(z) = min(|z|, 1/|z|) on sphere-fibre systems
  };

  Kind kind = Kind::torus_char;
  int j = 0;    // base frequency
  int k = 0;    // fibre frequency
  int s = 1;    // z2 sign
  int chi = 0;  // z3 character index in {1, 2}

  std::string name() const {
    switch (kind) {
      case Kind::torus_char:
        return "char(j=" + std::to_string(j) + ",k=" + std::to_string(k) + ")";
      case Kind::fibre_cos:
        return "cos(k=" + std::to_string(k) + ")";
      case Kind::z2_char:
        return (s < 0 ? "z2sign(j=" : "base(j=") + std::to_string(j) + ")";
      case Kind::z3_char:
        return "z3(j=" + std::to_string(j) + ",chi=" + std::to_string(chi) + ")";
      case Kind::k_radial:
        return "k_radial";
    }
    return "?";
  }

  std::complex<double> space_average() const {
    if (kind == Kind::k_radial)
      return {std::numbers::pi / 2.0 - 1.0, 0.0};  // E[min(|z|,1/|z|)] on the sphere
    return {0.0, 0.0};
  }
};

namespace detail {
inline std::complex<double> unit_phase(double turns) {
  const double th = 2.0 * std::numbers::pi * turns;
  return {std::cos(th), std::sin(th)};
}
}  // namespace detail

// Pointwise evaluation. `x` is the base readout (the point itself for
// rotations, xi for shifts); the fibre argument matches the system kind.
inline std::complex<double> evaluate(const Observable& o, double x, double y) {
  switch (o.kind) {
    case Observable::Kind::torus_char:
      return detail::unit_phase(o.j * x + o.k * y);
    case Observable::Kind::fibre_cos:
      return {std::cos(2.0 * std::numbers::pi * o.k * y), 0.0};
    default:
      throw std::domain_error(o.name() + " is not a torus-fibre observable");
  }
}

inline std::complex<double> evaluate_z2(const Observable& o, double x, int a) {
  if (o.kind != Observable::Kind::z2_char)
    throw std::domain_error(o.name() + " is not a Z2 observable");
  const double sgn = (o.s < 0 && (a & 1)) ? -1.0 : 1.0;
  return sgn * detail::unit_phase(o.j * x);
}

inline std::complex<double> evaluate_z3(const Observable& o, double x, int a) {
  if (o.kind == Observable::Kind::z2_char && o.s > 0)
    return detail::unit_phase(o.j * x);  // plain base character
  if (o.kind != Observable::Kind::z3_char)
    throw std::domain_error(o.name() + " is not a Z3 observable");
  return detail::unit_phase(o.j * x + o.chi * a / 3.0);
}

inline std::complex<double> evaluate_sphere(const Observable& o, double x,
                                            const GrassCoordC& z) {
  if (o.kind == Observable::Kind::k_radial) return {k_of(z), 0.0};
  if (o.kind == Observable::Kind::z2_char && o.s > 0)
    return detail::unit_phase(o.j * x);
  throw std::domain_error(o.name() + " is not a sphere observable");
}

// Default banks. Order matters for witness selection and is chosen so that
// the lowest-complexity invariant observable is reported: fibre frequencies
// before base-mixed ones, positive before negative.
inline std::vector<Observable> default_bank(SkewKind kind) {
  std::vector<Observable> bank;
  const auto signed_order = [](int maxabs, auto&& fn, bool include_zero) {
    if (include_zero) fn(0);
    for (int v = 1; v <= maxabs; ++v) {
      fn(v);
      fn(-v);
    }
  };
  switch (kind) {
    case SkewKind::S:
      // e^{2 pi i (j x + k y)}, |j|,|k| <= 5, (j,k) != (0,0)
      signed_order(5, [&](int j) {
        signed_order(5, [&](int k) {
          if (j == 0 && k == 0) return;
          bank.push_back({Observable::Kind::torus_char, j, k});
        }, true);
      }, true);
      for (int k = 1; k <= 6; ++k)
        bank.push_back({Observable::Kind::fibre_cos, 0, k});
      break;
    case SkewKind::R:
      signed_order(5, [&](int j) {
        if (j != 0) bank.push_back({Observable::Kind::z2_char, j, 0, +1});
      }, true);
      signed_order(5, [&](int j) {
        bank.push_back({Observable::Kind::z2_char, j, 0, -1});
      }, true);
      break;
    case SkewKind::Z3:
      signed_order(5, [&](int j) {
        if (j != 0) bank.push_back({Observable::Kind::z2_char, j, 0, +1});
      }, true);
      for (int chi = 1; chi <= 2; ++chi)
        signed_order(5, [&](int j) {
          Observable o;
          o.kind = Observable::Kind::z3_char;
          o.j = j;
          o.chi = chi;
          bank.push_back(o);
        }, true);
      break;
    case SkewKind::N:
      signed_order(5, [&](int j) {
        if (j != 0) bank.push_back({Observable::Kind::z2_char, j, 0, +1});
      }, true);
      bank.push_back({Observable::Kind::k_radial});
      break;
  }
  return bank;
}

}  // namespace orthocycle
