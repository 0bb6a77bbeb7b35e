#pragma once

#include <cstdint>
#include <string>

#include "orthocycle/rng.hpp"
#include "orthocycle/torus.hpp"

namespace orthocycle {

// Irrational rotation x -> x + eta on T. Irrationality of eta is assumed, not
// checked (undecidable from a float); configs carry it symbolically.
struct RotationBase {
  double eta = 0.0;

  using Point = double;

  Point step(Point x) const { return wrap_unit(x + eta); }
  Point step_inverse(Point x) const { return wrap_unit(x - eta); }
  Point sample_point(SplitMix64& rng) const { return rng.uniform(); }

  // Coordinate fed to base characters e^{2 pi i j x}.
  static double readout(Point x) { return x; }

  std::string label() const { return "rotation(eta=" + std::to_string(eta) + ")"; }
};

// A point of the two-sided Bernoulli shift: a lazily materialized bi-infinite
// 0/1 tape. symbol(i) is a pure hash of (seed, offset+i), so backward
// iteration needs no stored history and re-reads are trivially reproducible.
struct BernoulliPoint {
  std::uint64_t seed = 0;
  std::int64_t offset = 0;

  int symbol(std::int64_t i) const {
    return static_cast<int>(
        hash_mix(seed, static_cast<std::uint64_t>(offset + i)) & 1u);
  }

  // Canonical real readout xi = sum_{i<53} symbol(i) 2^{-(i+1)}. Every partial
  // sum is dyadic with <= 53 fractional bits, so the value is exact in a
  // double and shifting the point shifts the readout exactly.
  double xi() const {
    double v = 0.0;
    for (int i = 52; i >= 0; --i) v = 0.5 * (v + symbol(i));
    return v;
  }

  friend bool operator==(const BernoulliPoint&, const BernoulliPoint&) = default;
};

// Fair two-symbol Bernoulli shift; step is the left shift.
struct BernoulliBase {
  using Point = BernoulliPoint;

  Point step(Point p) const {
    ++p.offset;
    return p;
  }
  Point step_inverse(Point p) const {
    --p.offset;
    return p;
  }
  Point sample_point(SplitMix64& rng) const { return Point{rng.next(), 0}; }

  static double readout(const Point& p) { return p.xi(); }

  std::string label() const { return "bernoulli(1/2,1/2)"; }
};

}  // namespace orthocycle
