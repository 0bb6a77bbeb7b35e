#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "orthocycle/errors.hpp"
#include "orthocycle/rational.hpp"

namespace orthocycle {

// Finite union of half-open intervals [lo, hi) in [0,1) with exact rational
// endpoints, kept sorted, disjoint and merged so that set equality is plain
// structural equality. Individual boundary points carry no measure and are
// deliberately ignored: images of half-open intervals under reflections are
// re-normalized to half-open form.
class RationalIntervalSet {
 public:
  struct Interval {
    Rational lo, hi;
    friend bool operator==(const Interval&, const Interval&) = default;
  };

  RationalIntervalSet() = default;

  static RationalIntervalSet from_intervals(
      std::vector<std::pair<Rational, Rational>> raw) {
    std::vector<Interval> parts;
    for (auto& [lo, hi] : raw) {
      Rational len = hi - lo;
      if (len <= Rational(0)) continue;
      if (len >= Rational(1)) {  // covers the whole circle
        parts.push_back({Rational(0), Rational(1)});
        continue;
      }
      Rational l = lo.frac();
      Rational h = l + len;
      if (h <= Rational(1)) {
        parts.push_back({l, h});
      } else {  // wraps: split at 1
        parts.push_back({l, Rational(1)});
        parts.push_back({Rational(0), h - Rational(1)});
      }
    }
    RationalIntervalSet out;
    out.parts_ = normalize(std::move(parts));
    return out;
  }

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }

  Rational measure() const {
    Rational m(0);
    for (const auto& p : parts_) m = m + (p.hi - p.lo);
    return m;
  }

  // Image under y -> y + t (mod 1).
  RationalIntervalSet translate(const Rational& t) const {
    std::vector<std::pair<Rational, Rational>> raw;
    raw.reserve(parts_.size());
    for (const auto& p : parts_) raw.emplace_back(p.lo + t, p.hi + t);
    return from_intervals(std::move(raw));
  }

  // Image under y -> c - y (mod 1), normalized back to half-open form.
  RationalIntervalSet reflect(const Rational& c) const {
    std::vector<std::pair<Rational, Rational>> raw;
    raw.reserve(parts_.size());
    for (const auto& p : parts_) raw.emplace_back(c - p.hi, c - p.lo);
    return from_intervals(std::move(raw));
  }

  friend bool operator==(const RationalIntervalSet&,
                         const RationalIntervalSet&) = default;

  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) s += " u ";
      s += "[" + parts_[i].lo.str() + "," + parts_[i].hi.str() + ")";
    }
    return s + "}";
  }

 private:
  static std::vector<Interval> normalize(std::vector<Interval> parts) {
    std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
      return a.lo < b.lo;
    });
    std::vector<Interval> out;
    for (const auto& p : parts) {
      if (!out.empty() && p.lo <= out.back().hi) {
        if (out.back().hi < p.hi) out.back().hi = p.hi;
      } else {
        out.push_back(p);
      }
    }
    // [x,1) followed by [0,y) stays as produced; merging across 0 would break
    // the sorted half-open representation, and equality is still structural.
    return out;
  }

  std::vector<Interval> parts_;
};

// y -> y + c (translate) or y -> c - y (reflect); the exact shadow of an O2
// element's fibre action when its angle is rational.
struct ExactFibreMap {
  bool reflect = false;
  Rational c{0};

  RationalIntervalSet apply(const RationalIntervalSet& s) const {
    return reflect ? s.reflect(c) : s.translate(c);
  }
};

struct InvariantSetCheck {
  bool invariant = false;
  Rational measure{0};
};

// A set B x T-fibre is invariant under the skew product iff each fibre branch
// map preserves B (the base coordinate never feeds the fibre coordinate), so
// exact skew-invariance reduces to exact interval-set equality per branch.
inline InvariantSetCheck verify_invariant_set(
    const std::vector<ExactFibreMap>& maps, const RationalIntervalSet& B) {
  InvariantSetCheck out;
  out.measure = B.measure();
  out.invariant = true;
  for (const auto& m : maps)
    if (!(m.apply(B) == B)) out.invariant = false;
  return out;
}

}  // namespace orthocycle
