#pragma once

#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "orthocycle/base_system.hpp"
#include "orthocycle/errors.hpp"
#include "orthocycle/o2.hpp"

namespace orthocycle {

enum class GenKind { example1, example2, example3, cex1, cex2, table };

// The generator A0 = A(1, .) of a cocycle, as a pure function of the base
// point. Interval partitions are left-closed/right-open throughout.
//
// `alpha` is the fibre translation on T produced by the rotation branch (the
// underlying rotation is by alpha/2 turns, i.e. by angle pi*alpha); `eta` is
// the length of the flip interval [1-eta, 1) and must match the base rotation
// step for the built-in examples.
struct CocycleGenerator {
  GenKind kind = GenKind::example1;
  double alpha = 0.0;
  double eta = 0.0;
  std::optional<Rational> alpha_exact;
  std::optional<Rational> eta_exact;
  std::vector<double> cuts;        // table: cell starts, cuts[0] == 0, increasing
  std::vector<O2Element> table;    // table: one element per cell

  std::string id() const {
    switch (kind) {
      case GenKind::example1: return "example1";
      case GenKind::example2:
        return "example2(alpha=" + std::to_string(alpha) +
               ",eta=" + std::to_string(eta) + ")";
      case GenKind::example3: return "example3(alpha=" + std::to_string(alpha) + ")";
      case GenKind::cex1: return "cex1(eta=" + std::to_string(eta) + ")";
      case GenKind::cex2: return "cex2";
      case GenKind::table: return "table[" + std::to_string(table.size()) + "]";
    }
    return "?";
  }

  static CocycleGenerator make_example1() { return {GenKind::example1}; }
  static CocycleGenerator make_example2(double alpha, double eta) {
    CocycleGenerator g;
    g.kind = GenKind::example2;
    g.alpha = alpha;
    g.eta = eta;
    return g;
  }
  static CocycleGenerator make_example3(double alpha) {
    CocycleGenerator g;
    g.kind = GenKind::example3;
    g.alpha = alpha;
    return g;
  }
  static CocycleGenerator make_cex1(double eta) {
    CocycleGenerator g;
    g.kind = GenKind::cex1;
    g.eta = eta;
    return g;
  }
  static CocycleGenerator make_cex2() { return {GenKind::cex2}; }
  static CocycleGenerator make_table(std::vector<double> cuts,
                                     std::vector<O2Element> elems) {
    if (cuts.empty() || cuts.front() != 0.0 || cuts.size() != elems.size())
      throw UsageError("table generator needs cuts starting at 0, one element per cell");
    for (std::size_t i = 1; i < cuts.size(); ++i)
      if (!(cuts[i - 1] < cuts[i]) || cuts[i] >= 1.0)
        throw UsageError("table generator cuts must increase within [0,1)");
    CocycleGenerator g;
    g.kind = GenKind::table;
    g.cuts = std::move(cuts);
    g.table = std::move(elems);
    return g;
  }

 private:
  O2Element rotation_branch() const {
    if (alpha_exact) return O2Element::rotation(*alpha_exact / Rational(2));
    return O2Element::rotation(alpha / 2.0);
  }

 public:
  // Rotation-base generators.
  O2Element at(double x) const {
    switch (kind) {
      case GenKind::example1:
        return O2Element::rotation(x / 2.0);  // alpha_x = pi x
      case GenKind::example2:
        return x < 1.0 - eta ? rotation_branch()
                             : O2Element::reflection(Rational(0));
      case GenKind::cex1:
        return O2Element::rotation(Rational(1, 6));
      case GenKind::table: {
        std::size_t i = cuts.size() - 1;
        while (i > 0 && x < cuts[i]) --i;
        return table[i];
      }
      case GenKind::example3:
      case GenKind::cex2:
        throw std::domain_error(id() + " is driven by a shift base, not a rotation");
    }
    throw std::domain_error("unknown generator kind");
  }

  // Shift-base generators branch on the symbol at the origin.
  O2Element at(const BernoulliPoint& p) const {
    switch (kind) {
      case GenKind::example3:
        return p.symbol(0) == 0 ? rotation_branch()
                                : O2Element::reflection(Rational(0));
      case GenKind::cex2:
        return p.symbol(0) == 0 ? O2Element::rotation(Rational(1, 6))
                                : O2Element::reflection(Rational(0));
      default:
        throw std::domain_error(id() + " is driven by a rotation base, not a shift");
    }
  }
};

inline O2Element generator_at(const CocycleGenerator& g, double x) {
  return g.at(x);
}
inline O2Element generator_at(const CocycleGenerator& g,
                              const BernoulliPoint& p) {
  return g.at(p);
}

// A(n, x) in angle form. n = 0 gives the identity; negative n walks the
// backward orbit with inverted generators: A(-n, x) = A0(T^-n x)^-1 ... A0(T^-1 x)^-1.
template <class Base>
O2Element cocycle_product(const CocycleGenerator& g, const Base& base,
                          typename Base::Point x, long long n,
                          long long cap = 10'000'000) {
  if (std::llabs(n) > cap)
    throw ResourceError("cocycle product of length " + std::to_string(n) +
                        " exceeds cap " + std::to_string(cap));
  O2Element acc = O2Element::identity();
  if (n >= 0) {
    for (long long i = 0; i < n; ++i) {
      acc = compose(acc, generator_at(g, x));
      x = base.step(x);
    }
  } else {
    for (long long j = 0; j < -n; ++j) {
      x = base.step_inverse(x);
      acc = compose(acc, inverse(generator_at(g, x)));
    }
  }
  return acc;
}

// (1/n) log(|A(n,x) v| / |v|). The product is accumulated as an honest
// numerical matrix-vector iteration so roundoff growth is part of what is
// being measured; for orthogonal cocycles the result must hug zero.
template <class Base>
double growth_check(const CocycleGenerator& g, const Base& base,
                    typename Base::Point x, double vx, double vy,
                    long long n) {
  const double norm0 = std::hypot(vx, vy);
  if (norm0 == 0.0) throw std::domain_error("growth check needs a nonzero vector");
  if (n < 1) throw std::domain_error("growth check needs n >= 1");
  for (long long i = 0; i < n; ++i) {
    const Mat2 m = to_matrix(generator_at(g, x));
    const double nx = m.a * vx + m.b * vy;
    const double ny = m.c * vx + m.d * vy;
    vx = nx;
    vy = ny;
    x = base.step(x);
  }
  return std::log(std::hypot(vx, vy) / norm0) / static_cast<double>(n);
}

}  // namespace orthocycle
