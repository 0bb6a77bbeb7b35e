#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "orthocycle/errors.hpp"
#include "orthocycle/rng.hpp"
#include "orthocycle/skew.hpp"

namespace orthocycle {

struct ReturnEvent {
  double v_in = 0.0;   // section coordinate on entry, rescaled to [0,1)
  double v_out = 0.0;  // section coordinate after the return
  double y_in = 0.0;
  double y_out = 0.0;
  long long ret = 0;  // return time
  O2Element excursion = O2Element::identity();  // cocycle product over the excursion
};

// First-return machinery of the torus skew product over a section
// [a, b) x T of the base circle.
struct InducedSystem {
  SkewSystem<RotationBase> sys;
  double a = 0.0, b = 1.0;

  InducedSystem(SkewSystem<RotationBase> s, double lo, double hi)
      : sys(std::move(s)), a(lo), b(hi) {
    if (!(0.0 <= a && a < b && b <= 1.0))
      throw UsageError("section must satisfy 0 <= a < b <= 1");
  }

  double length() const { return b - a; }
  bool in_section(double x) const { return x >= a && x < b; }
  double rescale(double x) const { return (x - a) / (b - a); }
  double unscale(double v) const { return a + v * (b - a); }

  ReturnEvent first_return(double x, double y,
                           long long cap = 1'000'000) const {
    if (!in_section(x))
      throw std::domain_error("first_return: start lies outside the section");
    ReturnEvent ev;
    ev.v_in = rescale(x);
    ev.y_in = y;
    double cx = x, cy = y;
    O2Element prod = O2Element::identity();
    for (long long n = 1; n <= cap; ++n) {
      prod = compose(prod, sys.element_at(cx));
      auto [nx, ny] = sys.step_S(cx, cy);
      cx = nx;
      cy = ny;
      if (in_section(cx)) {
        ev.v_out = rescale(cx);
        ev.y_out = cy;
        ev.ret = n;
        ev.excursion = prod;
        return ev;
      }
    }
    throw ResourceError("first_return: no return within step cap");
  }
};

struct RotationNumberReport {
  double a = 0.0, b = 0.0;
  long long events = 0;
  double raw_increment = 0.0;  // common section increment, mod 1
  double canonical = 0.0;      // min(c, 1 - c)
  double max_deviation = 0.0;  // worst spread of increments around raw
};

// The induced base map of a circle rotation on an interval section is again
// a rigid rotation; read its angle off the orbit increments.
inline RotationNumberReport induced_rotation_number(
    const SkewSystem<RotationBase>& sys, double a, double b, long long events,
    std::uint64_t seed = 12345) {
  if (events < 2) throw UsageError("rotation number needs at least 2 events");
  InducedSystem ind(sys, a, b);
  SplitMix64 rng(seed);
  double x = ind.unscale(rng.uniform());
  double y = rng.uniform();
  RotationNumberReport rep;
  rep.a = a;
  rep.b = b;
  rep.events = events;
  double prev = ind.rescale(x);
  for (long long i = 0; i < events; ++i) {
    auto ev = ind.first_return(x, y);
    const double inc = wrap_unit(ev.v_out - prev);
    if (i == 0)
      rep.raw_increment = inc;
    else
      rep.max_deviation = std::max(rep.max_deviation,
                                   circle_dist(inc, rep.raw_increment));
    prev = ev.v_out;
    x = ind.unscale(ev.v_out);
    y = ev.y_out;
  }
  rep.canonical = std::min(rep.raw_increment, 1.0 - rep.raw_increment);
  return rep;
}

struct KacReport {
  double expected = 0.0;  // 1 / section length
  double observed = 0.0;  // empirical mean return time
  double rel_error = 0.0;
};

struct SbReport {
  double eta = 0.0, alpha = 0.0, beta = 0.0;
  long long event_count = 0;
  std::map<long long, long long> return_histogram;
  std::map<long long, long long> fitted_k;  // per return time
  double max_base_discrepancy = 0.0;   // vs v -> v - beta
  double max_fibre_discrepancy = 0.0;  // vs y -> k*alpha - y
  double max_discrepancy = 0.0;
  bool all_reflections = true;  // every excursion is orientation-reversing
  KacReport kac;
};

namespace detail {

inline long long fit_fibre_multiple(double target, double alpha,
                                    long long lo, long long hi) {
  long long best = lo;
  double best_d = circle_dist(target, wrap_unit(lo * alpha));
  for (long long k = lo + 1; k <= hi; ++k) {
    const double d = circle_dist(target, wrap_unit(k * alpha));
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

}  // namespace detail

// Fits the first-return map of the flip/rotation cocycle over the flip
// interval [1-eta, 1) against the closed form (v, y) -> (v - beta, k alpha - y)
// with beta = frac(1/eta) and one integer k per return-time branch.
inline SbReport verify_sb_formula(double eta, double alpha, long long events,
                                  std::uint64_t seed = 12345) {
  if (events < 1) throw UsageError("verify_sb_formula needs events >= 1");
  SkewSystem<RotationBase> sys{RotationBase{eta},
                               CocycleGenerator::make_example2(alpha, eta)};
  InducedSystem ind(sys, 1.0 - eta, 1.0);
  SbReport rep;
  rep.eta = eta;
  rep.alpha = alpha;
  rep.beta = 1.0 / eta - std::floor(1.0 / eta);
  rep.event_count = events;

  SplitMix64 rng(seed);
  double x = ind.unscale(rng.uniform());
  double y = rng.uniform();

  std::map<long long, std::vector<ReturnEvent>> branches;
  long long total_ret = 0;
  for (long long i = 0; i < events; ++i) {
    auto ev = ind.first_return(x, y);
    rep.return_histogram[ev.ret] += 1;
    total_ret += ev.ret;
    if (ev.excursion.is_rotation()) rep.all_reflections = false;
    rep.max_base_discrepancy =
        std::max(rep.max_base_discrepancy,
                 circle_dist(ev.v_out, wrap_unit(ev.v_in - rep.beta)));
    branches[ev.ret].push_back(ev);
    x = ind.unscale(ev.v_out);
    y = ev.y_out;
  }

  for (auto& [ret, evs] : branches) {
    // y_out = k alpha - y_in, so y_in + y_out pins k alpha on the circle.
    const long long k = detail::fit_fibre_multiple(
        wrap_unit(evs.front().y_in + evs.front().y_out), alpha, 0, ret + 1);
    rep.fitted_k[ret] = k;
    for (const auto& ev : evs)
      rep.max_fibre_discrepancy = std::max(
          rep.max_fibre_discrepancy,
          circle_dist(ev.y_out, wrap_unit(k * alpha - ev.y_in)));
  }
  rep.max_discrepancy =
      std::max(rep.max_base_discrepancy, rep.max_fibre_discrepancy);
  rep.kac.expected = 1.0 / ind.length();
  rep.kac.observed = static_cast<double>(total_ret) / events;
  rep.kac.rel_error =
      std::abs(rep.kac.observed - rep.kac.expected) / rep.kac.expected;
  return rep;
}

struct QReport {
  double eta = 0.0, alpha = 0.0, beta = 0.0;
  double zeta = 0.0;  // frac(1/(2 beta)), the accelerated rotation number
  long long event_count = 0;
  double conjugacy_shift = 0.0;        // fitted branch boundary d0 (expect ~0)
  double max_base_discrepancy = 0.0;   // vs s -> s + zeta
  double max_fibre_discrepancy = 0.0;  // vs nearest of y -> y -/+ alpha
  double branch_boundary_residual = 0.0;  // worst violation of the fitted split
  double branch_fraction_minus = 0.0;
  double max_discrepancy = 0.0;  // max(base, fibre); fit-independent
};

// Second acceleration: the square of the flip return map, induced on the
// first 2*beta of its section and rescaled, against the closed form
// (s, y) -> (s + zeta, y - alpha) on [d0, d0 + 1/2) and (s + zeta, y + alpha)
// on the complementary half-circle. The boundary d0 is fitted from the data
// (largest circular gap of the minus-branch events), and its residual is
// reported separately because it converges like 1/events rather than to
// machine precision.
inline QReport verify_q_formula(double eta, double alpha, long long events,
                                std::uint64_t seed = 12345) {
  if (events < 8) throw UsageError("verify_q_formula needs events >= 8");
  SkewSystem<RotationBase> sys{RotationBase{eta},
                               CocycleGenerator::make_example2(alpha, eta)};
  InducedSystem flip_section(sys, 1.0 - eta, 1.0);

  QReport rep;
  rep.eta = eta;
  rep.alpha = alpha;
  rep.beta = 1.0 / eta - std::floor(1.0 / eta);
  if (!(2.0 * rep.beta < 1.0))
    throw std::domain_error("verify_q_formula needs 2*frac(1/eta) < 1");
  rep.zeta = 1.0 / (2.0 * rep.beta) - std::floor(1.0 / (2.0 * rep.beta));
  rep.event_count = events;

  // One step of P = (flip return map)^2, in that map's section coordinates.
  const auto p_step = [&](double v, double y) {
    auto e1 = flip_section.first_return(flip_section.unscale(v), y);
    auto e2 = flip_section.first_return(flip_section.unscale(e1.v_out), e1.y_out);
    return std::pair<double, double>(e2.v_out, e2.y_out);
  };

  SplitMix64 rng(seed);
  const double width = 2.0 * rep.beta;
  double v = width * rng.uniform();
  double y = rng.uniform();

  struct QEvent {
    double s_in;
    double dy;  // fibre increment, wrapped to [-1/2, 1/2)
    bool minus;
  };
  std::vector<QEvent> evs;
  evs.reserve(static_cast<std::size_t>(events));
  long long minus_count = 0;

  double s_prev = v / width;
  for (long long i = 0; i < events; ++i) {
    const double y_in = y;
    long long guard = 0;
    double cv = v, cy = y;
    do {
      auto [nv, ny] = p_step(cv, cy);
      cv = nv;
      cy = ny;
      if (++guard > 64)
        throw ResourceError("verify_q_formula: no return to the short section");
    } while (!(cv < width));
    v = cv;
    y = cy;

    const double s = v / width;
    rep.max_base_discrepancy = std::max(
        rep.max_base_discrepancy, circle_dist(s, wrap_unit(s_prev + rep.zeta)));
    const double dy = wrap_signed(y - y_in);
    const bool minus = circle_dist(dy, -alpha) <= circle_dist(dy, alpha);
    rep.max_fibre_discrepancy =
        std::max(rep.max_fibre_discrepancy,
                 circle_dist(dy, minus ? -alpha : alpha));
    if (minus) ++minus_count;
    evs.push_back({s_prev, dy, minus});
    s_prev = s;
  }
  rep.branch_fraction_minus = static_cast<double>(minus_count) / events;
  rep.max_discrepancy =
      std::max(rep.max_base_discrepancy, rep.max_fibre_discrepancy);

  // Fit d0: minus-branch entries fill an arc of length 1/2; the largest
  // circular gap between them is the plus branch, and the arc starts where
  // that gap ends.
  std::vector<double> minus_pts;
  for (const auto& e : evs)
    if (e.minus) minus_pts.push_back(e.s_in);
  if (minus_pts.size() < 2 || minus_pts.size() + 2 > evs.size())
    throw std::domain_error("verify_q_formula: a fibre branch is unpopulated");
  std::sort(minus_pts.begin(), minus_pts.end());
  double best_gap = 1.0 - minus_pts.back() + minus_pts.front();
  double d0 = minus_pts.front();
  for (std::size_t i = 1; i < minus_pts.size(); ++i) {
    const double gap = minus_pts[i] - minus_pts[i - 1];
    if (gap > best_gap) {
      best_gap = gap;
      d0 = minus_pts[i];
    }
  }
  rep.conjugacy_shift = d0;
  for (const auto& e : evs) {
    const double u = wrap_unit(e.s_in - d0);
    double viol = 0.0;
    if (e.minus)
      viol = u < 0.5 ? 0.0 : std::min(u - 0.5, 1.0 - u);
    else
      viol = u >= 0.5 ? 0.0 : std::min(u, 0.5 - u);
    rep.branch_boundary_residual = std::max(rep.branch_boundary_residual, viol);
  }
  return rep;
}

}  // namespace orthocycle
