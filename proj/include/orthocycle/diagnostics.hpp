#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "orthocycle/errors.hpp"
#include "orthocycle/observables.hpp"
#include "orthocycle/skew.hpp"

namespace orthocycle {

// Compensated summation. At N = 10^6 a naive sum of unit-modulus terms
// carries ~5e-11 of roundoff, uncomfortably close to the 1e-10 soundness
// bound on exactly invariant witnesses; Kahan keeps the accumulator honest.
struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double v) {
    const double y = v - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

struct KahanComplex {
  KahanSum re, im;
  void add(std::complex<double> v) {
    re.add(v.real());
    im.add(v.imag());
  }
  std::complex<double> sum() const { return {re.s, im.s}; }
};

struct ScanThresholds {
  // Verdict bands: "ergodic-consistent" needs every |avg - space| <= A_lo and
  // cross-start dispersion <= D_lo; "non-ergodic-detected" needs dispersion
  // > D_hi, or some |avg - space| > A_hi for an observable whose invariance
  // residual is below rho. The wide gap in between reads "inconclusive".
  double A_lo = 0.05;
  double D_lo = 0.05;
  double A_hi = 0.5;
  double D_hi = 0.3;
  double rho = 1e-9;
};

enum class Verdict { ergodic_consistent, non_ergodic_detected, inconclusive };

// Verdicts are heuristic by construction; "ergodic-consistent" is never to be
// printed as "ergodic" (ergodicity is not decidable from finite data).
inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::ergodic_consistent: return "ergodic-consistent";
    case Verdict::non_ergodic_detected: return "non-ergodic-detected";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct ObservableStats {
  Observable obs;
  std::vector<std::complex<double>> per_start;  // Birkhoff averages
  std::complex<double> space_avg{0.0, 0.0};
  double dispersion = 0.0;           // max_i |a_i - mean(a)|
  double max_dev = 0.0;              // max_i |a_i - space_avg|
  double invariance_residual = 0.0;  // max |obs(step p) - obs(p)| on probe orbit
};

struct ErgodicityReport {
  std::string system;
  SkewKind kind = SkewKind::S;
  std::uint64_t N = 0;
  int starts = 0;
  std::uint64_t seed = 0;
  ScanThresholds thresholds;
  std::vector<ObservableStats> entries;
  Verdict verdict = Verdict::inconclusive;
  std::optional<std::size_t> witness_index;

  bool is_ergodic_consistent() const {
    return verdict == Verdict::ergodic_consistent;
  }
  std::string witness_name() const {
    return witness_index ? entries[*witness_index].obs.name() : std::string();
  }
  double worst_deviation() const {
    double w = 0.0;
    for (const auto& e : entries) w = std::max(w, e.max_dev);
    return w;
  }
};

namespace detail {

inline std::complex<double> signed_power(
    const std::vector<std::complex<double>>& pow, int j) {
  return j >= 0 ? pow[static_cast<std::size_t>(j)]
                : std::conj(pow[static_cast<std::size_t>(-j)]);
}

inline void fill_powers(std::complex<double> u,
                        std::vector<std::complex<double>>& pow) {
  for (std::size_t i = 1; i < pow.size(); ++i) pow[i] = pow[i - 1] * u;
}

// One generic orbit state snapshot for residual evaluation.
struct ProbeState {
  double x = 0.0;       // base readout
  double y = 0.0;       // torus fibre
  int a = 0;            // discrete fibre
  GrassCoordC z{};      // sphere fibre
};

inline std::complex<double> eval_probe(const Observable& o, SkewKind kind,
                                       const ProbeState& p) {
  switch (kind) {
    case SkewKind::S: return evaluate(o, p.x, p.y);
    case SkewKind::R: return evaluate_z2(o, p.x, p.a);
    case SkewKind::Z3: return evaluate_z3(o, p.x, p.a);
    case SkewKind::N: return evaluate_sphere(o, p.x, p.z);
  }
  throw InvariantBreach("unhandled skew kind");
}

template <class Base>
struct FibreInit {
  TorusValue y;
  int a2;
  int a3;
  GrassCoordC z;
};

// Start sampling shared by all scan kinds so that per-start seeds do not
// depend on the fibre in use.
template <class Base>
std::pair<typename Base::Point, FibreInit<Base>> sample_start(
    const SkewSystem<Base>& sys, std::uint64_t seed, int start_index) {
  SplitMix64 rng(hash_mix(seed, static_cast<std::uint64_t>(start_index)));
  auto x0 = sys.base.sample_point(rng);
  FibreInit<Base> f{};
  f.y = rng.uniform();
  f.a2 = static_cast<int>(rng.below(2));
  f.a3 = static_cast<int>(rng.below(3));
  const double c = 2.0 * rng.uniform() - 1.0;  // uniform cos(theta) on sphere
  const double r = std::sqrt((1.0 - c) / (1.0 + c));
  f.z = GrassCoordC::finite(std::polar(r, 2.0 * std::numbers::pi * rng.uniform()));
  return {x0, f};
}

}  // namespace detail

// Birkhoff average (1/N) sum obs(orbit_n) for a single observable;
// deterministic given the start. Overloads per fibre type.
template <class Base>
std::complex<double> birkhoff_average(const SkewSystem<Base>& sys,
                                      const Observable& obs,
                                      typename Base::Point x, TorusValue y,
                                      std::uint64_t N) {
  if (N < 1) throw UsageError("birkhoff average needs N >= 1");
  KahanComplex acc;
  for (std::uint64_t n = 0; n < N; ++n) {
    acc.add(evaluate(obs, Base::readout(x), y));
    auto [nx, ny] = sys.step_S(x, y);
    x = nx;
    y = ny;
  }
  return acc.sum() / static_cast<double>(N);
}

template <class Base>
std::complex<double> birkhoff_average_z2(const SkewSystem<Base>& sys,
                                         const Observable& obs,
                                         typename Base::Point x, int a,
                                         std::uint64_t N) {
  if (N < 1) throw UsageError("birkhoff average needs N >= 1");
  KahanComplex acc;
  for (std::uint64_t n = 0; n < N; ++n) {
    acc.add(evaluate_z2(obs, Base::readout(x), a));
    auto [nx, na] = sys.step_R(x, a);
    x = nx;
    a = na;
  }
  return acc.sum() / static_cast<double>(N);
}

// Full scan: per-start Birkhoff averages for every bank observable, plus the
// invariance residual of each observable along a 10^4-step probe orbit, fed
// into the threshold verdict. Starts are independent work items; results are
// reduced in start order so reports are bit-identical for a fixed seed.
template <class Base>
ErgodicityReport ergodicity_scan(const SkewSystem<Base>& sys, SkewKind kind,
                                 const std::vector<Observable>& bank,
                                 int starts, std::uint64_t N,
                                 std::uint64_t seed, ScanThresholds thr = {},
                                 int threads = 1) {
  if (starts < 8) throw UsageError("ergodicity scan needs starts >= 8");
  if (N < 1) throw UsageError("ergodicity scan needs N >= 1");
  const std::size_t nobs = bank.size();

  int max_base_freq = 0, max_fibre_freq = 0;
  for (const auto& o : bank) {
    max_base_freq = std::max(max_base_freq, std::abs(o.j));
    max_fibre_freq = std::max(max_fibre_freq, std::abs(o.k));
  }

  std::vector<std::vector<std::complex<double>>> averages(
      static_cast<std::size_t>(starts),
      std::vector<std::complex<double>>(nobs));

  const auto run_start = [&](int si) {
    auto [x, fibre] = detail::sample_start(sys, seed, si);
    std::vector<KahanComplex> acc(nobs);
    std::vector<std::complex<double>> upow(
        static_cast<std::size_t>(max_base_freq) + 1, {1.0, 0.0});
    std::vector<std::complex<double>> vpow(
        static_cast<std::size_t>(max_fibre_freq) + 1, {1.0, 0.0});

    TorusValue y = fibre.y;
    int a = (kind == SkewKind::Z3) ? fibre.a3 : fibre.a2;
    GrassCoordC z = fibre.z;

    for (std::uint64_t n = 0; n < N; ++n) {
      detail::fill_powers(detail::unit_phase(Base::readout(x)), upow);
      switch (kind) {
        case SkewKind::S: {
          detail::fill_powers(detail::unit_phase(y), vpow);
          for (std::size_t oi = 0; oi < nobs; ++oi) {
            const Observable& o = bank[oi];
            if (o.kind == Observable::Kind::torus_char) {
              acc[oi].add(detail::signed_power(upow, o.j) *
                          detail::signed_power(vpow, o.k));
            } else {  // fibre_cos
              acc[oi].add({vpow[static_cast<std::size_t>(o.k)].real(), 0.0});
            }
          }
          auto [nx, ny] = sys.step_S(x, y);
          x = nx;
          y = ny;
          break;
        }
        case SkewKind::R: {
          const double sgn = (a & 1) ? -1.0 : 1.0;
          for (std::size_t oi = 0; oi < nobs; ++oi) {
            const Observable& o = bank[oi];
            const std::complex<double> b = detail::signed_power(upow, o.j);
            acc[oi].add(o.s < 0 ? sgn * b : b);
          }
          auto [nx, na] = sys.step_R(x, a);
          x = nx;
          a = na;
          break;
        }
        case SkewKind::Z3: {
          for (std::size_t oi = 0; oi < nobs; ++oi) {
            const Observable& o = bank[oi];
            const std::complex<double> b = detail::signed_power(upow, o.j);
            if (o.kind == Observable::Kind::z3_char) {
              acc[oi].add(b * detail::unit_phase(o.chi * a / 3.0));
            } else {
              acc[oi].add(b);
            }
          }
          auto [nx, na] = sys.step_Z3(x, a);
          x = nx;
          a = na;
          break;
        }
        case SkewKind::N: {
          const double kz = k_of(z);
          for (std::size_t oi = 0; oi < nobs; ++oi) {
            const Observable& o = bank[oi];
            if (o.kind == Observable::Kind::k_radial) {
              acc[oi].add({kz, 0.0});
            } else {
              acc[oi].add(detail::signed_power(upow, o.j));
            }
          }
          auto [nx, nz] = sys.step_N(x, z);
          x = nx;
          z = nz;
          break;
        }
      }
    }
    for (std::size_t oi = 0; oi < nobs; ++oi)
      averages[static_cast<std::size_t>(si)][oi] =
          acc[oi].sum() / static_cast<double>(N);
  };

  if (threads <= 1 || starts == 1) {
    for (int si = 0; si < starts; ++si) run_start(si);
  } else {
    const int workers = std::min(threads, starts);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int si = w; si < starts; si += workers) run_start(si);
      });
    for (auto& t : pool) t.join();
  }

  // Invariance residuals along a probe orbit from start 0.
  const std::uint64_t probe_len = std::min<std::uint64_t>(N, 10'000);
  std::vector<detail::ProbeState> probe(probe_len + 1);
  {
    auto [x, fibre] = detail::sample_start(sys, seed, 0);
    TorusValue y = fibre.y;
    int a = (kind == SkewKind::Z3) ? fibre.a3 : fibre.a2;
    GrassCoordC z = fibre.z;
    for (std::uint64_t n = 0; n <= probe_len; ++n) {
      probe[n] = {Base::readout(x), y, a, z};
      switch (kind) {
        case SkewKind::S: {
          auto [nx, ny] = sys.step_S(x, y);
          x = nx;
          y = ny;
          break;
        }
        case SkewKind::R: {
          auto [nx, na] = sys.step_R(x, a);
          x = nx;
          a = na;
          break;
        }
        case SkewKind::Z3: {
          auto [nx, na] = sys.step_Z3(x, a);
          x = nx;
          a = na;
          break;
        }
        case SkewKind::N: {
          auto [nx, nz] = sys.step_N(x, z);
          x = nx;
          z = nz;
          break;
        }
      }
    }
  }

  ErgodicityReport rep;
  rep.system = sys.id() + "/" + skew_kind_name(kind);
  rep.kind = kind;
  rep.N = N;
  rep.starts = starts;
  rep.seed = seed;
  rep.thresholds = thr;
  rep.entries.resize(nobs);

  for (std::size_t oi = 0; oi < nobs; ++oi) {
    ObservableStats& st = rep.entries[oi];
    st.obs = bank[oi];
    st.space_avg = bank[oi].space_average();
    st.per_start.resize(static_cast<std::size_t>(starts));
    std::complex<double> mean{0.0, 0.0};
    for (int si = 0; si < starts; ++si) {
      st.per_start[static_cast<std::size_t>(si)] =
          averages[static_cast<std::size_t>(si)][oi];
      mean += st.per_start[static_cast<std::size_t>(si)];
    }
    mean /= static_cast<double>(starts);
    for (const auto& a : st.per_start) {
      st.dispersion = std::max(st.dispersion, std::abs(a - mean));
      st.max_dev = std::max(st.max_dev, std::abs(a - st.space_avg));
    }
    double res = 0.0;
    for (std::uint64_t n = 0; n < probe_len; ++n)
      res = std::max(res, std::abs(detail::eval_probe(bank[oi], kind, probe[n + 1]) -
                                   detail::eval_probe(bank[oi], kind, probe[n])));
    st.invariance_residual = res;
  }

  bool all_quiet = true;
  for (std::size_t oi = 0; oi < nobs; ++oi) {
    const auto& st = rep.entries[oi];
    if (st.max_dev > thr.A_lo || st.dispersion > thr.D_lo) all_quiet = false;
    const bool invariant_loud =
        st.max_dev > thr.A_hi && st.invariance_residual < thr.rho;
    if (st.dispersion > thr.D_hi || invariant_loud) {
      rep.verdict = Verdict::non_ergodic_detected;
    }
  }
  if (rep.verdict == Verdict::non_ergodic_detected) {
    for (std::size_t oi = 0; oi < nobs && !rep.witness_index; ++oi) {
      const auto& st = rep.entries[oi];
      if (st.invariance_residual <= thr.rho && st.max_dev > thr.A_hi)
        rep.witness_index = oi;
    }
    for (std::size_t oi = 0; oi < nobs && !rep.witness_index; ++oi)
      if (rep.entries[oi].dispersion > thr.D_hi) rep.witness_index = oi;
  } else {
    rep.verdict = all_quiet ? Verdict::ergodic_consistent : Verdict::inconclusive;
  }
  return rep;
}

template <class Base>
ErgodicityReport ergodicity_scan(const SkewSystem<Base>& sys, SkewKind kind,
                                 int starts, std::uint64_t N,
                                 std::uint64_t seed, ScanThresholds thr = {},
                                 int threads = 1) {
  return ergodicity_scan(sys, kind, default_bank(kind), starts, N, seed, thr,
                         threads);
}

}  // namespace orthocycle
