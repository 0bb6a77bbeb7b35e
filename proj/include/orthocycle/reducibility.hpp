#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orthocycle/diagnostics.hpp"
#include "orthocycle/errors.hpp"
#include "orthocycle/grassmannian.hpp"
#include "orthocycle/interval_set.hpp"
#include "orthocycle/skew.hpp"

namespace orthocycle {

enum class Chart { complex_line, real_direction };

// A candidate equivariant family of lines, sampled along an orbit. Constant
// sections are the only ones we search for; the residual measures how far
// the pushforward drifts from the section.
struct InvariantSection {
  Chart chart = Chart::complex_line;
  std::string system;  // provenance: generator id + base label
  bool is_constant = true;
  GrassCoordC zc{};
  double yr = 0.0;
  long long samples = 0;
  double residual = 0.0;
  std::string label;
};

template <class Base>
InvariantSection verify_constant_complex_section(const SkewSystem<Base>& sys,
                                                 GrassCoordC z0,
                                                 long long samples,
                                                 std::uint64_t seed = 12345) {
  if (samples < 1) throw UsageError("section check needs samples >= 1");
  SplitMix64 rng(seed);
  auto x = sys.base.sample_point(rng);
  InvariantSection sec;
  sec.chart = Chart::complex_line;
  sec.system = sys.id();
  sec.zc = z0;
  sec.samples = samples;
  sec.label = z0.is_inf ? "z=inf"
              : (std::abs(z0.z) == 0.0 ? "z=0" : "z=" + z0.str());
  for (long long n = 0; n < samples; ++n) {
    const GrassCoordC img = n_step(sys.element_at(x), z0);
    sec.residual = std::max(sec.residual, chordal(img, z0));
    x = sys.base.step(x);
  }
  return sec;
}

template <class Base>
InvariantSection verify_constant_real_section(const SkewSystem<Base>& sys,
                                              double y0, long long samples,
                                              std::uint64_t seed = 12345) {
  if (samples < 1) throw UsageError("section check needs samples >= 1");
  SplitMix64 rng(seed);
  auto x = sys.base.sample_point(rng);
  InvariantSection sec;
  sec.chart = Chart::real_direction;
  sec.system = sys.id();
  sec.yr = y0;
  sec.samples = samples;
  sec.label = "y=" + std::to_string(y0);
  for (long long n = 0; n < samples; ++n) {
    const double img = f_step(sys.element_at(x), y0);
    sec.residual = std::max(sec.residual, circle_dist(img, y0));
    x = sys.base.step(x);
  }
  return sec;
}

// Best constant direction section over a uniform grid; for a fibre that
// genuinely rotates, even the best candidate keeps a residual of the order
// of the rotation amount, which is the rejection signal.
template <class Base>
std::pair<InvariantSection, double> best_constant_real_section(
    const SkewSystem<Base>& sys, int grid, long long samples,
    std::uint64_t seed = 12345) {
  if (grid < 1) throw UsageError("section grid needs at least one point");
  std::optional<InvariantSection> best;
  for (int i = 0; i < grid; ++i) {
    auto sec = verify_constant_real_section(
        sys, static_cast<double>(i) / grid, samples, seed);
    if (!best || sec.residual < best->residual) best = sec;
  }
  return {*best, best->residual};
}

// A cocycle taking only rotation values conserves both Grassmannian poles:
// these are its eigenline families. Any reflection in the sampled orbit
// disqualifies the construction.
template <class Base>
std::vector<InvariantSection> extract_rotation_sections(
    const SkewSystem<Base>& sys, long long samples = 100'000,
    std::uint64_t seed = 12345) {
  SplitMix64 rng(seed);
  auto x = sys.base.sample_point(rng);
  for (long long n = 0; n < samples; ++n) {
    if (!sys.element_at(x).is_rotation())
      throw std::domain_error(
          "cocycle takes reflection values; pole sections do not apply");
    x = sys.base.step(x);
  }
  std::vector<InvariantSection> out;
  out.push_back(verify_constant_complex_section(
      sys, GrassCoordC::finite({0.0, 0.0}), samples, seed));
  out.push_back(verify_constant_complex_section(sys, GrassCoordC::infinity(),
                                                samples, seed));
  return out;
}

struct DiagonalizationReport {
  std::string system;
  long long samples = 0;
  double max_offdiag = 0.0;        // |off-diagonal| of C^-1 A C
  double max_diag_mismatch = 0.0;  // diagonal vs conjugate unit pair
};

namespace detail {

inline CMat2 cmul(const CMat2& A, const CMat2& B) {
  return {A[0] * B[0] + A[1] * B[2], A[0] * B[1] + A[1] * B[3],
          A[2] * B[0] + A[3] * B[2], A[2] * B[1] + A[3] * B[3]};
}

}  // namespace detail

// Conjugating by C = [v1 v2]/sqrt(2), v1 = (1, i), v2 = (1, -i), sends every
// rotation to diag(e^{-i theta}, e^{i theta}).
template <class Base>
DiagonalizationReport diagonalize_rotation_cocycle(const SkewSystem<Base>& sys,
                                                   long long samples = 100'000,
                                                   std::uint64_t seed = 12345) {
  using C = std::complex<double>;
  constexpr double r = 0.70710678118654752440;  // 1/sqrt(2)
  const CMat2 Cm{C(r, 0), C(r, 0), C(0, r), C(0, -r)};
  const CMat2 Ci{C(r, 0), C(0, -r), C(r, 0), C(0, r)};

  SplitMix64 rng(seed);
  auto x = sys.base.sample_point(rng);
  DiagonalizationReport rep;
  rep.system = sys.id();
  rep.samples = samples;
  for (long long n = 0; n < samples; ++n) {
    const O2Element e = sys.element_at(x);
    if (!e.is_rotation())
      throw std::domain_error(
          "cocycle takes reflection values; it has no joint diagonalisation");
    const CMat2 D = detail::cmul(detail::cmul(Ci, to_cmatrix(to_matrix(e))), Cm);
    const double theta = 2.0 * std::numbers::pi * e.angle;
    rep.max_offdiag =
        std::max({rep.max_offdiag, std::abs(D[1]), std::abs(D[2])});
    rep.max_diag_mismatch =
        std::max({rep.max_diag_mismatch, std::abs(D[0] - std::polar(1.0, -theta)),
                  std::abs(D[3] - std::polar(1.0, theta))});
    x = sys.base.step(x);
  }
  return rep;
}

struct SectionSanity {
  std::string label;
  double section_residual = 0.0;
  double perp_residual = 0.0;   // the perpendicular family must be invariant too
  double k_dispersion = 0.0;    // conserved radial coordinate along the pushforward
  bool accepted = false;
};

// Sanity gate for stored sections: the orthogonal-complement section must
// verify as well, and the conserved radial coordinate must stay constant
// along the pushforward orbit. A near-miss constant (e.g. z = 0.01 for a
// rotation cocycle) keeps a tiny k dispersion but fails on its own residual.
template <class Base>
SectionSanity section_sanity(const SkewSystem<Base>& sys,
                             const InvariantSection& sec,
                             long long samples = 10'000, double tol = 1e-9,
                             std::uint64_t seed = 12345) {
  SectionSanity out;
  out.label = sec.label;
  if (sec.system != sys.id())
    throw UsageError("section_sanity: section from a different system");
  if (sec.chart == Chart::real_direction) {
    out.section_residual = sec.residual;
    out.perp_residual =
        verify_constant_real_section(sys, wrap_unit(perp_coord_real(sec.yr)),
                                     samples, seed)
            .residual;
    out.accepted = out.section_residual <= tol && out.perp_residual <= tol;
    return out;
  }
  out.section_residual =
      verify_constant_complex_section(sys, sec.zc, samples, seed).residual;
  out.perp_residual =
      verify_constant_complex_section(sys, perp_coord(sec.zc), samples, seed)
          .residual;
  SplitMix64 rng(seed);
  auto x = sys.base.sample_point(rng);
  GrassCoordC z = sec.zc;
  const double k0 = k_of(z);
  for (long long n = 0; n < samples; ++n) {
    z = n_step(sys.element_at(x), z);
    out.k_dispersion = std::max(out.k_dispersion, std::abs(k_of(z) - k0));
    x = sys.base.step(x);
  }
  out.accepted = out.section_residual <= tol && out.perp_residual <= tol &&
                 out.k_dispersion <= tol;
  return out;
}

struct CriteriaReport {
  std::string system;
  std::string real_verdict;       // irreducible-consistent | reducible-witnessed | inconclusive
  std::string complex_verdict;    // same labels
  std::string scalar_cohomology;  // excluded-consistent | inconclusive
  std::string real_witness;       // section label, when witnessed
  std::string complex_witness;
};

// Verdict engine. Ergodicity of the direction skew product is sufficient for
// irreducibility over R; joint ergodicity of the orientation and direction
// skew products is sufficient over C; either one rules out scalar
// cohomology. A verified section is a direct reducibility witness, so a
// section coexisting with the matching ergodic-consistent scans is a
// contradiction and raises InvariantBreach. All labels stay "-consistent":
// finite orbits cannot certify ergodicity itself.
inline CriteriaReport apply_criteria(
    const ErgodicityReport& repS, const std::optional<ErgodicityReport>& repR,
    const std::vector<InvariantSection>& sections, double section_tol = 1e-9) {
  const auto prefix_of = [](const std::string& sys_id) {
    const auto pos = sys_id.rfind('/');
    return pos == std::string::npos ? sys_id : sys_id.substr(0, pos);
  };
  const std::string prefix = prefix_of(repS.system);
  if (repS.kind != SkewKind::S)
    throw UsageError("apply_criteria: first report must be the direction scan");
  if (repR) {
    if (repR->kind != SkewKind::R)
      throw UsageError("apply_criteria: second report must be the orientation scan");
    if (prefix_of(repR->system) != prefix)
      throw UsageError("apply_criteria: reports describe different systems");
  }
  for (const auto& sec : sections)
    if (sec.system != prefix)
      throw UsageError("apply_criteria: section from a different system: " +
                       sec.system);

  const bool s_erg = repS.verdict == Verdict::ergodic_consistent;
  const bool r_erg = repR && repR->verdict == Verdict::ergodic_consistent;

  const InvariantSection* real_sec = nullptr;
  const InvariantSection* complex_sec = nullptr;
  for (const auto& sec : sections) {
    if (sec.residual > section_tol) continue;
    if (sec.chart == Chart::real_direction && !real_sec) real_sec = &sec;
    if (sec.chart == Chart::complex_line && !complex_sec) complex_sec = &sec;
  }

  if (s_erg && real_sec)
    throw InvariantBreach(
        "direction scan reads ergodic-consistent but a real section verified: " +
        real_sec->label);
  if (s_erg && r_erg && complex_sec)
    throw InvariantBreach(
        "both scans read ergodic-consistent but a complex section verified: " +
        complex_sec->label);

  CriteriaReport rep;
  rep.system = prefix;
  if (real_sec) {
    rep.real_verdict = "reducible-witnessed";
    rep.real_witness = real_sec->label;
  } else {
    rep.real_verdict = s_erg ? "irreducible-consistent" : "inconclusive";
  }
  if (complex_sec) {
    rep.complex_verdict = "reducible-witnessed";
    rep.complex_witness = complex_sec->label;
  } else {
    rep.complex_verdict =
        (s_erg && r_erg) ? "irreducible-consistent" : "inconclusive";
  }
  rep.scalar_cohomology =
      (s_erg || r_erg) ? "excluded-consistent" : "inconclusive";
  return rep;
}

struct CounterexampleSuite {
  // Constant rotation by one sixth of a turn over an irrational base
  // rotation: direction product conserves a half-measure set, yet the
  // thirds factor is ergodic-consistent and both poles are exact sections.
  Rational b1_measure{0};
  bool b1_invariant = false;
  ErgodicityReport cex1_S, cex1_R, cex1_Z3;
  double cex1_real_grid_best = 0.0;
  std::vector<InvariantSection> cex1_sections;
  CriteriaReport cex1_criteria;

  // Rotation/flip over the fair coin shift: orientation product is
  // ergodic-consistent, direction product conserves a third-measure set,
  // and the thirds factor is again ergodic-consistent.
  Rational b2_measure{0};
  bool b2_invariant = false;
  ErgodicityReport cex2_S, cex2_R, cex2_Z3;
  CriteriaReport cex2_criteria;
};

inline CounterexampleSuite run_counterexample_suite(double eta, int starts,
                                                    std::uint64_t N,
                                                    std::uint64_t seed,
                                                    int threads = 1) {
  CounterexampleSuite out;

  SkewSystem<RotationBase> c1{RotationBase{eta},
                              CocycleGenerator::make_cex1(eta)};
  const auto B1 = RationalIntervalSet::from_intervals(
      {{Rational(0), Rational(1, 6)},
       {Rational(1, 3), Rational(1, 2)},
       {Rational(2, 3), Rational(5, 6)}});
  const auto check1 =
      verify_invariant_set({ExactFibreMap{false, Rational(1, 3)}}, B1);
  out.b1_measure = check1.measure;
  out.b1_invariant = check1.invariant;
  out.cex1_S = ergodicity_scan(c1, SkewKind::S, starts, N, seed, {}, threads);
  out.cex1_R = ergodicity_scan(c1, SkewKind::R, starts, N, seed, {}, threads);
  out.cex1_Z3 = ergodicity_scan(c1, SkewKind::Z3, starts, N, seed, {}, threads);
  out.cex1_real_grid_best =
      best_constant_real_section(c1, 360, 1000, seed).second;
  out.cex1_sections = extract_rotation_sections(c1, 100'000, seed);
  out.cex1_criteria = apply_criteria(out.cex1_S, out.cex1_R, out.cex1_sections);

  SkewSystem<BernoulliBase> c2{BernoulliBase{},
                               CocycleGenerator::make_cex2()};
  const auto B2 = RationalIntervalSet::from_intervals(
      {{Rational(1, 9), Rational(2, 9)},
       {Rational(4, 9), Rational(5, 9)},
       {Rational(7, 9), Rational(8, 9)}});
  const auto check2 = verify_invariant_set(
      {ExactFibreMap{false, Rational(1, 3)}, ExactFibreMap{true, Rational(0)}},
      B2);
  out.b2_measure = check2.measure;
  out.b2_invariant = check2.invariant;
  out.cex2_S = ergodicity_scan(c2, SkewKind::S, starts, N, seed, {}, threads);
  out.cex2_R = ergodicity_scan(c2, SkewKind::R, starts, N, seed, {}, threads);
  out.cex2_Z3 = ergodicity_scan(c2, SkewKind::Z3, starts, N, seed, {}, threads);
  out.cex2_criteria = apply_criteria(out.cex2_S, out.cex2_R, {});

  return out;
}

}  // namespace orthocycle
