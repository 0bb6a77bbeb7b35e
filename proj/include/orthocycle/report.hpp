#pragma once

#include <json.hpp>

#include "orthocycle/config.hpp"
#include "orthocycle/diagnostics.hpp"
#include "orthocycle/inducing.hpp"
#include "orthocycle/reducibility.hpp"
#include "orthocycle/ulam.hpp"
#include "orthocycle/version.hpp"

// JSON shapes for every report the tool emits. Wall-clock time is
// deliberately absent: identical config + seed must produce byte-identical
// files, and timing goes to stdout instead.

namespace orthocycle {

inline nlohmann::json json_complex(std::complex<double> z) {
  return {{"re", z.real()}, {"im", z.imag()}};
}

inline nlohmann::json json_coord(const GrassCoordC& z) {
  if (z.is_inf) return "inf";
  return json_complex(z.z);
}

inline void to_json(nlohmann::json& j, const ScanThresholds& t) {
  j = {{"A_lo", t.A_lo},
       {"D_lo", t.D_lo},
       {"A_hi", t.A_hi},
       {"D_hi", t.D_hi},
       {"rho", t.rho}};
}

inline void to_json(nlohmann::json& j, const ObservableStats& st) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& a : st.per_start) per.push_back(json_complex(a));
  j = {{"name", st.obs.name()},
       {"space_avg", json_complex(st.space_avg)},
       {"dispersion", st.dispersion},
       {"max_dev", st.max_dev},
       {"invariance_residual", st.invariance_residual},
       {"per_start", std::move(per)}};
}

inline void to_json(nlohmann::json& j, const ErgodicityReport& r) {
  j = {{"system", r.system},
       {"kind", skew_kind_name(r.kind)},
       {"N", r.N},
       {"starts", r.starts},
       {"seed", r.seed},
       {"thresholds", r.thresholds},
       {"verdict", verdict_name(r.verdict)},
       {"witness", r.witness_index ? nlohmann::json(r.witness_name())
                                   : nlohmann::json(nullptr)},
       {"observables", r.entries}};
}

inline void to_json(nlohmann::json& j, const RotationNumberReport& r) {
  j = {{"section", {{"a", r.a}, {"b", r.b}}},
       {"events", r.events},
       {"raw_increment", r.raw_increment},
       {"canonical", r.canonical},
       {"max_deviation", r.max_deviation}};
}

inline void to_json(nlohmann::json& j, const KacReport& k) {
  j = {{"expected", k.expected},
       {"observed", k.observed},
       {"rel_error", k.rel_error}};
}

inline void to_json(nlohmann::json& j, const SbReport& r) {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [ret, count] : r.return_histogram)
    hist[std::to_string(ret)] = count;
  nlohmann::json fitted = nlohmann::json::object();
  for (const auto& [ret, k] : r.fitted_k) fitted[std::to_string(ret)] = k;
  j = {{"section", {{"a", 1.0 - r.eta}, {"b", 1.0}}},
       {"eta", r.eta},
       {"alpha", r.alpha},
       {"beta", r.beta},
       {"event_count", r.event_count},
       {"return_time_histogram", std::move(hist)},
       {"fitted_k", std::move(fitted)},
       {"max_base_discrepancy", r.max_base_discrepancy},
       {"max_fibre_discrepancy", r.max_fibre_discrepancy},
       {"max_discrepancy", r.max_discrepancy},
       {"all_reflections", r.all_reflections},
       {"kac", r.kac}};
}

inline void to_json(nlohmann::json& j, const QReport& r) {
  j = {{"eta", r.eta},
       {"alpha", r.alpha},
       {"beta", r.beta},
       {"zeta", r.zeta},
       {"event_count", r.event_count},
       {"conjugacy_shift", r.conjugacy_shift},
       {"max_base_discrepancy", r.max_base_discrepancy},
       {"max_fibre_discrepancy", r.max_fibre_discrepancy},
       {"branch_boundary_residual", r.branch_boundary_residual},
       {"branch_fraction_minus", r.branch_fraction_minus},
       {"max_discrepancy", r.max_discrepancy}};
}

inline void to_json(nlohmann::json& j, const InvariantSection& s) {
  j = {{"chart", s.chart == Chart::complex_line ? "complex_line"
                                                : "real_direction"},
       {"system", s.system},
       {"label", s.label},
       {"constant", s.is_constant},
       {"value", s.chart == Chart::complex_line ? json_coord(s.zc)
                                                : nlohmann::json(s.yr)},
       {"samples", s.samples},
       {"residual", s.residual}};
}

inline void to_json(nlohmann::json& j, const SectionSanity& s) {
  j = {{"label", s.label},
       {"section_residual", s.section_residual},
       {"perp_residual", s.perp_residual},
       {"k_dispersion", s.k_dispersion},
       {"accepted", s.accepted}};
}

inline void to_json(nlohmann::json& j, const DiagonalizationReport& r) {
  j = {{"system", r.system},
       {"samples", r.samples},
       {"max_offdiag", r.max_offdiag},
       {"max_diag_mismatch", r.max_diag_mismatch}};
}

inline void to_json(nlohmann::json& j, const CriteriaReport& r) {
  j = {{"system", r.system},
       {"real", r.real_verdict},
       {"complex", r.complex_verdict},
       {"scalar_cohomology", r.scalar_cohomology},
       {"real_witness",
        r.real_witness.empty() ? nlohmann::json(nullptr)
                               : nlohmann::json(r.real_witness)},
       {"complex_witness",
        r.complex_witness.empty() ? nlohmann::json(nullptr)
                                  : nlohmann::json(r.complex_witness)},
       {"section_tolerance", 1e-9}};
}

inline void to_json(nlohmann::json& j, const UlamInvariantResult& r) {
  j = {{"closed_classes", r.closed_classes},
       {"support_cells", r.support},
       {"residual", r.residual},
       {"degenerate", r.degenerate}};
}

inline void to_json(nlohmann::json& j, const CounterexampleSuite& s) {
  j = {{"cex1",
        {{"invariant_set",
          {{"measure", s.b1_measure.str()}, {"invariant", s.b1_invariant}}},
         {"scan_S", s.cex1_S},
         {"scan_R", s.cex1_R},
         {"scan_Z3", s.cex1_Z3},
         {"best_constant_direction_residual", s.cex1_real_grid_best},
         {"sections", s.cex1_sections},
         {"criteria", s.cex1_criteria}}},
       {"cex2",
        {{"invariant_set",
          {{"measure", s.b2_measure.str()}, {"invariant", s.b2_invariant}}},
         {"scan_S", s.cex2_S},
         {"scan_R", s.cex2_R},
         {"scan_Z3", s.cex2_Z3},
         {"criteria", s.cex2_criteria}}}};
}

inline nlohmann::json report_envelope(const std::string& experiment,
                                      const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["tool"] = "orthocycle";
  j["version"] = kVersion;
  j["schema_version"] = kReportSchemaVersion;
  j["experiment"] = experiment;
  j["config"] = cfg.echo();
  return j;
}

}  // namespace orthocycle
