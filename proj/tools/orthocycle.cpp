// Experiment runner: orbits, growth checks, ergodicity scans, induced-map
// fits, reducibility search, and one-shot reproduction of all built-in
// examples. Reports are deterministic JSON (config + seed in, bytes out);
// wall time goes to stdout only.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "orthocycle/report.hpp"

namespace oc = orthocycle;

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

struct ScanArgs {
  std::optional<std::string> cocycle;
  std::optional<std::string> system;  // skew kind
  std::optional<std::string> alpha, eta;
  std::optional<std::uint64_t> N;
  std::optional<int> starts;
  std::optional<long long> events;
};

oc::ExperimentConfig make_config(const GlobalArgs& g, const ScanArgs& s) {
  oc::ExperimentConfig cfg = g.config_path.empty()
                                 ? oc::ExperimentConfig{}
                                 : oc::load_config_file(g.config_path);
  if (s.cocycle) oc::apply_config_entry(cfg, "cocycle.kind", *s.cocycle);
  if (s.alpha) oc::apply_config_entry(cfg, "cocycle.alpha", *s.alpha);
  if (s.eta) {
    oc::apply_config_entry(cfg, "base.eta", *s.eta);
    oc::apply_config_entry(cfg, "cocycle.eta", *s.eta);
  }
  if (s.system) oc::apply_config_entry(cfg, "skew.kind", *s.system);
  if (s.N) cfg.N = *s.N;
  if (s.starts) cfg.starts = *s.starts;
  if (s.events) {
    if (*s.events < 1) throw oc::UsageError("events must be positive");
    cfg.induce_events = *s.events;
  }
  if (g.seed) cfg.seed = *g.seed;
  if (g.threads) cfg.threads = *g.threads;
  return cfg;
}

void write_json(const GlobalArgs& g, const std::string& name,
                const nlohmann::json& j) {
  std::filesystem::create_directories(g.out_dir);
  const auto path = std::filesystem::path(g.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw oc::ResourceError("cannot write " + path.string());
  out << j.dump(2) << "\n";
  std::cout << "wrote " << path.string() << "\n";
}

int run_orbit(const GlobalArgs& g, const ScanArgs& s, long long steps) {
  const auto cfg = make_config(g, s);
  std::filesystem::create_directories(g.out_dir);
  const auto path = std::filesystem::path(g.out_dir) / "orbit.csv";
  std::ofstream out(path);
  if (!out) throw oc::ResourceError("cannot write " + path.string());
  out << "n,base,fibre\n";
  char buf[96];

  std::visit(
      [&](const auto& sys) {
        using Base = std::decay_t<decltype(sys.base)>;
        oc::SplitMix64 rng(cfg.seed);
        auto x = sys.base.sample_point(rng);
        double y = rng.uniform();
        int a = static_cast<int>(rng.below(cfg.skew_kind == oc::SkewKind::Z3 ? 3 : 2));
        oc::GrassCoordC z = oc::GrassCoordC::finite({rng.uniform(), rng.uniform()});
        for (long long n = 0; n < steps; ++n) {
          const double bx = Base::readout(x);
          switch (cfg.skew_kind) {
            case oc::SkewKind::S:
              std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g\n", n, bx, y);
              break;
            case oc::SkewKind::R:
            case oc::SkewKind::Z3:
              std::snprintf(buf, sizeof buf, "%lld,%.17g,%d\n", n, bx, a);
              break;
            case oc::SkewKind::N:
              if (z.is_inf)
                std::snprintf(buf, sizeof buf, "%lld,%.17g,inf\n", n, bx);
              else
                std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g%+.17gi\n", n,
                              bx, z.z.real(), z.z.imag());
              break;
          }
          out << buf;
          switch (cfg.skew_kind) {
            case oc::SkewKind::S: {
              auto [nx, ny] = sys.step_S(x, y);
              x = nx; y = ny;
              break;
            }
            case oc::SkewKind::R: {
              auto [nx, na] = sys.step_R(x, a);
              x = nx; a = na;
              break;
            }
            case oc::SkewKind::Z3: {
              auto [nx, na] = sys.step_Z3(x, a);
              x = nx; a = na;
              break;
            }
            case oc::SkewKind::N: {
              auto [nx, nz] = sys.step_N(x, z);
              x = nx; z = nz;
              break;
            }
          }
        }
      },
      oc::build_system(cfg));
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

int run_lyapunov(const GlobalArgs& g, const ScanArgs& s, long long n,
                 int trials) {
  const auto cfg = make_config(g, s);
  nlohmann::json rep = oc::report_envelope("lyapunov", cfg);
  nlohmann::json per = nlohmann::json::array();
  double worst = 0.0;

  std::visit(
      [&](const auto& sys) {
        for (int t = 0; t < trials; ++t) {
          oc::SplitMix64 rng(oc::hash_mix(cfg.seed, static_cast<std::uint64_t>(t)));
          auto x = sys.base.sample_point(rng);
          const double phi = 2.0 * std::numbers::pi * rng.uniform();
          const double rate = oc::growth_check(sys.gen, sys.base, x,
                                               std::cos(phi), std::sin(phi), n);
          per.push_back(rate);
          worst = std::max(worst, std::abs(rate));
        }
      },
      oc::build_system(cfg));

  rep["report"] = {{"n", n}, {"trials", trials}, {"rates", per},
                   {"max_abs_rate", worst}};
  write_json(g, "lyapunov.json", rep);
  std::cout << "max |(1/n) log growth| = " << worst << "\n";
  return 0;
}

int run_diagnose(const GlobalArgs& g, const ScanArgs& s, bool csv) {
  const auto cfg = make_config(g, s);
  oc::ErgodicityReport rep = std::visit(
      [&](const auto& sys) {
        return oc::ergodicity_scan(sys, cfg.skew_kind, cfg.starts, cfg.N,
                                   cfg.seed, {}, cfg.threads);
      },
      oc::build_system(cfg));

  nlohmann::json j = oc::report_envelope("diagnose", cfg);
  j["report"] = rep;
  write_json(g, "diagnose.json", j);
  if (csv) {
    const auto path = std::filesystem::path(g.out_dir) / "per_start_averages.csv";
    std::ofstream out(path);
    if (!out) throw oc::ResourceError("cannot write " + path.string());
    out << "observable,start,re,im\n";
    for (const auto& st : rep.entries)
      for (std::size_t i = 0; i < st.per_start.size(); ++i) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%s,%zu,%.17g,%.17g\n",
                      st.obs.name().c_str(), i, st.per_start[i].real(),
                      st.per_start[i].imag());
        out << buf;
      }
    std::cout << "wrote " << path.string() << "\n";
  }
  std::cout << "verdict: " << oc::verdict_name(rep.verdict);
  if (rep.witness_index) std::cout << " (witness " << rep.witness_name() << ")";
  std::cout << "\n";
  return 0;
}

int run_induce(const GlobalArgs& g, const ScanArgs& s) {
  auto cfg = make_config(g, s);
  const double eta = cfg.eta_cocycle();
  const double alpha = cfg.alpha.value;
  if (!(eta > 0.0 && eta < 1.0))
    throw oc::UsageError("induce needs eta in (0,1)");

  oc::SkewSystem<oc::RotationBase> sys{
      oc::RotationBase{cfg.eta()},
      oc::CocycleGenerator::make_example2(alpha, eta)};
  const auto rot =
      oc::induced_rotation_number(sys, 1.0 - eta, 1.0, cfg.induce_events, cfg.seed);
  const auto sb = oc::verify_sb_formula(eta, alpha, cfg.induce_events, cfg.seed);
  const auto q = oc::verify_q_formula(eta, alpha, cfg.induce_events, cfg.seed);

  nlohmann::json j = oc::report_envelope("induce", cfg);
  j["report"] = {{"rotation_number", rot}, {"sb", sb}, {"q", q}};
  write_json(g, "induce.json", j);
  std::printf("rotation number %.12f, S_B fit %.3e, Q fit %.3e\n", rot.canonical,
              sb.max_discrepancy, q.max_discrepancy);
  return 0;
}

int run_search(const GlobalArgs& g, const ScanArgs& s) {
  const auto cfg = make_config(g, s);
  nlohmann::json j = oc::report_envelope("search-reducibility", cfg);

  std::visit(
      [&](const auto& sys) {
        auto repS = oc::ergodicity_scan(sys, oc::SkewKind::S, cfg.starts,
                                        cfg.N, cfg.seed, {}, cfg.threads);
        auto repR = oc::ergodicity_scan(sys, oc::SkewKind::R, cfg.starts,
                                        cfg.N, cfg.seed, {}, cfg.threads);
        std::vector<oc::InvariantSection> sections;
        std::string section_note;
        try {
          sections = oc::extract_rotation_sections(sys, 100'000, cfg.seed);
        } catch (const std::domain_error& e) {
          section_note = e.what();
        }
        auto [best_real, best_res] =
            oc::best_constant_real_section(sys, 360, 1000, cfg.seed);
        if (best_res <= 1e-9) sections.push_back(best_real);

        nlohmann::json sanity = nlohmann::json::array();
        for (const auto& sec : sections)
          sanity.push_back(oc::section_sanity(sys, sec, 10'000, 1e-9, cfg.seed));

        const auto crit = oc::apply_criteria(repS, repR, sections);
        j["report"] = {{"scan_S", repS},
                       {"scan_R", repR},
                       {"sections", sections},
                       {"section_note", section_note},
                       {"best_constant_direction_residual", best_res},
                       {"section_sanity", sanity},
                       {"criteria", crit}};
        std::cout << "real: " << crit.real_verdict
                  << ", complex: " << crit.complex_verdict
                  << ", scalar cohomology: " << crit.scalar_cohomology << "\n";
      },
      oc::build_system(cfg));

  write_json(g, "search-reducibility.json", j);
  return 0;
}

int run_counterexamples(const GlobalArgs& g, const ScanArgs& s) {
  const auto cfg = make_config(g, s);
  const auto suite = oc::run_counterexample_suite(cfg.eta(), cfg.starts, cfg.N,
                                                  cfg.seed, cfg.threads);
  nlohmann::json j = oc::report_envelope("verify-counterexamples", cfg);
  j["report"] = suite;
  write_json(g, "verify-counterexamples.json", j);
  std::cout << "first set: measure " << suite.b1_measure.str()
            << (suite.b1_invariant ? " (invariant)" : " (NOT invariant)")
            << ", thirds factor " << oc::verdict_name(suite.cex1_Z3.verdict)
            << "\n";
  std::cout << "second set: measure " << suite.b2_measure.str()
            << (suite.b2_invariant ? " (invariant)" : " (NOT invariant)")
            << ", orientation scan " << oc::verdict_name(suite.cex2_R.verdict)
            << "\n";
  return 0;
}

int run_reproduce(const GlobalArgs& g, const ScanArgs& s) {
  auto cfg = make_config(g, s);
  nlohmann::json j = oc::report_envelope("reproduce-paper", cfg);
  nlohmann::json& rep = j["report"];
  const double eta = cfg.eta();
  const double alpha = cfg.alpha.value;
  std::vector<std::array<std::string, 4>> table;

  // Rotation-by-base cocycle: direction product is the classical skew shift.
  {
    oc::SkewSystem<oc::RotationBase> sys{oc::RotationBase{eta},
                                         oc::CocycleGenerator::make_example1()};
    auto repS = oc::ergodicity_scan(sys, oc::SkewKind::S, cfg.starts, cfg.N,
                                    cfg.seed, {}, cfg.threads);
    auto repR = oc::ergodicity_scan(sys, oc::SkewKind::R, cfg.starts, cfg.N,
                                    cfg.seed, {}, cfg.threads);
    auto sections = oc::extract_rotation_sections(sys, 100'000, cfg.seed);
    auto diag = oc::diagonalize_rotation_cocycle(sys, 100'000, cfg.seed);
    auto crit = oc::apply_criteria(repS, repR, sections);
    rep["example1"] = {{"scan_S", repS},       {"scan_R", repR},
                       {"sections", sections}, {"diagonalization", diag},
                       {"criteria", crit}};
    table.push_back({"rotation-by-base", crit.real_verdict,
                     crit.complex_verdict, crit.scalar_cohomology});
  }
  // Flip cocycle over a rotation.
  {
    oc::SkewSystem<oc::RotationBase> sys{
        oc::RotationBase{eta}, oc::CocycleGenerator::make_example2(alpha, eta)};
    auto repS = oc::ergodicity_scan(sys, oc::SkewKind::S, cfg.starts, cfg.N,
                                    cfg.seed, {}, cfg.threads);
    auto repR = oc::ergodicity_scan(sys, oc::SkewKind::R, cfg.starts, cfg.N,
                                    cfg.seed, {}, cfg.threads);
    auto crit = oc::apply_criteria(repS, repR, {});
    rep["example2"] = {{"scan_S", repS}, {"scan_R", repR}, {"criteria", crit}};
    table.push_back({"flip-over-rotation", crit.real_verdict,
                     crit.complex_verdict, crit.scalar_cohomology});
  }
  // Flip cocycle over the fair-coin shift.
  {
    oc::SkewSystem<oc::BernoulliBase> sys{
        oc::BernoulliBase{}, oc::CocycleGenerator::make_example3(alpha)};
    auto repS = oc::ergodicity_scan(sys, oc::SkewKind::S, cfg.starts, cfg.N,
                                    cfg.seed, {}, cfg.threads);
    auto repR = oc::ergodicity_scan(sys, oc::SkewKind::R, cfg.starts, cfg.N,
                                    cfg.seed, {}, cfg.threads);
    auto crit = oc::apply_criteria(repS, repR, {});
    rep["example3"] = {{"scan_S", repS}, {"scan_R", repR}, {"criteria", crit}};
    table.push_back({"flip-over-shift", crit.real_verdict, crit.complex_verdict,
                     crit.scalar_cohomology});
  }
  // Counterexamples and the inducing chain.
  const auto suite =
      oc::run_counterexample_suite(eta, cfg.starts, cfg.N, cfg.seed, cfg.threads);
  rep["counterexamples"] = suite;
  table.push_back({"constant-sixth-turn", suite.cex1_criteria.real_verdict,
                   suite.cex1_criteria.complex_verdict,
                   suite.cex1_criteria.scalar_cohomology});
  table.push_back({"rotation-flip-shift", suite.cex2_criteria.real_verdict,
                   suite.cex2_criteria.complex_verdict,
                   suite.cex2_criteria.scalar_cohomology});

  const auto rot = oc::induced_rotation_number(
      {oc::RotationBase{eta}, oc::CocycleGenerator::make_example2(alpha, eta)},
      1.0 - eta, 1.0, cfg.induce_events, cfg.seed);
  const auto sb = oc::verify_sb_formula(eta, alpha, cfg.induce_events, cfg.seed);
  const auto q = oc::verify_q_formula(eta, alpha, cfg.induce_events, cfg.seed);
  rep["inducing"] = {{"rotation_number", rot}, {"sb", sb}, {"q", q}};

  write_json(g, "reproduce-paper.json", j);
  std::printf("%-22s %-24s %-24s %s\n", "system", "real", "complex",
              "scalar cohomology");
  for (const auto& row : table)
    std::printf("%-22s %-24s %-24s %s\n", row[0].c_str(), row[1].c_str(),
                row[2].c_str(), row[3].c_str());
  std::printf("induced rotation number %.12f; S_B fit %.3e; Q fit %.3e\n",
              rot.canonical, sb.max_discrepancy, q.max_discrepancy);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orthogonal 2x2 cocycle experiments over circle rotations and "
               "the fair-coin shift"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalArgs g;
  app.add_option("--config", g.config_path, "config file (key = value)")
      ->envname("ORTHOCYCLE_CONFIG");
  app.add_option("--seed", g.seed, "master seed (overrides config)")
      ->envname("ORTHOCYCLE_SEED");
  app.add_option("--threads", g.threads, "worker threads over starts")
      ->envname("ORTHOCYCLE_THREADS");
  app.add_option("--out", g.out_dir, "output directory (default .)")
      ->envname("ORTHOCYCLE_OUT");

  ScanArgs s;
  long long orbit_steps = 1000;
  long long lyap_n = 1'000'000;
  int lyap_trials = 16;
  bool diag_csv = false;

  const auto add_scan_opts = [&](CLI::App* cmd, bool with_scan_params) {
    cmd->add_option("--cocycle", s.cocycle,
                    "example1|example2|example3|cex1|cex2");
    cmd->add_option("--alpha", s.alpha, "cocycle angle parameter (turns of pi)");
    cmd->add_option("--eta", s.eta, "base rotation / flip interval parameter");
    if (with_scan_params) {
      cmd->add_option("--N", s.N, "orbit length per start");
      cmd->add_option("--starts", s.starts, "independent starts (>= 8)");
    }
  };

  auto* orbit = app.add_subcommand("orbit", "dump one orbit as CSV");
  add_scan_opts(orbit, false);
  orbit->add_option("--system", s.system, "S|R|N|Z3");
  orbit->add_option("--steps", orbit_steps, "orbit length");

  auto* lyap = app.add_subcommand(
      "lyapunov", "zero-exponent growth check along random orbits");
  add_scan_opts(lyap, false);
  lyap->add_option("--n", lyap_n, "steps per trial");
  lyap->add_option("--trials", lyap_trials, "random (x, v) trials");

  auto* diag = app.add_subcommand("diagnose", "ergodicity scan with verdict");
  add_scan_opts(diag, true);
  diag->add_option("--system", s.system, "S|R|N|Z3");
  diag->add_flag("--csv", diag_csv, "also write per-start averages CSV");

  auto* induce = app.add_subcommand(
      "induce", "first-return chain of the flip cocycle with closed-form fits");
  add_scan_opts(induce, false);
  induce->add_option("--events", s.events, "return events to collect");

  auto* search = app.add_subcommand("search-reducibility",
                                    "scans + section search + verdicts");
  add_scan_opts(search, true);

  auto* cex = app.add_subcommand("verify-counterexamples",
                                 "exact invariant sets and factor scans");
  add_scan_opts(cex, true);

  auto* repro = app.add_subcommand("reproduce-paper",
                                   "all examples, counterexamples, inducing");
  add_scan_opts(repro, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    if (*orbit) rc = run_orbit(g, s, orbit_steps);
    else if (*lyap) rc = run_lyapunov(g, s, lyap_n, lyap_trials);
    else if (*diag) rc = run_diagnose(g, s, diag_csv);
    else if (*induce) rc = run_induce(g, s);
    else if (*search) rc = run_search(g, s);
    else if (*cex) rc = run_counterexamples(g, s);
    else if (*repro) rc = run_reproduce(g, s);
  } catch (const oc::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const oc::ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const oc::InvariantBreach& e) {
    std::cerr << "invariant breach: " << e.what() << "\n";
    return 4;
  }
  const auto t1 = std::chrono::steady_clock::now();
  std::printf("wall_time_s=%.3f\n",
              std::chrono::duration<double>(t1 - t0).count());
  return rc;
}
