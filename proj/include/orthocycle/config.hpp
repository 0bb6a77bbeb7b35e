#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "orthocycle/errors.hpp"
#include "orthocycle/rational.hpp"
#include "orthocycle/skew.hpp"

namespace orthocycle {

// Numeric literal from a config: decimal, exact rational p/q, or one of the
// symbolic quadratic constants the experiments revolve around. No expression
// language beyond that.
struct NumberSpec {
  double value = 0.0;
  std::optional<Rational> exact;
  std::string text;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline long long parse_ll(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw UsageError("invalid integer for " + what + ": '" + s + "'");
  }
  if (used != s.size())
    throw UsageError("invalid integer for " + what + ": '" + s + "'");
  return v;
}

}  // namespace detail

inline NumberSpec parse_number(const std::string& raw,
                               const std::string& what) {
  const std::string s = detail::trim(raw);
  NumberSpec out;
  out.text = s;
  if (s == "sqrt2-1") {
    out.value = std::sqrt(2.0) - 1.0;
    return out;
  }
  if (s == "sqrt3-1") {
    out.value = std::sqrt(3.0) - 1.0;
    return out;
  }
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const long long p = detail::parse_ll(s.substr(0, slash), what);
    const long long q = detail::parse_ll(s.substr(slash + 1), what);
    if (q == 0) throw UsageError(what + ": zero denominator in '" + s + "'");
    out.exact = Rational(p, q);
    out.value = out.exact->to_double();
    return out;
  }
  std::size_t used = 0;
  try {
    out.value = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("invalid number for " + what + ": '" + s + "'");
  }
  if (used != s.size())
    throw UsageError("invalid number for " + what + ": '" + s + "'");
  return out;
}

struct ExperimentConfig {
  std::string base_kind;  // "rotation" | "bernoulli"; inferred when empty
  NumberSpec base_eta{std::sqrt(2.0) - 1.0, std::nullopt, "sqrt2-1"};
  std::uint64_t seed = 12345;

  std::string cocycle_kind = "example1";
  NumberSpec alpha{std::sqrt(3.0) - 1.0, std::nullopt, "sqrt3-1"};
  std::optional<NumberSpec> cocycle_eta;  // defaults to base_eta

  SkewKind skew_kind = SkewKind::S;

  std::uint64_t N = 1'000'000;
  int starts = 16;
  int threads = 1;

  int ulam_nx = 60, ulam_ny = 60, ulam_samples = 64;
  long long induce_events = 10'000;

  double eta() const { return base_eta.value; }
  double eta_cocycle() const {
    return cocycle_eta ? cocycle_eta->value : base_eta.value;
  }

  // Canonical key = value echo, embedded in every report.
  std::map<std::string, std::string> echo() const;
};

inline SkewKind parse_skew_kind(const std::string& s) {
  if (s == "S") return SkewKind::S;
  if (s == "R") return SkewKind::R;
  if (s == "N") return SkewKind::N;
  if (s == "Z3") return SkewKind::Z3;
  throw UsageError("skew.kind must be one of S, R, N, Z3 (got '" + s + "')");
}

inline bool cocycle_wants_bernoulli(const std::string& kind) {
  return kind == "example3" || kind == "cex2";
}

inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                               const std::string& value) {
  if (key == "base.kind") {
    if (value != "rotation" && value != "bernoulli")
      throw UsageError("base.kind must be rotation or bernoulli");
    cfg.base_kind = value;
  } else if (key == "base.eta") {
    cfg.base_eta = parse_number(value, key);
  } else if (key == "base.seed") {
    const long long v = detail::parse_ll(value, key);
    cfg.seed = static_cast<std::uint64_t>(v);
  } else if (key == "cocycle.kind") {
    if (value != "example1" && value != "example2" && value != "example3" &&
        value != "cex1" && value != "cex2")
      throw UsageError("unknown cocycle.kind '" + value + "'");
    cfg.cocycle_kind = value;
  } else if (key == "cocycle.alpha") {
    cfg.alpha = parse_number(value, key);
  } else if (key == "cocycle.eta") {
    cfg.cocycle_eta = parse_number(value, key);
  } else if (key == "skew.kind") {
    cfg.skew_kind = parse_skew_kind(value);
  } else if (key == "scan.N") {
    const long long v = detail::parse_ll(value, key);
    if (v < 1) throw UsageError("scan.N must be positive");
    cfg.N = static_cast<std::uint64_t>(v);
  } else if (key == "scan.starts") {
    cfg.starts = static_cast<int>(detail::parse_ll(value, key));
  } else if (key == "scan.threads") {
    cfg.threads = static_cast<int>(detail::parse_ll(value, key));
  } else if (key == "ulam.nx") {
    cfg.ulam_nx = static_cast<int>(detail::parse_ll(value, key));
  } else if (key == "ulam.ny") {
    cfg.ulam_ny = static_cast<int>(detail::parse_ll(value, key));
  } else if (key == "ulam.samples") {
    cfg.ulam_samples = static_cast<int>(detail::parse_ll(value, key));
  } else if (key == "induce.events") {
    cfg.induce_events = detail::parse_ll(value, key);
  } else {
    throw UsageError("unknown config key '" + key + "'");
  }
}

// key = value lines with optional [section] headers; section + key joins
// with a dot, and fully dotted keys are accepted anywhere. '#' and ';'
// start comments.
inline ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find_first_of("#;"); hash != std::string::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw UsageError("config line " + std::to_string(lineno) +
                         ": unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) +
                       ": expected key = value");
    std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw UsageError("config line " + std::to_string(lineno) +
                       ": empty key or value");
    if (!section.empty() && key.find('.') == std::string::npos)
      key = section + "." + key;
    apply_config_entry(cfg, key, value);
  }
  return cfg;
}

inline ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

inline CocycleGenerator build_generator(const ExperimentConfig& cfg) {
  CocycleGenerator g;
  if (cfg.cocycle_kind == "example1") {
    g = CocycleGenerator::make_example1();
  } else if (cfg.cocycle_kind == "example2") {
    g = CocycleGenerator::make_example2(cfg.alpha.value, cfg.eta_cocycle());
  } else if (cfg.cocycle_kind == "example3") {
    g = CocycleGenerator::make_example3(cfg.alpha.value);
  } else if (cfg.cocycle_kind == "cex1") {
    g = CocycleGenerator::make_cex1(cfg.eta_cocycle());
  } else if (cfg.cocycle_kind == "cex2") {
    g = CocycleGenerator::make_cex2();
  } else {
    throw UsageError("unknown cocycle.kind '" + cfg.cocycle_kind + "'");
  }
  if (cfg.alpha.exact) g.alpha_exact = cfg.alpha.exact;
  if (cfg.cocycle_eta && cfg.cocycle_eta->exact)
    g.eta_exact = cfg.cocycle_eta->exact;
  return g;
}

using AnySkew =
    std::variant<SkewSystem<RotationBase>, SkewSystem<BernoulliBase>>;

inline AnySkew build_system(const ExperimentConfig& cfg) {
  std::string base = cfg.base_kind;
  if (base.empty())
    base = cocycle_wants_bernoulli(cfg.cocycle_kind) ? "bernoulli" : "rotation";
  const bool wants_bernoulli = cocycle_wants_bernoulli(cfg.cocycle_kind);
  if (wants_bernoulli != (base == "bernoulli"))
    throw UsageError("cocycle.kind " + cfg.cocycle_kind +
                     " does not run over base.kind " + base);
  CocycleGenerator gen = build_generator(cfg);
  if (base == "bernoulli")
    return SkewSystem<BernoulliBase>{BernoulliBase{}, std::move(gen)};
  const double eta = cfg.eta();
  if (!(eta > 0.0 && eta < 1.0))
    throw UsageError("base.eta must lie in (0,1); it is assumed irrational");
  return SkewSystem<RotationBase>{RotationBase{eta}, std::move(gen)};
}

inline std::map<std::string, std::string> ExperimentConfig::echo() const {
  std::map<std::string, std::string> m;
  m["base.kind"] = base_kind.empty()
                       ? (cocycle_wants_bernoulli(cocycle_kind) ? "bernoulli"
                                                                : "rotation")
                       : base_kind;
  m["base.eta"] = base_eta.text.empty() ? std::to_string(base_eta.value)
                                        : base_eta.text;
  m["base.seed"] = std::to_string(seed);
  m["cocycle.kind"] = cocycle_kind;
  m["cocycle.alpha"] =
      alpha.text.empty() ? std::to_string(alpha.value) : alpha.text;
  if (cocycle_eta)
    m["cocycle.eta"] = cocycle_eta->text.empty()
                           ? std::to_string(cocycle_eta->value)
                           : cocycle_eta->text;
  m["skew.kind"] = skew_kind_name(skew_kind);
  m["scan.N"] = std::to_string(N);
  m["scan.starts"] = std::to_string(starts);
  m["scan.threads"] = std::to_string(threads);
  m["ulam.nx"] = std::to_string(ulam_nx);
  m["ulam.ny"] = std::to_string(ulam_ny);
  m["ulam.samples"] = std::to_string(ulam_samples);
  m["induce.events"] = std::to_string(induce_events);
  return m;
}

}  // namespace orthocycle
