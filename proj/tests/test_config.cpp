#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "orthocycle/config.hpp"

using namespace orthocycle;

TEST_CASE("number literals parse in all three forms") {
  const auto sym = parse_number("sqrt2-1", "t");
  CHECK(sym.value == Catch::Approx(std::sqrt(2.0) - 1.0));
  CHECK_FALSE(sym.exact.has_value());
  CHECK(sym.text == "sqrt2-1");

  const auto sym3 = parse_number(" sqrt3-1 ", "t");
  CHECK(sym3.value == Catch::Approx(std::sqrt(3.0) - 1.0));

  const auto rat = parse_number("2/12", "t");
  REQUIRE(rat.exact.has_value());
  CHECK(*rat.exact == Rational(1, 6));
  CHECK(rat.value == Catch::Approx(1.0 / 6.0));

  const auto dec = parse_number("0.25", "t");
  CHECK(dec.value == 0.25);
  CHECK_FALSE(dec.exact.has_value());

  CHECK_THROWS_AS(parse_number("1/0", "t"), UsageError);
  CHECK_THROWS_AS(parse_number("abc", "t"), UsageError);
  CHECK_THROWS_AS(parse_number("0.25x", "t"), UsageError);
  CHECK_THROWS_AS(parse_number("1/2/3", "t"), UsageError);
}

TEST_CASE("defaults describe the flagship experiment") {
  const ExperimentConfig cfg;
  CHECK(cfg.eta() == Catch::Approx(std::sqrt(2.0) - 1.0));
  CHECK(cfg.eta_cocycle() == cfg.eta());
  CHECK(cfg.cocycle_kind == "example1");
  CHECK(cfg.skew_kind == SkewKind::S);
  CHECK(cfg.seed == 12345);
  CHECK(cfg.N == 1'000'000);
  CHECK(cfg.starts == 16);
  CHECK(cfg.threads == 1);
  CHECK(cfg.ulam_nx == 60);
  CHECK(cfg.ulam_ny == 60);
  CHECK(cfg.ulam_samples == 64);
  CHECK(cfg.induce_events == 10'000);
}

TEST_CASE("ini text with sections and dotted keys") {
  const auto cfg = parse_config_text(
      "# flip experiment\n"
      "[base]\n"
      "kind = rotation\n"
      "eta = sqrt2-1\n"
      "seed = 777\n"
      "\n"
      "[cocycle]\n"
      "kind = example2  ; rotation with a flip interval\n"
      "alpha = sqrt3-1\n"
      "\n"
      "skew.kind = R\n"
      "scan.N = 5000\n"
      "scan.starts = 8\n");
  CHECK(cfg.base_kind == "rotation");
  CHECK(cfg.seed == 777);
  CHECK(cfg.cocycle_kind == "example2");
  CHECK(cfg.skew_kind == SkewKind::R);
  CHECK(cfg.N == 5000);
  CHECK(cfg.starts == 8);

  CHECK_THROWS_AS(parse_config_text("no equals sign here\n"), UsageError);
  CHECK_THROWS_AS(parse_config_text("[unterminated\n"), UsageError);
  CHECK_THROWS_AS(parse_config_text("mystery.key = 1\n"), UsageError);
  CHECK_THROWS_AS(parse_config_text("scan.N = 0\n"), UsageError);
  CHECK_THROWS_AS(parse_config_text("skew.kind = Q\n"), UsageError);
  CHECK_THROWS_AS(parse_config_text("base.kind = dice\n"), UsageError);
  CHECK_THROWS_AS(parse_config_text("cocycle.kind = example9\n"), UsageError);
  CHECK_THROWS_AS(parse_config_text("base.eta =\n"), UsageError);
}

TEST_CASE("config files load from disk") {
  const std::string path = "orthocycle_test_config.ini";
  {
    std::ofstream out(path);
    out << "cocycle.kind = cex1\nbase.eta = 1/4\n";
  }
  const auto cfg = load_config_file(path);
  CHECK(cfg.cocycle_kind == "cex1");
  CHECK(cfg.base_eta.value == 0.25);
  REQUIRE(cfg.base_eta.exact.has_value());
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_config_file("definitely/not/here.ini"), UsageError);
}

TEST_CASE("system assembly infers and validates the base") {
  ExperimentConfig cfg;
  cfg.cocycle_kind = "example3";
  const auto sys = build_system(cfg);  // bernoulli inferred
  CHECK(std::holds_alternative<SkewSystem<BernoulliBase>>(sys));

  cfg.base_kind = "rotation";
  CHECK_THROWS_AS(build_system(cfg), UsageError);  // example3 needs the shift

  ExperimentConfig rot;
  rot.cocycle_kind = "example2";
  rot.alpha = parse_number("sqrt3-1", "alpha");
  const auto sys2 = build_system(rot);
  REQUIRE(std::holds_alternative<SkewSystem<RotationBase>>(sys2));
  const auto& s2 = std::get<SkewSystem<RotationBase>>(sys2);
  CHECK(s2.base.eta == Catch::Approx(std::sqrt(2.0) - 1.0));
  CHECK(s2.gen.kind == GenKind::example2);
  CHECK(s2.gen.eta == Catch::Approx(std::sqrt(2.0) - 1.0));

  ExperimentConfig coin_rot;
  coin_rot.cocycle_kind = "example1";
  coin_rot.base_kind = "bernoulli";
  CHECK_THROWS_AS(build_system(coin_rot), UsageError);

  ExperimentConfig bad_eta;
  bad_eta.base_eta = parse_number("1.5", "eta");
  CHECK_THROWS_AS(build_system(bad_eta), UsageError);
}

TEST_CASE("exact literals reach the generator") {
  ExperimentConfig cfg;
  cfg.cocycle_kind = "example2";
  cfg.alpha = parse_number("1/3", "alpha");
  const auto gen = build_generator(cfg);
  REQUIRE(gen.alpha_exact.has_value());
  CHECK(*gen.alpha_exact == Rational(1, 3));
  // the rotation branch then carries the exact half-angle
  const auto e = gen.at(0.0);
  REQUIRE(e.exact.has_value());
  CHECK(*e.exact == Rational(1, 6));
}

TEST_CASE("echo is canonical and complete") {
  ExperimentConfig cfg;
  const auto m = cfg.echo();
  CHECK(m.at("base.kind") == "rotation");
  CHECK(m.at("base.eta") == "sqrt2-1");
  CHECK(m.at("cocycle.kind") == "example1");
  CHECK(m.at("skew.kind") == "S");
  CHECK(m.at("scan.N") == "1000000");
  CHECK(m.count("cocycle.eta") == 0);  // unset optional stays out

  ExperimentConfig c2;
  c2.cocycle_kind = "example3";
  c2.cocycle_eta = parse_number("1/6", "eta");
  const auto m2 = c2.echo();
  CHECK(m2.at("base.kind") == "bernoulli");
  CHECK(m2.at("cocycle.eta") == "1/6");
}
