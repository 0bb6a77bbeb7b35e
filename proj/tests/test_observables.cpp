#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <set>

#include "orthocycle/observables.hpp"
#include "orthocycle/rng.hpp"

using namespace orthocycle;

TEST_CASE("observable names are stable identifiers") {
  CHECK(Observable{Observable::Kind::torus_char, 2, -3}.name() ==
        "char(j=2,k=-3)");
  CHECK(Observable{Observable::Kind::fibre_cos, 0, 4}.name() == "cos(k=4)");
  CHECK(Observable{Observable::Kind::z2_char, 5, 0, +1}.name() == "base(j=5)");
  CHECK(Observable{Observable::Kind::z2_char, 5, 0, -1}.name() == "z2sign(j=5)");
  Observable z3;
  z3.kind = Observable::Kind::z3_char;
  z3.j = -1;
  z3.chi = 2;
  CHECK(z3.name() == "z3(j=-1,chi=2)");
  CHECK(Observable{Observable::Kind::k_radial}.name() == "k_radial");
}

TEST_CASE("pointwise evaluation matches the defining formulas") {
  const Observable c{Observable::Kind::torus_char, 2, -1};
  const auto v = evaluate(c, 0.3, 0.7);
  const double th = 2.0 * std::numbers::pi * (2 * 0.3 - 0.7);
  CHECK(v.real() == Catch::Approx(std::cos(th)));
  CHECK(v.imag() == Catch::Approx(std::sin(th)));
  CHECK(std::abs(v) == Catch::Approx(1.0));

  const Observable fc{Observable::Kind::fibre_cos, 0, 3};
  CHECK(evaluate(fc, 0.9, 0.25).real() ==
        Catch::Approx(std::cos(1.5 * std::numbers::pi)).margin(1e-15));
  CHECK(evaluate(fc, 0.9, 0.25).imag() == 0.0);

  const Observable zs{Observable::Kind::z2_char, 1, 0, -1};
  CHECK(evaluate_z2(zs, 0.0, 0).real() == Catch::Approx(1.0));
  CHECK(evaluate_z2(zs, 0.0, 1).real() == Catch::Approx(-1.0));
  const Observable zb{Observable::Kind::z2_char, 1, 0, +1};
  CHECK(evaluate_z2(zb, 0.0, 1).real() == Catch::Approx(1.0));

  Observable z3;
  z3.kind = Observable::Kind::z3_char;
  z3.j = 0;
  z3.chi = 1;
  const auto w = evaluate_z3(z3, 0.0, 1);
  CHECK(w.real() == Catch::Approx(-0.5));
  CHECK(w.imag() == Catch::Approx(std::sqrt(3.0) / 2.0));
  // chi = 2 on a = 1 equals chi = 1 on a = 2
  Observable z3b = z3;
  z3b.chi = 2;
  CHECK(std::abs(evaluate_z3(z3b, 0.1, 1) - evaluate_z3(z3, 0.1, 2)) <= 1e-15);

  const Observable kr{Observable::Kind::k_radial};
  CHECK(evaluate_sphere(kr, 0.5, GrassCoordC::finite({3.0, 0.0})).real() ==
        Catch::Approx(1.0 / 3.0));

  // kind/evaluator mismatches are hard errors
  CHECK_THROWS_AS(evaluate(zs, 0.1, 0.1), std::domain_error);
  CHECK_THROWS_AS(evaluate_z2(c, 0.1, 0), std::domain_error);
  CHECK_THROWS_AS(evaluate_z3(c, 0.1, 0), std::domain_error);
  CHECK_THROWS_AS(evaluate_sphere(c, 0.1, GrassCoordC::infinity()),
                  std::domain_error);
}

TEST_CASE("space average of the radial observable matches quadrature") {
  // E[k] for z distributed by the rotation-invariant sphere measure: with
  // u = cos(theta) uniform on [-1,1] and r = sqrt((1-u)/(1+u)),
  // k = min(r, 1/r); quadrature in u converges to pi/2 - 1.
  const int M = 200'000;
  double sum = 0.0;
  for (int i = 0; i < M; ++i) {
    const double u = -1.0 + 2.0 * (i + 0.5) / M;
    const double r = std::sqrt((1.0 - u) / (1.0 + u));
    sum += std::min(r, 1.0 / r);
  }
  const double quadrature = sum / M;
  const auto claimed = Observable{Observable::Kind::k_radial}.space_average();
  CHECK(claimed.imag() == 0.0);
  CHECK(claimed.real() == Catch::Approx(std::numbers::pi / 2.0 - 1.0));
  CHECK(quadrature == Catch::Approx(claimed.real()).margin(1e-4));

  CHECK(Observable{Observable::Kind::torus_char, 1, 1}.space_average() ==
        std::complex<double>(0.0, 0.0));
}

TEST_CASE("character space averages vanish against the product measure") {
  // Monte Carlo over the square for a handful of bank members.
  SplitMix64 rng(31);
  for (const auto& o : {Observable{Observable::Kind::torus_char, 1, 0},
                        Observable{Observable::Kind::torus_char, 0, 2},
                        Observable{Observable::Kind::torus_char, -3, 5},
                        Observable{Observable::Kind::fibre_cos, 0, 1}}) {
    std::complex<double> acc{0.0, 0.0};
    const int M = 100'000;
    for (int i = 0; i < M; ++i) acc += evaluate(o, rng.uniform(), rng.uniform());
    CHECK(std::abs(acc / static_cast<double>(M)) <= 0.02);
  }
}

TEST_CASE("default banks have the documented shape") {
  const auto bank_s = default_bank(SkewKind::S);
  REQUIRE(bank_s.size() == 126);  // 120 characters + 6 fibre cosines
  std::set<std::pair<int, int>> seen;
  int cosines = 0;
  for (const auto& o : bank_s) {
    if (o.kind == Observable::Kind::torus_char) {
      CHECK((o.j != 0 || o.k != 0));
      CHECK(std::abs(o.j) <= 5);
      CHECK(std::abs(o.k) <= 5);
      seen.insert({o.j, o.k});
    } else {
      REQUIRE(o.kind == Observable::Kind::fibre_cos);
      ++cosines;
      CHECK(o.k >= 1);
      CHECK(o.k <= 6);
    }
  }
  CHECK(seen.size() == 120);
  CHECK(cosines == 6);

  const auto bank_r = default_bank(SkewKind::R);
  REQUIRE(bank_r.size() == 21);  // 10 base characters + 11 signed ones
  int base = 0, signed_ = 0;
  for (const auto& o : bank_r) {
    REQUIRE(o.kind == Observable::Kind::z2_char);
    if (o.s > 0) {
      ++base;
      CHECK(o.j != 0);
    } else {
      ++signed_;
    }
  }
  CHECK(base == 10);
  CHECK(signed_ == 11);

  const auto bank_z3 = default_bank(SkewKind::Z3);
  CHECK(bank_z3.size() == 10 + 2 * 11);

  const auto bank_n = default_bank(SkewKind::N);
  REQUIRE(bank_n.size() == 11);
  CHECK(bank_n.back().kind == Observable::Kind::k_radial);
}
