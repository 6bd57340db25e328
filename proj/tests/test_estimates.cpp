#include <cmath>
#include <numbers>

#include "doctest.h"
#include "grushin/error.hpp"
#include "grushin/estimates.hpp"
#include "grushin/harmonics.hpp"
#include "grushin/specfun.hpp"
#include "oracle.hpp"

using namespace grushin;

namespace {

// Ratio of int w^2 h^2 dmu to int h^2 dmu over the phi-part of dOmega, by tanh-sinh.
double weighted_profile_oracle(const GrushinConfig& cfg, const Shell& s, double beta, bool sinWeight) {
  const double w = cfg.alpha + 1;
  auto integrand = [&](double phi, double phic, bool weighted) {
    const double sp = std::sin(phi), cp = cfg.m >= 2 ? std::sin(phic) : 1.0;
    double mu = std::pow(sp, (cfg.n - 2) / w + 1) * std::pow(cp, cfg.m - 1);
    const double h = shell_profile(cfg, s, phi);
    if (weighted) mu *= sinWeight ? std::pow(sp, -2 * beta) : std::pow(angle_psi(phi, cfg), -2 * beta);
    return mu * h * h;
  };
  const double hi = phi_upper(cfg);
  const double num = oracle::tanh_sinh([&](double a, double b) { return integrand(a, b, true); }, 0.0, hi);
  const double den = oracle::tanh_sinh([&](double a, double b) { return integrand(a, b, false); }, 0.0, hi);
  return num / den;
}

}  // namespace

TEST_CASE("growth fits on synthetic data") {
  std::vector<int> ks;
  std::vector<double> sq, flat, noisy;
  for (int k = 8; k <= 40; ++k) {
    ks.push_back(k);
    sq.push_back((k + 1.0) * (k + 1.0));
    flat.push_back(4.0);
    noisy.push_back(3 * std::pow(k + 1.0, 1.5) * (1 + 0.1 / k));
  }
  CHECK(std::abs(growth_fit(ks, sq).slope - 2.0) < 1e-12);
  CHECK(std::abs(growth_fit(ks, flat).slope) < 1e-12);
  CHECK(std::abs(growth_fit(ks, noisy).slope - 1.5) < 0.05);
  CHECK_THROWS_AS(growth_fit({1, 2}, {1.0, 2.0}), Error);
}

TEST_CASE("Jacobi weight bounds on small grids") {
  auto b = bernstein_check(4, 4, 40, 401);
  CHECK(b.pass);
  CHECK(b.worstRatio < kBernsteinConstant);
  CHECK(unit_bound_check(30, 4, 401).pass);
  auto l = legendre_check(60, 801);
  CHECK(l.pass);
  // Independent check at x = 0 with the recurrence oracle.
  for (int n = 0; n <= 60; n += 2)
    CHECK(std::abs(oracle::legendre(n, 0.0)) <= 2 / std::sqrt(std::numbers::pi * (2 * n + 1)) + kLegendreSlack);
  const auto grid = chebyshev_grid(5);
  REQUIRE(grid.size() == 5);
  CHECK(grid.front() == doctest::Approx(1.0));
  CHECK(grid.back() == doctest::Approx(-1.0));
}

TEST_CASE("connection bound kl1") {
  // gamma = 1, alpha = 1/2, beta = 0, n = 1: bound 2.
  const double ratio = connection_I(1, 1.0, 0.5, 0.0) / norm_B(1, {1.0, 0.0});
  CHECK(ratio <= 2.0);
  CHECK(kl1_check(1.0, 0.0, 40).pass);
  CHECK(kl1_check(3.5, 2.5, 40).pass);
  const double near = connection_I(6, 2.0, 2.0 - 1e-9, 1.0) / norm_B(6, {2.0, 1.0});
  CHECK(near == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("dxsa1 constants shrink as epsilon grows") {
  auto small = dxsa1_check(1, 2, 0.6, 0.1, 200);
  auto large = dxsa1_check(1, 2, 0.6, 0.4, 200);
  CHECK(dxsa1_check(1, 2, 0.6, 0.2, 200).pass);
  CHECK(std::isfinite(small.worstRatio));
  CHECK(large.worstRatio <= small.worstRatio);
  CHECK_THROWS_AS(dxsa1_check(1, 2, 1.5, 0.2, 200), Error);
}

TEST_CASE("exact per-term ratio") {
  CHECK(term_ratio(Rational(1), Rational(1), 4, 1) == Rational(1, 3));
  CHECK(term_ratio(Rational(1), Rational(1), 3, 1) == Rational(1, 5));
  for (int j = 1; j <= 12; ++j)
    for (int k = 0; 2 * k <= j - 1; ++k) {
      auto u = term_ratio_unreduced(Rational(3, 2), Rational(1, 2), j, k);
      if (u) CHECK(*u == term_ratio(Rational(3, 2), Rational(1, 2), j, k));
    }
  CHECK(term_ratio_check(Rational(5, 2), Rational(3, 4), 40).pass);
  CHECK_THROWS_AS(term_ratio_check(Rational(1), Rational(2), 10), Error);
}

TEST_CASE("shifted Gegenbauer norms and iin") {
  CHECK(iin_check(1.0, 0.7, 60, 3).pass);
  CHECK(iin_check(2.0, 0.5, 60, 3).pass);
  // ell = 0 is gegenbauer_J with normalized polynomial.
  for (int j = 0; j <= 10; ++j)
    CHECK(shifted_gegenbauer_norm(j, 0, 1.5, 1.0) ==
          doctest::Approx(gegenbauer_J(j, 1.5, 1.0) / gegenbauer_norm(j, 1.5)).epsilon(1e-10));
}

TEST_CASE("asymptotics of gegenbauer_J") {
  auto flat = j_asymptotic_check(1.0, 1.0, 400);
  CHECK(flat.pass);
  CHECK(std::abs(*flat.fittedExponent) < 0.05);
  auto grow = j_asymptotic_check(1.0, 0.2, 400);
  CHECK(grow.pass);
  CHECK(*grow.fittedExponent == doctest::Approx(0.6).epsilon(0.05));
  CHECK_THROWS_AS(j_asymptotic(0.5, 0.0), Error);
  const JAsymptotic a = j_asymptotic(1.5, 1.5);
  CHECK(gegenbauer_J(300, 1.5, 1.5) / (a.constant * std::pow(300.0, a.exponent)) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("weighted projector norms") {
  for (GrushinConfig cfg : {GrushinConfig{2, 2, 1}, GrushinConfig{3, 1, 2}, GrushinConfig{4, 2, 2}})
    for (int k = 0; k <= 6; ++k) CHECK(std::abs(projector_weighted_norm(cfg, k, 0.0) - 1) < 1e-12);
  // k = 0: a ratio of Beta integrals.
  for (GrushinConfig cfg : {GrushinConfig{2, 2, 1}, GrushinConfig{3, 2, 2}, GrushinConfig{2, 1, 1}}) {
    const bool sinW = cfg.m == 1;
    const double beta = 0.3;
    const double ref = weighted_profile_oracle(cfg, make_shell(cfg, 0, 0, 0), beta, sinW);
    CHECK(projector_weighted_norm(cfg, 0, beta) == doctest::Approx(ref).epsilon(1e-10));
  }
  // Every shell against the profile oracle.
  GrushinConfig cfg{2, 2, 1};
  for (int k = 1; k <= 6; ++k)
    for (const auto& s : enumerate_shells(cfg, k)) {
      const double ref = weighted_profile_oracle(cfg, s, 0.4, false);
      CHECK(weighted_shell_norm(cfg, k, s.ell, s.j, 0.4, WeightKind::Psi) == doctest::Approx(ref).epsilon(1e-9));
    }
  double last = 1;
  for (double beta : {0.1, 0.2, 0.4, 0.6}) {
    const double v = projector_weighted_norm(cfg, 5, beta);
    CHECK(v >= last);
    last = v;
  }
  const double thr = weight_threshold(cfg, WeightKind::Psi);
  CHECK_THROWS_AS(projector_weighted_norm(cfg, 3, thr), Error);
  CHECK_THROWS_AS(projector_weighted_norm(cfg, 3, thr + 0.5), Error);
  CHECK(resolve_weight(GrushinConfig{2, 1, 1}, WeightKind::Auto) == WeightKind::Sin);
  CHECK(resolve_weight(cfg, WeightKind::Auto) == WeightKind::Psi);
}

TEST_CASE("growth exponents of kernels and projectors") {
  CHECK(*kernel_growth_claim(GrushinConfig{2, 2, 1}) == 2);
  CHECK(*kernel_growth_claim(GrushinConfig{4, 2, 2}) == 4);
  CHECK(*kernel_growth_claim(GrushinConfig{2, 2, 2}) == 4);
  CHECK(!kernel_growth_claim(GrushinConfig{2, 1, 1}));
  for (GrushinConfig cfg : {GrushinConfig{4, 2, 2}, GrushinConfig{2, 2, 2}}) {
    auto r = kernel_growth_check(cfg, 8, 40);
    CHECK(r.pass);
    CHECK(*r.fittedExponent <= *r.claimedExponent + kGrowthSlack);
  }
  auto p = projector_growth_check(GrushinConfig{2, 1, 1}, 0.3, 8, 40);
  CHECK(p.pass);
}

TEST_CASE("closed forms against quadrature") {
  auto r = closed_forms_check(20);
  CHECK(r.pass);
  CHECK(r.worstRatio <= 1.0);
  CHECK(norm_B_quadrature(0, 0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(gegenbauer_J_quadrature(0, 1, 1) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-14));
}

TEST_CASE("report serialization") {
  auto r = term_ratio_check(Rational(1), Rational(1, 2), 6);
  const std::string csv = bound_report_csv(r);
  CHECK(csv.rfind("# schema_version: 1\n", 0) == 0);
  CHECK(csv.find("bound_name,lambda,mu,term,k,lhs,rhs,ratio,pass") != std::string::npos);
  CHECK(bound_report_json(r).find("\"schema_version\"") != std::string::npos);
}
