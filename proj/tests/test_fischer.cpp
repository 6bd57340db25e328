#include <random>

#include "doctest.h"
#include "grushin/error.hpp"
#include "grushin/fischer.hpp"
#include "grushin/harmonics.hpp"
#include "grushin/ratpoly.hpp"

using namespace grushin;

namespace {

RationalPolynomial var(const GrushinConfig& c, int slot) { return RationalPolynomial::variable(c.n, c.m, slot); }

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-40, 40), den(1, 9);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

SpectralRep random_rep(const GrushinConfig& cfg, int k, std::mt19937_64& rng) {
  SpectralRep r = SpectralRep::zero(cfg, k);
  for (auto& s : r.shells)
    for (auto& c : s) c = random_rational(rng);
  return r;
}

}  // namespace

TEST_CASE("double factorial") {
  CHECK(double_factorial(7) == 105);
  CHECK(double_factorial(8) == 384);
  CHECK(double_factorial(0) == 1);
  CHECK(double_factorial(-1) == 1);
  CHECK_THROWS_AS(double_factorial(-3), Error);
}

TEST_CASE("spectral operator factors") {
  GrushinConfig cfg{2, 2, 1};
  const int Q = cfg.Q();
  CHECK(spectral_L_factor(cfg, 5, 0) == 0);
  CHECK(spectral_L_factor(cfg, 5, 1) == Rational(2 * (Q + 2 * 5 - 4)));
  SpectralRep harmonic = SpectralRep::zero(cfg, 4);
  for (auto& c : harmonic.shells[0]) c = 3;
  CHECK(spectral_L(harmonic).is_zero());
  SpectralRep one = SpectralRep::zero(cfg, 4);
  one.shells[1][0] = 1;
  SpectralRep l = spectral_L(one);
  CHECK(l.shells[0][0] == Rational(2 * (Q + 2 * 4 - 4)));
}

TEST_CASE("spectral factor matches the Laplacian on rho^{2p} u for alpha = 0") {
  for (GrushinConfig cfg : {GrushinConfig{2, 1, 0}, GrushinConfig{3, 2, 0}}) {
    const RationalPolynomial r2 = [&] {
      RationalPolynomial s = RationalPolynomial::constant(cfg.n, cfg.m, Rational(0));
      for (int i = 0; i < cfg.n + cfg.m; ++i) s = s + var(cfg, i) * var(cfg, i);
      return s;
    }();
    for (int kk = 0; kk <= 3; ++kk)
      for (const auto& e : build_basis(cfg, kk, true))
        for (int p = 1; p <= 2; ++p) {
          const int k = kk + 2 * p;
          const RationalPolynomial f = r2.pow(p) * e.cartesian;
          const RationalPolynomial expect = r2.pow(p - 1) * e.cartesian * spectral_L_factor(cfg, k, p);
          CHECK(apply_grushin(f, cfg) == expect);
        }
  }
}

TEST_CASE("power coefficients agree with iterated spectral_L") {
  std::mt19937_64 rng(21);
  for (GrushinConfig cfg : {GrushinConfig{2, 1, 1}, GrushinConfig{2, 2, 1}, GrushinConfig{3, 2, 2}})
    for (int k = 0; k <= 10; ++k)
      for (int j = 0; 2 * j <= k; ++j) {
        SpectralRep rep = SpectralRep::zero(cfg, k);
        rep.shells[j][0] = 1;
        for (int v = 0; v <= j + 1; ++v) {
          const Rational c = power_coefficient(cfg, k, v, j);
          if (v > j) {
            CHECK(c == 0);
            continue;
          }
          CHECK(rep.shells[j - v][0] == c);
          if (rep.k >= 2) rep = spectral_L(rep);
        }
      }
}

TEST_CASE("projection coefficients and the projection identity") {
  GrushinConfig q4{2, 1, 1};
  REQUIRE(q4.Q() == 4);
  auto pc = proj_coefficients(q4, 2, 1);
  REQUIRE(!pc.alphas.empty());
  CHECK(pc.alphas[0] == Rational(1, 8));
  CHECK(proj_coefficients(q4, 6, 0).alphas[0] == 1);
  for (GrushinConfig cfg : {GrushinConfig{2, 1, 1}, GrushinConfig{2, 2, 1}, GrushinConfig{3, 1, 2}, GrushinConfig{3, 2, 0}})
    for (int k = 0; k <= 8; ++k) {
      auto r = verify_proj_identity(cfg, k);
      CHECK(r.pass());
      CHECK(r.checked > 0);
    }
  // Degree 2, two shells: the projectors select one shell each.
  GrushinConfig cfg{2, 2, 1};
  SpectralRep rep = SpectralRep::zero(cfg, 2);
  for (auto& c : rep.shells[0]) c = 1;
  rep.shells[1][0] = 5;
  SpectralRep top = apply_proj(proj_coefficients(cfg, 2, 0), rep);
  SpectralRep low = apply_proj(proj_coefficients(cfg, 2, 1), rep);
  CHECK(top.k == 2);
  CHECK(low.k == 0);
  CHECK(top.shells[0] == rep.shells[0]);
  CHECK(low.shells[0][0] == 5);
}

TEST_CASE("sl2 relations hold exactly") {
  GrushinConfig cfg{2, 2, 1};
  CHECK(sl2_symbol(cfg, Rational(3), 1) == 16);
  CHECK(sl2_commutator_check(cfg, Rational(0), 0).zero());
  std::mt19937_64 rng(22);
  for (GrushinConfig c : {GrushinConfig{2, 1, 1}, GrushinConfig{2, 2, 1}, GrushinConfig{4, 3, 2}})
    for (int t = 0; t < 50; ++t) {
      const Rational a = random_rational(rng);
      CHECK(sl2_commutator_check(c, a, t % 11).zero());
    }
  // [L, rho^2] = 4(k + Q/2) on a degree-k representation.
  for (int k = 0; k <= 8; ++k) {
    SpectralRep r = random_rep(cfg, k, rng);
    SpectralRep lhs = spectral_L(multiply_rho2(r));
    if (k >= 2) {
      SpectralRep rl = multiply_rho2(spectral_L(r));
      for (std::size_t p = 0; p < lhs.shells.size(); ++p)
        for (std::size_t i = 0; i < lhs.shells[p].size(); ++i) lhs.shells[p][i] -= rl.shells[p][i];
    }
    const Rational factor = Rational(4) * (Rational(k) + Rational(cfg.Q(), 2));
    for (std::size_t p = 0; p < r.shells.size(); ++p)
      for (std::size_t i = 0; i < r.shells[p].size(); ++i) CHECK(lhs.shells[p][i] == factor * r.shells[p][i]);
  }
}

TEST_CASE("pointwise sl2 relation on basis elements") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> nd;
  for (GrushinConfig cfg : {GrushinConfig{2, 2, 1}, GrushinConfig{3, 1, 2}})
    for (int k = 0; k <= 5; ++k)
      for (const auto& e : build_basis(cfg, k, true)) {
        std::vector<double> x(cfg.n), y(cfg.m);
        for (double& v : x) v = nd(rng);
        for (double& v : y) v = nd(rng);
        CHECK(sl2_pointwise_residual(e, x, y) < 1e-8);
      }
}

TEST_CASE("Fischer decomposition for alpha = 0") {
  std::mt19937_64 rng(24);
  std::uniform_int_distribution<int> d(-3, 3);
  for (GrushinConfig cfg : {GrushinConfig{2, 1, 0}, GrushinConfig{3, 2, 0}})
    for (int k = 2; k <= 3; ++k) {
      std::vector<RationalPolynomial::Term> terms;
      for (const auto& mono : enumerate_monomials(cfg, k)) terms.push_back({mono, Rational(d(rng))});
      auto f = RationalPolynomial::from_terms(cfg.n, cfg.m, terms);
      if (f.is_zero()) continue;
      auto r = fischer_decompose(cfg, f, 6);
      CHECK(r.residualNorm <= 1e-10 * std::sqrt(r.fNormSq));
      CHECK(r.outOfRangeMass <= 1e-20 * r.fNormSq);
      CHECK(r.inRangeMass == doctest::Approx(r.fNormSq).epsilon(1e-12));
    }
}

TEST_CASE("Fischer decomposition of a single harmonic") {
  GrushinConfig cfg{2, 2, 1};
  for (int k : {1, 3, 4}) {
    auto basis = build_basis(cfg, k, true);
    const auto& e = basis.back();
    auto r = fischer_decompose(cfg, e.cartesian, k + 4);
    int nonzero = 0;
    for (const auto& s : r.shells)
      if (s.mass > 1e-20 * r.fNormSq) {
        ++nonzero;
        CHECK(s.kprime == k);
      }
    CHECK(nonzero == 1);
    CHECK(r.residualNorm <= 1e-10 * std::sqrt(r.fNormSq));
  }
}

TEST_CASE("Fischer report on the degenerate input is deterministic and bounded") {
  GrushinConfig cfg{2, 2, 1};
  auto x1 = var(cfg, 0), x2 = var(cfg, 1);
  auto f = x1 * x1 + x2 * x2;
  double lastOut = -1;
  for (int kCut = 2; kCut <= 8; ++kCut) {
    auto r = fischer_decompose(cfg, f, kCut);
    CHECK(r.outOfRangeMass >= lastOut);
    CHECK(r.inRangeMass + r.outOfRangeMass <= r.fNormSq * (1 + 1e-12));
    lastOut = r.outOfRangeMass;
    CHECK(fischer_report_json(r) == fischer_report_json(fischer_decompose(cfg, f, kCut)));
  }
  auto y1 = var(cfg, 2);
  CHECK_THROWS_AS(fischer_decompose(cfg, x1 + y1, 4), Error);
  try {
    fischer_decompose(cfg, x1 + y1, 4);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MixedDegree);
  }
}
