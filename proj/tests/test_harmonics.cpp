#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "grushin/error.hpp"
#include "grushin/harmonics.hpp"
#include "grushin/quadrature.hpp"
#include "grushin/specfun.hpp"
#include "oracle.hpp"

using namespace grushin;

namespace {

std::vector<double> gauss(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> nd;
  std::vector<double> v(d);
  for (auto& x : v) x = nd(rng);
  return v;
}

OmegaPoint random_omega(std::mt19937_64& rng, const GrushinConfig& cfg) {
  PolarPoint p = polar_map(gauss(rng, cfg.n), gauss(rng, cfg.m), cfg);
  return {p.phi, p.omega1, p.omega2};
}

}  // namespace

TEST_CASE("polar coordinates round trip and homogeneity") {
  std::mt19937_64 rng(1);
  for (GrushinConfig cfg : {GrushinConfig{2, 1, 1}, GrushinConfig{3, 2, 2}, GrushinConfig{2, 3, 0}}) {
    const double w = cfg.alpha + 1.0;
    for (int t = 0; t < 30; ++t) {
      auto x = gauss(rng, cfg.n), y = gauss(rng, cfg.m);
      PolarPoint p = polar_map(x, y, cfg);
      auto [x2, y2] = polar_inverse(p, cfg);
      for (int i = 0; i < cfg.n; ++i) CHECK(x2[i] == doctest::Approx(x[i]).epsilon(1e-12));
      for (int i = 0; i < cfg.m; ++i) CHECK(y2[i] == doctest::Approx(y[i]).epsilon(1e-12));
      // rho^{2w} = |x|^{2w} + w^2 |y|^2 and psi = (|x| / rho)^{2 alpha}.
      double nx = 0, ny = 0;
      for (double v : x) nx += v * v;
      for (double v : y) ny += v * v;
      const double rho = std::pow(std::pow(nx, w) + w * w * ny, 1 / (2 * w));
      CHECK(gauge_norm(x, y, cfg) == doctest::Approx(rho).epsilon(1e-13));
      CHECK(angle_psi(p.phi, cfg) == doctest::Approx(std::pow(std::sqrt(nx) / rho, 2 * cfg.alpha)).epsilon(1e-12));
      const double d = 1.7;
      auto xd = x, yd = y;
      for (auto& v : xd) v *= d;
      for (auto& v : yd) v *= std::pow(d, w);
      CHECK(gauge_norm(xd, yd, cfg) == doctest::Approx(d * rho).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(polar_map({0, 0}, {0}, {2, 1, 1}), Error);
}

TEST_CASE("spherical dimensions and binomials") {
  for (int l = 0; l < 10; ++l) {
    CHECK(spherical_dimension(3, l) == Integer(2 * l + 1));
    CHECK(spherical_dimension(2, l) == Integer(l == 0 ? 1 : 2));
    CHECK(spherical_dimension(4, l) == Integer((l + 1) * (l + 1)));
  }
  CHECK(binomial(10, 3) == Integer(120));
  CHECK(binomial(3, 5) == Integer(0));
  CHECK(binomial(3, -1) == Integer(0));
}

TEST_CASE("dimension formulas agree and reduce to the classical count") {
  for (GrushinConfig cfg : {GrushinConfig{2, 1, 1}, GrushinConfig{3, 2, 2}, GrushinConfig{4, 3, 3}, GrushinConfig{2, 2, 0}})
    for (int k = 0; k <= 14; ++k) {
      const Integer a = dims(cfg, k).dimH;
      CHECK(a == dims_series(cfg, k).dimH);
      CHECK(a == dim_harmonic_explicit(cfg, k));
      CHECK(a == Integer(static_cast<unsigned long>(enumerate_indices(cfg, k).size())));
      if (cfg.alpha == 0) {
        const int N = cfg.n + cfg.m;
        CHECK(a == binomial(N + k - 1, k) - binomial(N + k - 3, k - 2));
      }
    }
}

TEST_CASE("basis elements are exactly harmonic and homogeneous") {
  for (GrushinConfig cfg : {GrushinConfig{2, 1, 2}, GrushinConfig{3, 2, 1}, GrushinConfig{2, 3, 3}})
    for (int k = 0; k <= 7; ++k)
      for (const auto& e : build_basis(cfg, k, true)) {
        CHECK_FALSE(e.cartesian.is_zero());
        CHECK(apply_grushin(e.cartesian, cfg).is_zero());
        CHECK(delta_degree(e.cartesian, cfg) == k);
      }
}

TEST_CASE("Cartesian form and polar form agree") {
  std::mt19937_64 rng(2);
  GrushinConfig cfg{3, 2, 1};
  for (const auto& e : build_basis(cfg, 5, true)) {
    auto x = gauss(rng, 3), y = gauss(rng, 2);
    PolarPoint p = polar_map(x, y, cfg);
    std::vector<double> pt = x;
    pt.insert(pt.end(), y.begin(), y.end());
    const double polar = std::pow(p.rho, 5) * e.trigEval({p.phi, p.omega1, p.omega2});
    CHECK(e.cartesian.evaluate(pt) == doctest::Approx(polar).epsilon(1e-10));
  }
}

TEST_CASE("orthonormality on the gauge sphere") {
  for (GrushinConfig cfg : {GrushinConfig{2, 1, 1}, GrushinConfig{2, 2, 1}, GrushinConfig{3, 2, 2}}) {
    std::vector<std::vector<BasisElement>> b;
    for (int k = 0; k <= 6; ++k) b.push_back(build_basis(cfg, k, false));
    for (int k1 = 0; k1 <= 6; ++k1)
      for (int k2 = k1; k2 <= 6; ++k2) {
        auto G = basis_gram(cfg, b[k1], b[k2]);
        for (std::size_t i = 0; i < G.size(); ++i)
          for (std::size_t j = 0; j < G[i].size(); ++j)
            CHECK(std::abs(G[i][j] - (k1 == k2 && i == j ? 1.0 : 0.0)) < 1e-11);
      }
    for (int k = 0; k <= 8; ++k)
      for (const auto& s : enumerate_shells(cfg, k))
        CHECK(profile_sq_norm(cfg, s) == doctest::Approx(profile_sq_norm_closed(cfg, s)).epsilon(1e-11));
  }
}

TEST_CASE("Gram diagonal by brute-force sampling") {
  GrushinConfig cfg{2, 2, 1};
  for (const auto& e : build_basis(cfg, 3, false)) {
    const double v = omega_integrate(
        cfg, [&](const OmegaPoint& p) { return e.normalizedEval(p) * e.normalizedEval(p); }, 40, 16);
    CHECK(std::abs(v - 1.0) < 1e-12);
  }
}

TEST_CASE("spherical reproducing kernel") {
  std::mt19937_64 rng(3);
  for (int n : {2, 3, 5})
    for (int k = 0; k <= 5; ++k) {
      const SphericalBasis& sb = spherical_basis(n, k);
      CHECK(Integer(static_cast<unsigned long>(sb.polys.size())) == spherical_dimension(n, k));
      auto a = gauss(rng, n), b = gauss(rng, n);
      double na = 0, nb = 0, dot = 0;
      for (int i = 0; i < n; ++i) {
        na += a[i] * a[i];
        nb += b[i] * b[i];
      }
      for (int i = 0; i < n; ++i) {
        a[i] /= std::sqrt(na);
        b[i] /= std::sqrt(nb);
        dot += a[i] * b[i];
      }
      double sum = 0;
      for (std::size_t i = 0; i < sb.polys.size(); ++i)
        sum += sb.polys[i].evaluate(a) * sb.polys[i].evaluate(b) / (sb.sq_norms[i].get_d() * sphere_area(n));
      CHECK(kernel_K(n, k, dot) == doctest::Approx(sum).epsilon(1e-10));
    }
}

TEST_CASE("kernel_G equals the basis sum and is symmetric") {
  std::mt19937_64 rng(4);
  for (GrushinConfig cfg : {GrushinConfig{2, 2, 1}, GrushinConfig{2, 1, 2}, GrushinConfig{3, 2, 1}})
    for (int k = 0; k <= 6; ++k) {
      auto basis = build_basis(cfg, k, false);
      for (int t = 0; t < 5; ++t) {
        OmegaPoint a = random_omega(rng, cfg), b = random_omega(rng, cfg);
        double sum = 0;
        for (const auto& e : basis) sum += e.normalizedEval(a) * e.normalizedEval(b);
        const double g = kernel_G(cfg, k, a, b);
        CHECK(g == doctest::Approx(sum).epsilon(1e-10).scale(1.0));
        CHECK(g == doctest::Approx(kernel_G(cfg, k, b, a)).epsilon(1e-12));
      }
    }
}

TEST_CASE("projection reproduces elements of H_k and kills other degrees") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (GrushinConfig cfg : {GrushinConfig{2, 2, 1}, GrushinConfig{2, 1, 1}, GrushinConfig{3, 2, 2}}) {
    const int kTop = cfg == GrushinConfig{2, 2, 1} ? 10 : 6;
    for (int k = 0; k <= kTop; ++k) {
      auto bk = build_basis(cfg, k, false);
      auto bn = build_basis(cfg, k + 1, false);
      std::vector<double> c(bk.size());
      for (double& v : c) v = nd(rng);
      auto u = [&](const OmegaPoint& p) {
        double s = 0;
        for (std::size_t i = 0; i < bk.size(); ++i) s += c[i] * bk[i].normalizedEval(p);
        return s;
      };
      OmegaEvaluator f = [&](const OmegaPoint& p) { return u(p) - 0.5 * bn[0].normalizedEval(p); };
      OmegaEvaluator pk = project_Pk(cfg, k, f);
      OmegaEvaluator pn = project_Pk(cfg, k + 2, f);
      for (int i = 0; i < 3; ++i) {
        const OmegaPoint at = random_omega(rng, cfg);
        CHECK(std::abs(pk(at) - u(at)) < 1e-8);
        CHECK(std::abs(pn(at)) < 1e-8);
      }
    }
  }
  GrushinConfig cfg{2, 2, 1};
  auto b3 = build_basis(cfg, 3, false);
  OmegaEvaluator f = [&](const OmegaPoint& p) { return 2 * b3[1].normalizedEval(p) + std::exp(std::cos(p.phi)); };
  OmegaGrid grid = make_omega_grid(cfg, 20, 20);
  std::vector<OmegaPoint> at;
  for (int i = 0; i < 5; ++i) at.push_back(random_omega(rng, cfg));
  auto viaKernel = project_Pk_kernel(cfg, 3, f, at, grid);
  OmegaEvaluator p3 = project_Pk(cfg, 3, f, grid);
  for (std::size_t i = 0; i < at.size(); ++i) CHECK(std::abs(viaKernel[i] - p3(at[i])) < 1e-10);
}

TEST_CASE("Gegenbauer addition formula") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> h(0, std::numbers::pi / 2), f(0, std::numbers::pi);
  for (auto [u, v] : std::vector<std::pair<double, double>>{{3, 3}, {4, 5}, {3, 6}})
    for (int t = 0; t < 20; ++t) {
      const double phi = h(rng), xi = h(rng), t1 = f(rng), t2 = f(rng);
      for (int k = 0; k <= 12; ++k) CHECK(addition_formula_residual(u, v, k, phi, xi, t1, t2) < 1e-10);
    }
  // phi = xi = 0 collapses to a single Gegenbauer value.
  CHECK(addition_formula_lhs(3, 4, 5, 0, 0, 0.7, 1.1) == doctest::Approx(gegenbauer_eval(5, 2.5, std::cos(0.7))));
  CHECK_THROWS_AS(addition_formula_residual(2, 3, 2, 0.1, 0.2, 0.3, 0.4), Error);
}

TEST_CASE("delta_sigma_profile satisfies the sphere eigenrelation") {
  // On rho^k h Y Z: Delta_sigma(h Y Z) = -k(k+Q-2) h Y Z.
  for (GrushinConfig cfg : {GrushinConfig{2, 2, 1}, GrushinConfig{3, 1, 2}})
    for (int k = 0; k <= 6; ++k)
      for (const auto& s : enumerate_shells(cfg, k))
        for (double phi : {0.3, 0.8, 1.2}) {
          const double h = shell_profile(cfg, s, phi);
          CHECK(delta_sigma_profile(cfg, s, phi) ==
                doctest::Approx(-k * (k + cfg.Q() - 2.0) * h).epsilon(1e-9).scale(1.0));
        }
}

TEST_CASE("profile jets match finite differences") {
  GrushinConfig cfg{2, 2, 2};
  const double e = 1e-5;
  for (const auto& s : enumerate_shells(cfg, 6)) {
    const double phi = 0.6;
    ProfileJet j = shell_profile_jet(cfg, s, phi);
    const double a = shell_profile(cfg, s, phi - e), b = shell_profile(cfg, s, phi + e);
    CHECK(j.h == doctest::Approx(shell_profile(cfg, s, phi)));
    CHECK(j.dh == doctest::Approx((b - a) / (2 * e)).epsilon(1e-6));
    CHECK(j.d2h == doctest::Approx((b - 2 * j.h + a) / (e * e)).epsilon(1e-4));
  }
}

TEST_CASE("growth fits recover exponents") {
  std::vector<int> ks;
  std::vector<double> vals;
  for (int k = 8; k <= 40; ++k) {
    ks.push_back(k);
    vals.push_back(3.5 * std::pow(k + 1.0, 2.25));
  }
  GrowthFit g = growth_fit(ks, vals);
  CHECK(g.slope == doctest::Approx(2.25).epsilon(1e-12));
  CHECK(std::exp(g.intercept) == doctest::Approx(3.5).epsilon(1e-10));
  CHECK(g.rSquared == doctest::Approx(1.0));
  CHECK_THROWS_AS(growth_fit({1, 2, 3}, {1, 2, 3}), Error);
  CHECK_THROWS_AS(growth_fit({1, 2, 3, 4}, {1, 2, -3, 4}), Error);
  std::vector<double> xs = {100.5, 125.5, 150.5, 175.5}, ys;
  for (double x : xs) ys.push_back(std::pow(x, -0.5));
  CHECK(growth_fit_log(xs, ys).slope == doctest::Approx(-0.5));
}

TEST_CASE("kernel diagonal sup is positive and grows") {
  GrushinConfig cfg{2, 2, 1};
  double prev = 0;
  for (int k = 0; k <= 20; k += 4) {
    const double v = kernel_diag_sup(cfg, k, 201);
    CHECK(v > prev);
    prev = v;
  }
}
