#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "grushin/harmonics.hpp"
#include "grushin/quadrature.hpp"
#include "grushin/specfun.hpp"
#include "oracle.hpp"

using namespace grushin;

TEST_CASE("Gauss-Jacobi mass and node layout") {
  for (auto [A, B] : std::vector<std::pair<double, double>>{{0, 0}, {0.5, -0.5}, {2.3, 0.7}, {-0.8, 4.0}}) {
    const QuadRule& r = gauss_jacobi_rule(A, B, 17);
    double w = 0;
    for (double v : r.weights) w += v;
    const double mass = std::pow(2.0, A + B + 1) * std::beta(A + 1, B + 1);
    CHECK(jacobi_weight_mass(A, B) == doctest::Approx(mass).epsilon(1e-13));
    CHECK(w == doctest::Approx(mass).epsilon(1e-13));
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      CHECK(std::abs(r.nodes[i]) < 1);
      CHECK(r.weights[i] > 0);
      if (i) CHECK(r.nodes[i] > r.nodes[i - 1]);
    }
  }
}

TEST_CASE("Gauss-Jacobi integrates orthogonal pairs exactly") {
  const double A = 1.25, B = -0.4;
  const int N = 12;
  const QuadRule& r = gauss_jacobi_rule(A, B, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; a + b <= 2 * N - 1; ++b) {
      double s = 0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i)
        s += r.weights[i] * jacobi_eval(a, {A, B}, r.nodes[i]) * jacobi_eval(b, {A, B}, r.nodes[i]);
      if (a != b) CHECK(std::abs(s) < 1e-12 * std::max(1.0, jacobi_weight_mass(A, B)));
    }
  // Moment t^5 against tanh-sinh.
  const double ref = oracle::tanh_sinh_ends(
      [&](double t, double lo, double hi) { return std::pow(hi, A) * std::pow(lo, B) * std::pow(t, 5); }, -1.0, 1.0);
  double s = 0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 5);
  CHECK(s == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("symmetric eigensolver") {
  auto e = sym_eigen({{2, 1}, {1, 2}});
  CHECK(e.values[0] == doctest::Approx(1));
  CHECK(e.values[1] == doctest::Approx(3));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 7;
  std::vector<std::vector<double>> M(n, std::vector<double>(n));
  double trace = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) M[i][j] = M[j][i] = u(rng);
  for (int i = 0; i < n; ++i) trace += M[i][i];
  auto r = sym_eigen(M, true);
  double sum = 0;
  for (int k = 0; k < n; ++k) {
    sum += r.values[k];
    if (k) CHECK(r.values[k] >= r.values[k - 1]);
    for (int i = 0; i < n; ++i) {
      double mv = 0;
      for (int j = 0; j < n; ++j) mv += M[i][j] * r.vectors[k][j];
      CHECK(std::abs(mv - r.values[k] * r.vectors[k][i]) < 1e-11);
    }
  }
  CHECK(sum == doctest::Approx(trace));
}

TEST_CASE("sphere moments") {
  CHECK(sphere_monomial_integral(3, {2, 0, 0}) == Rational(1, 3));
  CHECK(sphere_monomial_integral(3, {4, 0, 0}) == Rational(1, 5));
  CHECK(sphere_monomial_integral(3, {2, 2, 0}) == Rational(1, 15));
  CHECK(sphere_monomial_integral(4, {1, 2, 0, 0}) == Rational(0));
  // n = 2: average of cos^4 = 3/8.
  CHECK(sphere_monomial_integral(2, {4, 0}) == Rational(3, 8));
  CHECK(sphere_area(2) == doctest::Approx(2 * std::numbers::pi));
  CHECK(sphere_area(3) == doctest::Approx(4 * std::numbers::pi));
  CHECK(sphere_area(4) == doctest::Approx(2 * std::numbers::pi * std::numbers::pi));
}

TEST_CASE("sphere rules reproduce exact moments") {
  for (int n : {2, 3, 4}) {
    const SphereRule& r = sphere_rule(n, 8);
    std::vector<std::vector<int>> pows = {{0}, {2}, {4}, {2, 2}, {6, 2}, {1, 1}, {2, 4}};
    for (auto p : pows) {
      p.resize(n, 0);
      double s = 0;
      for (std::size_t i = 0; i < r.points.size(); ++i) {
        double v = r.weights[i];
        for (int c = 0; c < n; ++c) v *= std::pow(r.points[i][c], p[c]);
        s += v;
      }
      CHECK(s == doctest::Approx(sphere_monomial_integral(n, p).get_d() * sphere_area(n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("gauge-sphere measure") {
  for (GrushinConfig cfg : {GrushinConfig{2, 1, 1}, GrushinConfig{2, 2, 1}, GrushinConfig{3, 2, 2}}) {
    const double vol = omega_integrate(cfg, [](const OmegaPoint&) { return 1.0; }, 40, 8);
    CHECK(vol == doctest::Approx(omega_volume(cfg)).epsilon(1e-12));
    const double w = cfg.alpha + 1.0;
    // phi-part of dOmega against tanh-sinh.
    const double ref = oracle::tanh_sinh(
        [&](double phi, double phic) {
          const double sp = std::sin(phi), cp = cfg.m >= 2 ? std::sin(phic) : 1.0;
          return std::pow(sp, (cfg.n - 2) / w + 1) * std::pow(cp, cfg.m - 1);
        },
        0.0, phi_upper(cfg));
    CHECK(omega_phi_mass(cfg) == doctest::Approx(ref).epsilon(1e-11));
  }
}

TEST_CASE("restriction of a polynomial to the gauge sphere") {
  GrushinConfig cfg{2, 2, 1};
  auto x1 = RationalPolynomial::variable(2, 2, 0), y2 = RationalPolynomial::variable(2, 2, 3);
  RationalPolynomial p = x1 * x1 * y2 + x1 * Rational(3, 2);
  OmegaFunction f = OmegaFunction::from_polynomial(cfg, p);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x = {nd(rng), nd(rng)}, y = {nd(rng), nd(rng)};
    PolarPoint pp = polar_map(x, y, cfg);
    auto [xs, ys] = polar_inverse({1.0, pp.phi, pp.omega1, pp.omega2}, cfg);
    std::vector<double> pt = xs;
    pt.insert(pt.end(), ys.begin(), ys.end());
    CHECK(f(OmegaPoint{pp.phi, pp.omega1, pp.omega2}) == doctest::Approx(p.evaluate(pt)));
  }
  OmegaFunction one = OmegaFunction::constant(cfg, 1.0);
  CHECK(omega_inner_product(one, one, 0, cfg) == doctest::Approx(omega_volume(cfg)));
}
