#include <random>

#include "doctest.h"
#include "grushin/error.hpp"
#include "grushin/harmonics.hpp"
#include "grushin/ratpoly.hpp"

using namespace grushin;

namespace {

RationalPolynomial var(const GrushinConfig& c, int slot) { return RationalPolynomial::variable(c.n, c.m, slot); }

RationalPolynomial random_poly(const GrushinConfig& cfg, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-4, 4);
  std::vector<RationalPolynomial::Term> terms;
  for (const auto& mono : enumerate_monomials(cfg, k)) {
    Rational c(d(rng), 1 + (d(rng) + 4) % 3);
    c.canonicalize();
    terms.push_back({mono, c});
  }
  return RationalPolynomial::from_terms(cfg.n, cfg.m, terms);
}

}  // namespace

TEST_CASE("arithmetic and canonical form") {
  GrushinConfig c{2, 1, 0};
  auto x = var(c, 0), y = var(c, 2);
  auto s = (x + y).pow(2);
  CHECK(s == x * x + x * y * Rational(2) + y * y);
  CHECK((s - s).is_zero());
  CHECK(s.derivative(0) == x * Rational(2) + y * Rational(2));
  CHECK(s.evaluate({1.5, 0.0, -0.5}) == doctest::Approx(1.0));
  Monomial mono;
  mono.e[0] = 1;
  mono.e[2] = 1;
  CHECK(s.coefficient(mono) == Rational(2));
  CHECK(to_string(RationalPolynomial::constant(2, 1, Rational(0))).size() > 0);
}

TEST_CASE("Grushin operator on small inputs") {
  GrushinConfig c{2, 1, 1};
  auto x1 = var(c, 0), x2 = var(c, 1), y = var(c, 2);
  // Delta_x |x|^2 = 2n.
  CHECK(apply_grushin(x1 * x1 + x2 * x2, c) == RationalPolynomial::constant(2, 1, Rational(4)));
  // |x|^2 Delta_y y^2 = 2|x|^2.
  CHECK(apply_grushin(y * y, c) == (x1 * x1 + x2 * x2) * Rational(2));
  // Classical harmonic x1^2 - y^2.
  GrushinConfig c0{2, 1, 0};
  auto a = var(c0, 0), b = var(c0, 2);
  CHECK(apply_grushin(a * a - b * b, c0).is_zero());
}

TEST_CASE("alpha = 0 reduces to the Euclidean Laplacian") {
  std::mt19937_64 rng(1);
  for (GrushinConfig c : {GrushinConfig{2, 1, 0}, GrushinConfig{3, 2, 0}}) {
    for (int k = 0; k <= 5; ++k) {
      auto p = random_poly(c, k, rng);
      CHECK(apply_grushin(p, c) == laplace_block(p, true) + laplace_block(p, false));
    }
  }
}

TEST_CASE("delta degree and the Euler operator") {
  GrushinConfig c{2, 2, 2};
  auto x1 = var(c, 0), y1 = var(c, 2);
  CHECK(delta_degree(x1 * x1 * y1, c) == 5);
  CHECK_THROWS_AS(delta_degree(x1 + x1 * x1, c), Error);
  std::mt19937_64 rng(2);
  for (int k = 0; k <= 7; ++k) {
    auto p = random_poly(c, k, rng);
    if (p.is_zero()) continue;
    CHECK(apply_euler(p, c) == p * Rational(k));
  }
}

TEST_CASE("monomial count matches dim P_k") {
  for (GrushinConfig c : {GrushinConfig{2, 1, 1}, GrushinConfig{3, 2, 2}, GrushinConfig{4, 3, 1}})
    for (int k = 0; k <= 10; ++k)
      CHECK(Integer(static_cast<unsigned long>(enumerate_monomials(c, k).size())) == dims(c, k).dimP);
}

TEST_CASE("constructive preimage inverts the operator") {
  std::mt19937_64 rng(3);
  for (GrushinConfig c : {GrushinConfig{2, 1, 1}, GrushinConfig{2, 2, 1}, GrushinConfig{3, 1, 2}, GrushinConfig{3, 2, 0}})
    for (int k = 0; k <= 6; ++k) {
      auto f = random_poly(c, k, rng);
      if (f.is_zero()) continue;
      auto g = grushin_preimage(f, c);
      CHECK(apply_grushin(g, c) == f);
      CHECK(delta_degree(g, c) == k + 2);
    }
  GrushinConfig c{3, 1, 0};
  auto x1 = var(c, 0), x2 = var(c, 1), x3 = var(c, 2);
  auto h = x1 * x2 * x3;
  CHECK(laplace_block(laplace_preimage_x(h), true) == h);
}

TEST_CASE("operator is onto: rank equals dim P_{k-2}") {
  for (GrushinConfig c : {GrushinConfig{2, 1, 1}, GrushinConfig{2, 2, 2}, GrushinConfig{3, 2, 1}})
    for (int k = 0; k <= 9; ++k) {
      const std::size_t lower = k >= 2 ? enumerate_monomials(c, k - 2).size() : 0;
      CHECK(grushin_rank(c, k) == lower);
    }
}

TEST_CASE("nullspace and structured basis span the same space") {
  for (GrushinConfig c : {GrushinConfig{2, 1, 1}, GrushinConfig{2, 2, 1}, GrushinConfig{3, 2, 2}})
    for (int k = 0; k <= 6; ++k) {
      auto ns = nullspace_harmonics(c, k);
      std::vector<RationalPolynomial> structured;
      for (const auto& e : build_basis(c, k, true)) structured.push_back(e.cartesian);
      const std::size_t d = dim_harmonic_explicit(c, k).get_ui();
      CHECK(ns.size() == d);
      CHECK(polynomial_rank(ns) == d);
      CHECK(polynomial_rank(structured) == d);
      auto both = ns;
      both.insert(both.end(), structured.begin(), structured.end());
      CHECK(polynomial_rank(both) == d);
      for (const auto& p : ns) CHECK(apply_grushin(p, c).is_zero());
    }
}

TEST_CASE("exact Gram-Schmidt against the coefficient inner product") {
  GrushinConfig c{2, 1, 1};
  auto ns = nullspace_harmonics(c, 4);
  auto ip = [](const RationalPolynomial& a, const RationalPolynomial& b) {
    Rational s = 0;
    for (const auto& [m, v] : a.terms()) s += v * b.coefficient(m);
    return s;
  };
  auto gs = rational_gram_schmidt(ns, ip);
  for (std::size_t i = 0; i < gs.basis.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) CHECK(ip(gs.basis[i], gs.basis[j]) == 0);
  auto dup = ns;
  dup.push_back(ns.front() * Rational(3));
  CHECK_THROWS_AS(rational_gram_schmidt(dup, ip), Error);
}

TEST_CASE("serialization and primitive parts") {
  GrushinConfig c{2, 2, 1};
  std::mt19937_64 rng(4);
  auto p = random_poly(c, 5, rng);
  CHECK(polynomial_from_json(polynomial_to_json(p), 2, 2) == p);
  auto x1 = var(c, 0), y1 = var(c, 2);
  RationalPolynomial q = x1 * Rational(2, 3) - y1 * Rational(4, 9);
  IntPolynomial pp = primitive_part(q);
  CHECK(to_rational(pp) == q * Rational(9, 2));
  CHECK_THROWS_AS(polynomial_from_json("not json", 2, 2), Error);
}

TEST_CASE("compiled evaluation matches exact evaluation") {
  GrushinConfig c{3, 2, 1};
  std::mt19937_64 rng(6);
  auto p = random_poly(c, 6, rng);
  CompiledPolynomial f(p);
  std::vector<double> pt = {0.3, -0.7, 1.1, 0.25, -0.4};
  CHECK(f(pt.data()) == doctest::Approx(p.evaluate(pt)));
}
