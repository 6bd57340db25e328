#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "grushin/config.hpp"
#include "grushin/error.hpp"

namespace grushin {

using Rational = mpq_class;
using Integer = mpz_class;

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);
Rational parse_rational(const std::string& s);

inline constexpr int kMaxVars = 16;

// Exponent vector: x-exponents in slots [0, nx), y-exponents in [nx, nx+ny).
struct Monomial {
  std::array<std::uint8_t, kMaxVars> e{};

  int degree() const {
    int d = 0;
    for (auto v : e) d += v;
    return d;
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::uint64_t a, b;
    std::memcpy(&a, m.e.data(), 8);
    std::memcpy(&b, m.e.data() + 8, 8);
    std::uint64_t h = a * 0x9E3779B97F4A7C15ULL ^ (b + 0x632BE59BD9B4E019ULL + (a << 6) + (a >> 2));
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

// Graded lexicographic order, larger first.
bool grlex_before(const Monomial& a, const Monomial& b);

Monomial monomial_product(const Monomial& a, const Monomial& b);

template <class C>
class Polynomial {
 public:
  using Term = std::pair<Monomial, C>;

  Polynomial() = default;
  Polynomial(int nx, int ny) : nx_(nx), ny_(ny) {}

  static Polynomial constant(int nx, int ny, const C& c);
  static Polynomial variable(int nx, int ny, int slot);
  static Polynomial monomial(int nx, int ny, const Monomial& mono, const C& c);
  // Sorts and merges; drops zero coefficients.
  static Polynomial from_terms(int nx, int ny, std::vector<Term> terms);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nvars() const { return nx_ + ny_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const C& c) const;
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
  bool operator==(const Polynomial& o) const {
    return nx_ == o.nx_ && ny_ == o.ny_ && terms_ == o.terms_;
  }

  Polynomial derivative(int slot) const;
  Polynomial pow(int e) const;
  // Coefficient of mono, zero if absent.
  C coefficient(const Monomial& mono) const;
  double evaluate(const std::vector<double>& point) const;

 private:
  int nx_ = 0;
  int ny_ = 0;
  std::vector<Term> terms_;
};

using RationalPolynomial = Polynomial<Rational>;
using IntPolynomial = Polynomial<Integer>;

// Hash-map accumulator; build() sorts into canonical order.
template <class C>
class PolyBuilder {
 public:
  PolyBuilder(int nx, int ny) : nx_(nx), ny_(ny) {}
  void reserve(std::size_t n) { acc_.reserve(n); }
  void add(const Monomial& mono, const C& c) {
    auto [it, inserted] = acc_.try_emplace(mono, c);
    if (!inserted) it->second += c;
  }
  void add_product(const Monomial& mono, const C& a, const C& b) {
    auto [it, inserted] = acc_.try_emplace(mono);
    if (inserted) it->second = a * b;
    else it->second += a * b;
  }
  Polynomial<C> build();

 private:
  int nx_, ny_;
  std::unordered_map<Monomial, C, MonomialHash> acc_;
};

// Double-precision evaluator compiled from an exact polynomial.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  explicit CompiledPolynomial(const RationalPolynomial& p);
  double operator()(const double* point) const;
  int nvars() const { return nvars_; }

 private:
  int nvars_ = 0;
  int maxdeg_ = 0;
  std::vector<double> coeffs_;
  std::vector<std::uint8_t> exps_;
};

// Integer multiple with coprime coefficients; leading coefficient positive.
IntPolynomial primitive_part(const RationalPolynomial& p);
RationalPolynomial to_rational(const IntPolynomial& p);

int delta_degree(const RationalPolynomial& p, const GrushinConfig& cfg);
int delta_degree_of(const Monomial& mono, const GrushinConfig& cfg);

template <class C>
Polynomial<C> apply_grushin(const Polynomial<C>& p, const GrushinConfig& cfg);
RationalPolynomial apply_euler(const RationalPolynomial& p, const GrushinConfig& cfg);

// Euclidean Laplacian in the x-block (x = true) or the y-block.
RationalPolynomial laplace_block(const RationalPolynomial& p, bool x);

std::vector<Monomial> enumerate_monomials(const GrushinConfig& cfg, int k);

// Polynomial in x-slots: |x|^{2e}, or |y|^{2e} when x = false.
RationalPolynomial block_norm_power(int nx, int ny, bool x, int e);

// X with Delta_x X = h for h homogeneous in x (any y-dependence rides along).
RationalPolynomial laplace_preimage_x(const RationalPolynomial& h);
RationalPolynomial grushin_preimage(const RationalPolynomial& f, const GrushinConfig& cfg);

std::vector<RationalPolynomial> nullspace_harmonics(const GrushinConfig& cfg, int k);

// Rank of Delta_alpha from degree k to degree k-2. Full row rank modulo a
// prime certifies the rational rank; otherwise falls back to exact elimination.
std::size_t grushin_rank(const GrushinConfig& cfg, int k);

// Exact rank over Q of a set of polynomials (coefficient vectors).
std::size_t polynomial_rank(const std::vector<RationalPolynomial>& polys);

template <class V>
struct GramSchmidtResult {
  std::vector<V> basis;
  std::vector<Rational> sq_norms;
};

// Classical Gram-Schmidt in exact arithmetic; ip(a, b) must return Rational.
template <class V, class IP>
GramSchmidtResult<V> rational_gram_schmidt(const std::vector<V>& vectors, IP ip) {
  GramSchmidtResult<V> out;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    V v = vectors[i];
    for (std::size_t j = 0; j < out.basis.size(); ++j) {
      Rational c = ip(vectors[i], out.basis[j]) / out.sq_norms[j];
      if (c != 0) v = v - out.basis[j] * c;
    }
    Rational nn = ip(v, v);
    if (nn == 0) fail(ErrorKind::DependentInput, "vector " + std::to_string(i) + " lies in the span of its predecessors");
    out.basis.push_back(std::move(v));
    out.sq_norms.push_back(nn);
  }
  return out;
}

// [{"coeff": "p/q", "x": [...], "y": [...]}, ...]
std::string polynomial_to_json(const RationalPolynomial& p);
RationalPolynomial polynomial_from_json(const std::string& text, int nx, int ny);

std::string to_string(const RationalPolynomial& p);

}  // namespace grushin
