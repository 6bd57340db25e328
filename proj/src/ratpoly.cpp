#include "grushin/ratpoly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include "json.hpp"
#include <sstream>

namespace grushin {

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(const std::string& s) {
  Rational r;
  std::string t;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
  if (t.empty()) fail(ErrorKind::ParseError, "empty rational");
  auto slash = t.find('/');
  auto digits = [](const std::string& u, bool allow_sign) {
    if (u.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (u[0] == '-' || u[0] == '+')) i = 1;
    if (i == u.size()) return false;
    for (; i < u.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(u[i]))) return false;
    return true;
  };
  std::string num = t.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
  if (!digits(num, true) || !digits(den, false)) fail(ErrorKind::ParseError, "malformed rational '" + s + "'");
  if (num[0] == '+') num = num.substr(1);
  Integer d(den);
  if (d == 0) fail(ErrorKind::ParseError, "zero denominator in '" + s + "'");
  r = Rational(Integer(num), d);
  r.canonicalize();
  return r;
}

bool grlex_before(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  for (int i = 0; i < kMaxVars; ++i)
    if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
  return false;
}

Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) {
    int s = a.e[i] + b.e[i];
    if (s > 255) fail(ErrorKind::ParameterOutOfRange, "exponent overflow");
    r.e[i] = static_cast<std::uint8_t>(s);
  }
  return r;
}

namespace {

template <class C>
bool is_zero_coeff(const C& c) {
  return sgn(c) == 0;
}

template <class C>
std::vector<typename Polynomial<C>::Term> merge(const std::vector<typename Polynomial<C>::Term>& a,
                                                const std::vector<typename Polynomial<C>::Term>& b, bool subtract) {
  std::vector<typename Polynomial<C>::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && grlex_before(a[i].first, b[j].first))) {
      out.push_back(a[i++]);
    } else if (i == a.size() || grlex_before(b[j].first, a[i].first)) {
      out.emplace_back(b[j].first, subtract ? C(-b[j].second) : b[j].second);
      ++j;
    } else {
      C c = subtract ? C(a[i].second - b[j].second) : C(a[i].second + b[j].second);
      if (!is_zero_coeff(c)) out.emplace_back(a[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return out;
}

void check_shape(int nx1, int ny1, int nx2, int ny2) {
  if (nx1 != nx2 || ny1 != ny2) fail(ErrorKind::ParameterOutOfRange, "polynomial variable counts differ");
}

}  // namespace

template <class C>
Polynomial<C> Polynomial<C>::constant(int nx, int ny, const C& c) {
  Polynomial p(nx, ny);
  if (!is_zero_coeff(c)) p.terms_.emplace_back(Monomial{}, c);
  return p;
}

template <class C>
Polynomial<C> Polynomial<C>::variable(int nx, int ny, int slot) {
  Monomial mono;
  mono.e[slot] = 1;
  return monomial(nx, ny, mono, C(1));
}

template <class C>
Polynomial<C> Polynomial<C>::monomial(int nx, int ny, const Monomial& mono, const C& c) {
  Polynomial p(nx, ny);
  if (!is_zero_coeff(c)) p.terms_.emplace_back(mono, c);
  return p;
}

template <class C>
Polynomial<C> Polynomial<C>::from_terms(int nx, int ny, std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return grlex_before(a.first, b.first); });
  Polynomial p(nx, ny);
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first) {
      p.terms_.back().second += t.second;
    } else {
      if (!p.terms_.empty() && is_zero_coeff(p.terms_.back().second)) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && is_zero_coeff(p.terms_.back().second)) p.terms_.pop_back();
  return p;
}

template <class C>
Polynomial<C> PolyBuilder<C>::build() {
  std::vector<typename Polynomial<C>::Term> terms;
  terms.reserve(acc_.size());
  for (auto& [mono, c] : acc_)
    if (!is_zero_coeff(c)) terms.emplace_back(mono, std::move(c));
  acc_.clear();
  return Polynomial<C>::from_terms(nx_, ny_, std::move(terms));
}

template <class C>
Polynomial<C> Polynomial<C>::operator+(const Polynomial& o) const {
  check_shape(nx_, ny_, o.nx_, o.ny_);
  Polynomial r(nx_, ny_);
  r.terms_ = merge<C>(terms_, o.terms_, false);
  return r;
}

template <class C>
Polynomial<C> Polynomial<C>::operator-(const Polynomial& o) const {
  check_shape(nx_, ny_, o.nx_, o.ny_);
  Polynomial r(nx_, ny_);
  r.terms_ = merge<C>(terms_, o.terms_, true);
  return r;
}

template <class C>
Polynomial<C> Polynomial<C>::operator-() const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

template <class C>
Polynomial<C> Polynomial<C>::operator*(const Polynomial& o) const {
  check_shape(nx_, ny_, o.nx_, o.ny_);
  if (is_zero() || o.is_zero()) return Polynomial(nx_, ny_);
  if (o.size() == 1 && o.terms_[0].first == Monomial{}) return *this * o.terms_[0].second;
  PolyBuilder<C> b(nx_, ny_);
  b.reserve(terms_.size() * o.terms_.size());
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) b.add_product(monomial_product(ma, mb), ca, cb);
  return b.build();
}

template <class C>
Polynomial<C> Polynomial<C>::operator*(const C& c) const {
  if (is_zero_coeff(c)) return Polynomial(nx_, ny_);
  Polynomial r = *this;
  for (auto& t : r.terms_) t.second *= c;
  return r;
}

template <class C>
Polynomial<C> Polynomial<C>::derivative(int slot) const {
  std::vector<Term> out;
  for (const auto& [mono, c] : terms_) {
    int e = mono.e[slot];
    if (e == 0) continue;
    Monomial d = mono;
    d.e[slot] = static_cast<std::uint8_t>(e - 1);
    out.emplace_back(d, C(c * e));
  }
  return from_terms(nx_, ny_, std::move(out));
}

template <class C>
Polynomial<C> Polynomial<C>::pow(int e) const {
  Polynomial r = constant(nx_, ny_, C(1));
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

template <class C>
C Polynomial<C>::coefficient(const Monomial& mono) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), mono,
                             [](const Term& t, const Monomial& m) { return grlex_before(t.first, m); });
  if (it != terms_.end() && it->first == mono) return it->second;
  return C(0);
}

template <class C>
double Polynomial<C>::evaluate(const std::vector<double>& point) const {
  double s = 0;
  for (const auto& [mono, c] : terms_) {
    double v = c.get_d();
    for (int i = 0; i < nvars(); ++i)
      if (mono.e[i]) v *= std::pow(point[i], mono.e[i]);
    s += v;
  }
  return s;
}

template class Polynomial<Rational>;
template class Polynomial<Integer>;
template class PolyBuilder<Rational>;
template class PolyBuilder<Integer>;

CompiledPolynomial::CompiledPolynomial(const RationalPolynomial& p) : nvars_(p.nvars()) {
  for (const auto& [mono, c] : p.terms()) {
    coeffs_.push_back(c.get_d());
    for (int i = 0; i < nvars_; ++i) {
      exps_.push_back(mono.e[i]);
      maxdeg_ = std::max<int>(maxdeg_, mono.e[i]);
    }
  }
}

double CompiledPolynomial::operator()(const double* point) const {
  if (coeffs_.empty()) return 0.0;
  const int stride = maxdeg_ + 1;
  double pw[kMaxVars * 64];
  std::vector<double> big;
  double* table = pw;
  if (nvars_ * stride > kMaxVars * 64) {
    big.resize(static_cast<std::size_t>(nvars_) * stride);
    table = big.data();
  }
  for (int v = 0; v < nvars_; ++v) {
    double* row = table + v * stride;
    row[0] = 1.0;
    for (int e = 1; e <= maxdeg_; ++e) row[e] = row[e - 1] * point[v];
  }
  double s = 0;
  const std::uint8_t* ex = exps_.data();
  for (double c : coeffs_) {
    double t = c;
    for (int v = 0; v < nvars_; ++v, ++ex) t *= table[v * stride + *ex];
    s += t;
  }
  return s;
}

IntPolynomial primitive_part(const RationalPolynomial& p) {
  if (p.is_zero()) return IntPolynomial(p.nx(), p.ny());
  Integer l = 1, g = 0;
  for (const auto& [mono, c] : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  std::vector<IntPolynomial::Term> terms;
  terms.reserve(p.size());
  for (const auto& [mono, c] : p.terms()) {
    Integer v = c.get_num() * (l / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    terms.emplace_back(mono, std::move(v));
  }
  bool negate = sgn(terms.front().second) < 0;
  for (auto& t : terms) {
    mpz_divexact(t.second.get_mpz_t(), t.second.get_mpz_t(), g.get_mpz_t());
    if (negate) t.second = -t.second;
  }
  return IntPolynomial::from_terms(p.nx(), p.ny(), std::move(terms));
}

RationalPolynomial to_rational(const IntPolynomial& p) {
  std::vector<RationalPolynomial::Term> terms;
  terms.reserve(p.size());
  for (const auto& [mono, c] : p.terms()) terms.emplace_back(mono, Rational(c));
  return RationalPolynomial::from_terms(p.nx(), p.ny(), std::move(terms));
}

int delta_degree_of(const Monomial& mono, const GrushinConfig& cfg) {
  int d = 0;
  for (int i = 0; i < cfg.n; ++i) d += mono.e[i];
  for (int j = 0; j < cfg.m; ++j) d += cfg.yweight() * mono.e[cfg.n + j];
  return d;
}

int delta_degree(const RationalPolynomial& p, const GrushinConfig& cfg) {
  if (p.is_zero()) fail(ErrorKind::ZeroPolynomial, "delta_degree of the zero polynomial");
  int k = delta_degree_of(p.terms().front().first, cfg);
  for (const auto& t : p.terms())
    if (delta_degree_of(t.first, cfg) != k) fail(ErrorKind::MixedDegree, "monomials of differing delta-degree");
  return k;
}

namespace {

// Multinomial expansion of |x|^{2a}: monomials with even exponents summing to 2a.
struct NormPowerTerm {
  Monomial mono;
  Integer coeff;
};

void norm_power_rec(int nx, int slot, int left, Monomial& cur, Integer coeff, std::vector<NormPowerTerm>& out) {
  if (slot == nx - 1) {
    cur.e[slot] = static_cast<std::uint8_t>(2 * left);
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), left);
    out.push_back({cur, coeff / f});
    cur.e[slot] = 0;
    return;
  }
  for (int c = 0; c <= left; ++c) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), c);
    cur.e[slot] = static_cast<std::uint8_t>(2 * c);
    norm_power_rec(nx, slot + 1, left - c, cur, coeff / f, out);
  }
  cur.e[slot] = 0;
}

// Terms of |x|^{2a} over the first nx slots, exact multinomial coefficients.
std::vector<NormPowerTerm> norm_power_terms(int nx, int a) {
  std::vector<NormPowerTerm> out;
  if (nx == 0) return out;
  Integer af;
  mpz_fac_ui(af.get_mpz_t(), a);
  Monomial cur;
  norm_power_rec(nx, 0, a, cur, af, out);
  return out;
}

}  // namespace

RationalPolynomial block_norm_power(int nx, int ny, bool x, int e) {
  int nb = x ? nx : ny;
  int off = x ? 0 : nx;
  std::vector<RationalPolynomial::Term> terms;
  for (auto& t : norm_power_terms(nb, e)) {
    Monomial mono;
    for (int i = 0; i < nb; ++i) mono.e[off + i] = t.mono.e[i];
    terms.emplace_back(mono, Rational(t.coeff));
  }
  return RationalPolynomial::from_terms(nx, ny, std::move(terms));
}

template <class C>
Polynomial<C> apply_grushin(const Polynomial<C>& p, const GrushinConfig& cfg) {
  const int n = cfg.n, m = cfg.m;
  if (p.nx() != n || p.ny() != m) fail(ErrorKind::ParameterOutOfRange, "polynomial shape does not match config");
  auto xpow = norm_power_terms(n, cfg.alpha);
  PolyBuilder<C> b(n, m);
  b.reserve(p.size() * (n + m * xpow.size()));
  C tmp;
  for (const auto& [mono, c] : p.terms()) {
    for (int i = 0; i < n; ++i) {
      int a = mono.e[i];
      if (a < 2) continue;
      Monomial d = mono;
      d.e[i] = static_cast<std::uint8_t>(a - 2);
      tmp = c * (a * (a - 1));
      b.add(d, tmp);
    }
    for (int j = 0; j < m; ++j) {
      int e = mono.e[n + j];
      if (e < 2) continue;
      Monomial d = mono;
      d.e[n + j] = static_cast<std::uint8_t>(e - 2);
      C base = c * (e * (e - 1));
      for (const auto& t : xpow) {
        tmp = base * t.coeff;
        b.add(monomial_product(d, t.mono), tmp);
      }
    }
  }
  return b.build();
}

template RationalPolynomial apply_grushin(const RationalPolynomial&, const GrushinConfig&);
template IntPolynomial apply_grushin(const IntPolynomial&, const GrushinConfig&);

RationalPolynomial apply_euler(const RationalPolynomial& p, const GrushinConfig& cfg) {
  std::vector<RationalPolynomial::Term> out;
  for (const auto& [mono, c] : p.terms()) {
    int d = delta_degree_of(mono, cfg);
    if (d) out.emplace_back(mono, Rational(c * d));
  }
  return RationalPolynomial::from_terms(p.nx(), p.ny(), std::move(out));
}

RationalPolynomial laplace_block(const RationalPolynomial& p, bool x) {
  int off = x ? 0 : p.nx();
  int nb = x ? p.nx() : p.ny();
  std::vector<RationalPolynomial::Term> out;
  for (const auto& [mono, c] : p.terms())
    for (int i = 0; i < nb; ++i) {
      int e = mono.e[off + i];
      if (e < 2) continue;
      Monomial d = mono;
      d.e[off + i] = static_cast<std::uint8_t>(e - 2);
      out.emplace_back(d, Rational(c * (e * (e - 1))));
    }
  return RationalPolynomial::from_terms(p.nx(), p.ny(), std::move(out));
}

std::vector<Monomial> enumerate_monomials(const GrushinConfig& cfg, int k) {
  std::vector<Monomial> out;
  if (k < 0) return out;
  const int n = cfg.n, m = cfg.m, w = cfg.yweight();
  Monomial cur;
  // Distribute 'left' units over slots starting at 'slot'; y-slots cost w each.
  std::function<void(int, int)> rec = [&](int slot, int left) {
    if (slot == n + m) {
      if (left == 0) out.push_back(cur);
      return;
    }
    int cost = slot < n ? 1 : w;
    for (int e = left / cost; e >= 0; --e) {
      cur.e[slot] = static_cast<std::uint8_t>(e);
      rec(slot + 1, left - e * cost);
    }
    cur.e[slot] = 0;
  };
  rec(0, k);
  std::sort(out.begin(), out.end(), grlex_before);
  return out;
}

RationalPolynomial laplace_preimage_x(const RationalPolynomial& h) {
  const int nx = h.nx(), ny = h.ny();
  RationalPolynomial result(nx, ny);
  // Split by x-degree; each piece is handled by the telescoping ansatz
  // X = sum_i c_i |x|^{2i+2} Delta^i h with c_i kappa_i + c_{i-1} = 0.
  std::map<int, std::vector<RationalPolynomial::Term>> pieces;
  for (const auto& t : h.terms()) {
    int d = 0;
    for (int i = 0; i < nx; ++i) d += t.first.e[i];
    pieces[d].push_back(t);
  }
  RationalPolynomial r2 = block_norm_power(nx, ny, true, 1);
  for (auto& [d, terms] : pieces) {
    RationalPolynomial q = RationalPolynomial::from_terms(nx, ny, terms);
    RationalPolynomial rpow = r2;
    Rational c = 1;
    for (int i = 0; !q.is_zero(); ++i) {
      Rational kappa = Rational((2 * i + 2) * (2 * d - 2 * i + nx));
      c = (i == 0) ? Rational(1) / kappa : Rational(-c / kappa);
      result += rpow * q * c;
      q = laplace_block(q, true);
      rpow = rpow * r2;
    }
  }
  return result;
}

RationalPolynomial grushin_preimage(const RationalPolynomial& f, const GrushinConfig& cfg) {
  const int n = cfg.n, m = cfg.m;
  if (f.nx() != n || f.ny() != m) fail(ErrorKind::ParameterOutOfRange, "polynomial shape does not match config");
  RationalPolynomial g(n, m);
  RationalPolynomial weight = block_norm_power(n, m, true, cfg.alpha);
  // Group terms by their y-monomial: f = sum_Y X_Y(x) Y(y).
  std::map<std::vector<int>, std::pair<Monomial, std::vector<RationalPolynomial::Term>>> groups;
  for (const auto& [mono, c] : f.terms()) {
    Monomial ym, xm;
    std::vector<int> key(m);
    for (int j = 0; j < m; ++j) {
      ym.e[n + j] = mono.e[n + j];
      key[j] = mono.e[n + j];
    }
    for (int i = 0; i < n; ++i) xm.e[i] = mono.e[i];
    auto& slot = groups[key];
    slot.first = ym;
    slot.second.emplace_back(xm, c);
  }
  for (auto& [key, grp] : groups) {
    RationalPolynomial X = RationalPolynomial::from_terms(n, m, grp.second);
    RationalPolynomial D = RationalPolynomial::monomial(n, m, grp.first, Rational(1));
    RationalPolynomial Xi = laplace_preimage_x(X);
    int sign = 1;
    while (true) {
      g += (Xi * D) * Rational(sign);
      D = laplace_block(D, false);
      if (D.is_zero()) break;
      Xi = laplace_preimage_x(weight * Xi);
      sign = -sign;
    }
  }
  return g;
}

namespace {

int parity_mask(const Monomial& mono, int nv) {
  int mask = 0;
  for (int i = 0; i < nv; ++i)
    if (mono.e[i] & 1) mask |= 1 << i;
  return mask;
}

struct ParityBlock {
  std::vector<Monomial> cols;
  std::vector<Monomial> rows;
};

std::map<int, ParityBlock> parity_blocks(const GrushinConfig& cfg, int k) {
  std::map<int, ParityBlock> blocks;
  int nv = cfg.n + cfg.m;
  for (const auto& mono : enumerate_monomials(cfg, k)) blocks[parity_mask(mono, nv)].cols.push_back(mono);
  for (const auto& mono : enumerate_monomials(cfg, k - 2)) blocks[parity_mask(mono, nv)].rows.push_back(mono);
  return blocks;
}

using IntMatrix = std::vector<std::vector<Integer>>;

IntMatrix block_matrix(const GrushinConfig& cfg, const ParityBlock& blk) {
  std::unordered_map<Monomial, std::size_t, MonomialHash> row_index;
  for (std::size_t r = 0; r < blk.rows.size(); ++r) row_index[blk.rows[r]] = r;
  IntMatrix a(blk.rows.size(), std::vector<Integer>(blk.cols.size()));
  for (std::size_t c = 0; c < blk.cols.size(); ++c) {
    IntPolynomial img = apply_grushin(IntPolynomial::monomial(cfg.n, cfg.m, blk.cols[c], Integer(1)), cfg);
    for (const auto& [mono, v] : img.terms()) a[row_index.at(mono)][c] = v;
  }
  return a;
}

// Fraction-free Gauss-Jordan; returns pivot columns, leaves all pivots equal.
std::vector<std::size_t> fraction_free_rref(IntMatrix& a, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  Integer prev = 1, t;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    const Integer piv = a[r][c];
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r) continue;
      const Integer f = a[i][c];
      for (std::size_t j = 0; j < ncols; ++j) {
        t = piv * a[i][j];
        if (f != 0) t -= f * a[r][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = piv;
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t modular_rank(const IntMatrix& a, std::size_t ncols) {
  using u64 = std::uint64_t;
  using u128 = unsigned __int128;
  const u64 P = (u64(1) << 61) - 1;
  auto mulmod = [&](u64 x, u64 y) {
    u128 z = (u128)x * y;
    u64 lo = (u64)(z & P), hi = (u64)(z >> 61);
    u64 s = lo + hi;
    return s >= P ? s - P : s;
  };
  auto powmod = [&](u64 b, u64 e) {
    u64 r = 1;
    while (e) {
      if (e & 1) r = mulmod(r, b);
      b = mulmod(b, b);
      e >>= 1;
    }
    return r;
  };
  std::vector<std::vector<u64>> m(a.size(), std::vector<u64>(ncols));
  Integer PP;
  mpz_set_ui(PP.get_mpz_t(), 0);
  mpz_ui_pow_ui(PP.get_mpz_t(), 2, 61);
  PP -= 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < ncols; ++j) {
      Integer v = a[i][j] % PP;
      if (v < 0) v += PP;
      m[i][j] = mpz_get_ui(v.get_mpz_t());
    }
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    u64 inv = powmod(m[r][c], P - 2);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      u64 f = mulmod(m[i][c], inv);
      for (std::size_t j = c; j < ncols; ++j) {
        u64 s = mulmod(f, m[r][j]);
        m[i][j] = m[i][j] >= s ? m[i][j] - s : m[i][j] + P - s;
      }
    }
    ++r;
  }
  return r;
}

}  // namespace

std::vector<RationalPolynomial> nullspace_harmonics(const GrushinConfig& cfg, int k) {
  std::vector<RationalPolynomial> out;
  if (k < 0) return out;
  for (auto& [mask, blk] : parity_blocks(cfg, k)) {
    if (blk.cols.empty()) continue;
    IntMatrix a = block_matrix(cfg, blk);
    auto pivots = fraction_free_rref(a, blk.cols.size());
    Integer d = pivots.empty() ? Integer(1) : a[0][pivots[0]];
    std::vector<bool> is_pivot(blk.cols.size(), false);
    for (auto c : pivots) is_pivot[c] = true;
    for (std::size_t f = 0; f < blk.cols.size(); ++f) {
      if (is_pivot[f]) continue;
      std::vector<RationalPolynomial::Term> terms;
      terms.emplace_back(blk.cols[f], Rational(d));
      for (std::size_t i = 0; i < pivots.size(); ++i)
        if (a[i][f] != 0) terms.emplace_back(blk.cols[pivots[i]], Rational(-a[i][f]));
      out.push_back(to_rational(primitive_part(RationalPolynomial::from_terms(cfg.n, cfg.m, std::move(terms)))));
    }
  }
  return out;
}

std::size_t grushin_rank(const GrushinConfig& cfg, int k) {
  std::size_t total = 0;
  if (k < 2) return 0;
  for (auto& [mask, blk] : parity_blocks(cfg, k)) {
    if (blk.rows.empty() || blk.cols.empty()) continue;
    IntMatrix a = block_matrix(cfg, blk);
    std::size_t r = modular_rank(a, blk.cols.size());
    if (r < blk.rows.size()) r = fraction_free_rref(a, blk.cols.size()).size();
    total += r;
  }
  return total;
}

std::size_t polynomial_rank(const std::vector<RationalPolynomial>& polys) {
  if (polys.empty()) return 0;
  std::unordered_map<Monomial, std::size_t, MonomialHash> col;
  for (const auto& p : polys)
    for (const auto& t : p.terms()) col.try_emplace(t.first, col.size());
  IntMatrix a;
  for (const auto& p : polys) {
    std::vector<Integer> row(col.size());
    const IntPolynomial ip = primitive_part(p);
    for (const auto& [mono, c] : ip.terms()) row[col.at(mono)] = c;
    a.push_back(std::move(row));
  }
  return fraction_free_rref(a, col.size()).size();
}

std::string polynomial_to_json(const RationalPolynomial& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [mono, c] : p.terms()) {
    nlohmann::json xs = nlohmann::json::array(), ys = nlohmann::json::array();
    for (int i = 0; i < p.nx(); ++i) xs.push_back(mono.e[i]);
    for (int j = 0; j < p.ny(); ++j) ys.push_back(mono.e[p.nx() + j]);
    arr.push_back({{"coeff", to_string(c)}, {"x", xs}, {"y", ys}});
  }
  return arr.dump();
}

RationalPolynomial polynomial_from_json(const std::string& text, int nx, int ny) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, e.what());
  }
  if (!arr.is_array()) fail(ErrorKind::ParseError, "polynomial JSON must be an array");
  std::vector<RationalPolynomial::Term> terms;
  for (const auto& t : arr) {
    if (!t.is_object() || !t.contains("coeff") || !t.contains("x") || !t.contains("y"))
      fail(ErrorKind::ParseError, "term needs coeff, x, y");
    if (!t["coeff"].is_string()) fail(ErrorKind::ParseError, "coeff must be a \"p/q\" string");
    Rational c = parse_rational(t["coeff"].get<std::string>());
    if (c == 0) fail(ErrorKind::ParseError, "zero coefficient");
    const auto& xs = t["x"];
    const auto& ys = t["y"];
    if (!xs.is_array() || !ys.is_array() || static_cast<int>(xs.size()) != nx || static_cast<int>(ys.size()) != ny)
      fail(ErrorKind::ParseError, "exponent length mismatch");
    Monomial mono;
    int slot = 0;
    for (const auto* v : {&xs, &ys})
      for (const auto& e : *v) {
        if (!e.is_number_integer() || e.get<int>() < 0 || e.get<int>() > 255)
          fail(ErrorKind::ParseError, "exponents must be integers in [0, 255]");
        mono.e[slot++] = static_cast<std::uint8_t>(e.get<int>());
      }
    terms.emplace_back(mono, c);
  }
  return RationalPolynomial::from_terms(nx, ny, std::move(terms));
}

std::string to_string(const RationalPolynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [mono, c] : p.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << to_string(c) << ")";
    for (int i = 0; i < p.nvars(); ++i) {
      if (!mono.e[i]) continue;
      os << "*" << (i < p.nx() ? "x" : "y") << (i < p.nx() ? i + 1 : i - p.nx() + 1);
      if (mono.e[i] > 1) os << "^" << int(mono.e[i]);
    }
  }
  return os.str();
}

}  // namespace grushin
