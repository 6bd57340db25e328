#include "grushin/quadrature.hpp"

#include <math.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <tuple>

#include "grushin/specfun.hpp"

namespace grushin {

double jacobi_weight_mass(double A, double B) {
  int s;
  return std::exp((A + B + 1) * std::log(2.0) + ::lgamma_r(A + 1, &s) + ::lgamma_r(B + 1, &s) -
                  ::lgamma_r(A + B + 2, &s));
}

EigenResult sym_eigen(const std::vector<std::vector<double>>& matrix, bool want_vectors) {
  const std::size_t n = matrix.size();
  double fro = 0;
  for (const auto& row : matrix) {
    if (row.size() != n) fail(ErrorKind::NotSymmetric, "matrix is not square");
    for (double v : row) fro += v * v;
  }
  fro = std::sqrt(fro);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::fabs(matrix[i][j] - matrix[j][i]) > 1e-12 * std::max(1.0, fro))
        fail(ErrorKind::NotSymmetric, "asymmetry above 1e-12");
  std::vector<std::vector<double>> a = matrix;
  std::vector<std::vector<double>> v;
  if (want_vectors) {
    v.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  }
  auto off = [&] {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2 * a[i][j] * a[i][j];
    return std::sqrt(s);
  };
  const double target = 1e-15 * std::max(fro, 1e-300);
  for (int sweep = 0; sweep < 100 && off() > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a[p][q];
        if (std::fabs(apq) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        if (want_vectors)
          for (std::size_t k = 0; k < n; ++k) {
            double vkp = v[k][p], vkq = v[k][q];
            v[k][p] = c * vkp - s * vkq;
            v[k][q] = s * vkp + c * vkq;
          }
      }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i][i] < a[j][j]; });
  EigenResult r;
  for (auto i : order) {
    r.values.push_back(a[i][i]);
    if (want_vectors) {
      std::vector<double> col(n);
      for (std::size_t k = 0; k < n; ++k) col[k] = v[k][i];
      r.vectors.push_back(std::move(col));
    }
  }
  return r;
}

namespace {

QuadRule build_rule(double A, double B, int n) {
  QuadRule rule{A, B, {}, {}};
  const double mu0 = jacobi_weight_mass(A, B);
  if (n == 1) {
    rule.nodes = {(B - A) / (A + B + 2)};
    rule.weights = {mu0};
    return rule;
  }
  // Symmetric Jacobi matrix of the monic recurrence.
  std::vector<std::vector<double>> J(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    double s = 2 * i + A + B;
    J[i][i] = (i == 0) ? (B - A) / (A + B + 2) : (B * B - A * A) / (s * (s + 2));
    if (i + 1 < n) {
      int k = i + 1;
      double sk = 2 * k + A + B;
      double b2 = (k == 1) ? 4 * (1 + A) * (1 + B) / ((2 + A + B) * (2 + A + B) * (3 + A + B))
                           : 4 * k * (k + A) * (k + B) * (k + A + B) / (sk * sk * (sk + 1) * (sk - 1));
      J[i][i + 1] = J[i + 1][i] = std::sqrt(b2);
    }
  }
  EigenResult eig = sym_eigen(J, true);
  rule.nodes = eig.values;
  rule.weights.resize(n);
  // Newton refinement on P_n, then the derivative form of the Christoffel weights.
  int s;
  double logc = (A + B + 1) * std::log(2.0) + ::lgamma_r(n + A + 1, &s) + ::lgamma_r(n + B + 1, &s) -
                ::lgamma_r(n + A + B + 1, &s) - ::lgamma_r(n + 1.0, &s);
  for (int i = 0; i < n; ++i) {
    double x = rule.nodes[i];
    for (int it = 0; it < 3; ++it) {
      auto [p, dp] = jacobi_eval_with_derivative(n, {A, B}, x);
      if (dp == 0) break;
      double step = p / dp;
      if (!std::isfinite(step) || std::fabs(step) > 1e-6) break;
      x -= step;
    }
    rule.nodes[i] = x;
    double dp = jacobi_eval_with_derivative(n, {A, B}, x).second;
    double w = std::exp(logc) / ((1 - x * x) * dp * dp);
    double w_eig = mu0 * eig.vectors[i][0] * eig.vectors[i][0];
    rule.weights[i] = std::isfinite(w) && w > 0 ? w : w_eig;
  }
  return rule;
}

struct RuleCache {
  std::shared_mutex mutex;
  std::map<std::tuple<double, double, int>, std::unique_ptr<QuadRule>> rules;
};

RuleCache& rule_cache() {
  static RuleCache cache;
  return cache;
}

}  // namespace

const QuadRule& gauss_jacobi_rule(double A, double B, int npoints) {
  if (!(A > -1) || !(B > -1)) fail(ErrorKind::ParameterOutOfRange, "Gauss-Jacobi needs A, B > -1");
  if (npoints < 1) fail(ErrorKind::ParameterOutOfRange, "npoints must be >= 1");
  auto& cache = rule_cache();
  auto key = std::make_tuple(A, B, npoints);
  {
    std::shared_lock lock(cache.mutex);
    auto it = cache.rules.find(key);
    if (it != cache.rules.end()) return *it->second;
  }
  auto rule = std::make_unique<QuadRule>(build_rule(A, B, npoints));
  std::unique_lock lock(cache.mutex);
  auto [it, inserted] = cache.rules.try_emplace(key, std::move(rule));
  return *it->second;
}

double sphere_area(int n) {
  int s;
  return 2 * std::exp(0.5 * n * std::log(M_PI) - ::lgamma_r(0.5 * n, &s));
}

namespace {

const Integer& double_factorial_odd(int q) {
  // (2q-1)!!
  static std::mutex mu;
  static std::vector<Integer> table{Integer(1)};
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<int>(table.size()) <= q) {
    int k = static_cast<int>(table.size());
    table.push_back(table.back() * (2 * k - 1));
  }
  return table[q];
}

Integer sphere_denominator(int n, int Q) {
  Integer d = 1;
  for (int i = 0; i < Q; ++i) d *= n + 2 * i;
  return d;
}

}  // namespace

Rational sphere_monomial_integral(int n, const std::vector<int>& powers) {
  if (static_cast<int>(powers.size()) != n) fail(ErrorKind::ParameterOutOfRange, "powers length must equal n");
  int Q = 0;
  Integer num = 1;
  for (int p : powers) {
    if (p < 0) fail(ErrorKind::ParameterOutOfRange, "negative power");
    if (p % 2) return Rational(0);
    Q += p / 2;
    num *= double_factorial_odd(p / 2);
  }
  Rational r(num, sphere_denominator(n, Q));
  r.canonicalize();
  return r;
}

Rational sphere_product_integral(const RationalPolynomial& P, const RationalPolynomial& Q) {
  if (P.nvars() != Q.nvars()) fail(ErrorKind::ParameterOutOfRange, "sphere product: variable counts differ");
  if (P.is_zero() || Q.is_zero()) return Rational(0);
  const int n = P.nvars();
  IntPolynomial ip = primitive_part(P), iq = primitive_part(Q);
  Rational scale = (P.terms().front().second / Rational(ip.terms().front().second)) *
                   (Q.terms().front().second / Rational(iq.terms().front().second));
  auto mask = [n](const Monomial& mo) {
    int k = 0;
    for (int i = 0; i < n; ++i)
      if (mo.e[i] & 1) k |= 1 << i;
    return k;
  };
  std::map<int, std::vector<const IntPolynomial::Term*>> qclass;
  for (const auto& t : iq.terms()) qclass[mask(t.first)].push_back(&t);
  std::map<int, Integer> by_degree;  // half total degree -> numerator sum
  Integer prod;
  for (const auto& ta : ip.terms()) {
    auto it = qclass.find(mask(ta.first));
    if (it == qclass.end()) continue;
    for (const auto* tb : it->second) {
      int Qh = 0;
      prod = ta.second * tb->second;
      for (int i = 0; i < n; ++i) {
        int e = (ta.first.e[i] + tb->first.e[i]) / 2;
        Qh += e;
        if (e > 1) prod *= double_factorial_odd(e);
      }
      by_degree[Qh] += prod;
    }
  }
  Rational total = 0;
  for (auto& [Qh, num] : by_degree) {
    if (num == 0) continue;
    Rational term(num, sphere_denominator(n, Qh));
    term.canonicalize();
    total += term;
  }
  return total * scale;
}

namespace {

SphereRule build_sphere_rule(int n, int order) {
  SphereRule r;
  r.dim = n;
  if (n == 1) {
    r.points = {{1.0}, {-1.0}};
    r.weights = {1.0, 1.0};
    return r;
  }
  if (n == 2) {
    int N = order + 1;
    for (int k = 0; k < N; ++k) {
      double th = 2 * M_PI * (k + 0.5) / N;
      r.points.push_back({std::cos(th), std::sin(th)});
      r.weights.push_back(2 * M_PI / N);
    }
    return r;
  }
  const SphereRule& sub = sphere_rule(n - 1, order);
  double A = 0.5 * (n - 3);
  const QuadRule& tr = gauss_jacobi_rule(A, A, order / 2 + 1);
  for (std::size_t i = 0; i < tr.nodes.size(); ++i) {
    double t = tr.nodes[i], c = std::sqrt(std::max(0.0, 1 - t * t));
    for (std::size_t j = 0; j < sub.points.size(); ++j) {
      std::vector<double> p(n);
      for (int d = 0; d < n - 1; ++d) p[d] = c * sub.points[j][d];
      p[n - 1] = t;
      r.points.push_back(std::move(p));
      r.weights.push_back(tr.weights[i] * sub.weights[j]);
    }
  }
  return r;
}

}  // namespace

const SphereRule& sphere_rule(int n, int order) {
  if (n < 1 || order < 0) fail(ErrorKind::ParameterOutOfRange, "sphere_rule needs n >= 1, order >= 0");
  static std::shared_mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<SphereRule>> cache;
  auto key = std::make_pair(n, order);
  {
    std::shared_lock lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto rule = std::make_unique<SphereRule>(build_sphere_rule(n, order));
  std::unique_lock lock(mu);
  auto [it, inserted] = cache.try_emplace(key, std::move(rule));
  return *it->second;
}

AngularFactor AngularFactor::from(RationalPolynomial p) {
  AngularFactor f;
  auto exact = std::make_shared<const RationalPolynomial>(std::move(p));
  f.fast = std::make_shared<const CompiledPolynomial>(*exact);
  f.exact = std::move(exact);
  return f;
}

double OmegaFunction::operator()(const OmegaPoint& pt) const {
  const bool m1 = cfg.m == 1;
  const double t = m1 ? std::cos(pt.phi) : std::cos(2 * pt.phi);
  const double sn = std::sin(pt.phi), cs = std::cos(pt.phi);
  double total = 0;
  for (const auto& term : terms) {
    double v = term.coeff;
    if (term.sinPower != 0) v *= std::pow(sn, term.sinPower);
    if (term.cosPower != 0) v *= m1 ? std::pow(t, term.cosPower) : std::pow(cs, term.cosPower);
    if (term.profile) v *= term.profile(t);
    if (term.angular1) v *= (*term.angular1.fast)(pt.omega1.data());
    if (term.angular2) v *= (*term.angular2.fast)(pt.omega2.data());
    total += v;
  }
  return total;
}

OmegaFunction OmegaFunction::from_polynomial(const GrushinConfig& cfg, const RationalPolynomial& p) {
  const int n = cfg.n, m = cfg.m;
  if (p.nx() != n || p.ny() != m) fail(ErrorKind::ParameterOutOfRange, "polynomial shape does not match config");
  OmegaFunction f{cfg, {}};
  // Group by (x-degree, y-monomial): the x-part is then one angular factor on S^{n-1}.
  std::map<std::pair<int, std::vector<int>>, std::vector<RationalPolynomial::Term>> groups;
  for (const auto& [mono, c] : p.terms()) {
    int dx = 0;
    std::vector<int> yb(m);
    Monomial xm;
    for (int i = 0; i < n; ++i) {
      dx += mono.e[i];
      xm.e[i] = mono.e[i];
    }
    for (int j = 0; j < m; ++j) yb[j] = mono.e[n + j];
    groups[{dx, yb}].emplace_back(xm, c);
  }
  const double w = cfg.alpha + 1;
  for (auto& [key, terms] : groups) {
    int dy = 0;
    for (int e : key.second) dy += e;
    OmegaTerm t;
    t.coeff = std::pow(w, -dy);
    t.sinPower = key.first / w;
    t.cosPower = dy;
    t.angular1 = AngularFactor::from(RationalPolynomial::from_terms(n, 0, terms));
    if (m >= 2) {
      Monomial ym;
      for (int j = 0; j < m; ++j) ym.e[j] = static_cast<std::uint8_t>(key.second[j]);
      t.angular2 = AngularFactor::from(RationalPolynomial::monomial(m, 0, ym, Rational(1)));
    }
    f.terms.push_back(std::move(t));
  }
  return f;
}

OmegaFunction OmegaFunction::constant(const GrushinConfig& cfg, double c) {
  OmegaFunction f{cfg, {}};
  OmegaTerm t;
  t.coeff = c;
  f.terms.push_back(std::move(t));
  return f;
}

OmegaFunction& OmegaFunction::operator+=(const OmegaFunction& o) {
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  return *this;
}

OmegaFunction OmegaFunction::scaled(double c) const {
  OmegaFunction f = *this;
  for (auto& t : f.terms) t.coeff *= c;
  return f;
}

namespace {

double angular_pair(const AngularFactor& a, const AngularFactor& b, int dim) {
  if (!a && !b) return sphere_area(dim);
  RationalPolynomial one = RationalPolynomial::constant(dim, 0, Rational(1));
  const RationalPolynomial& pa = a ? *a.exact : one;
  const RationalPolynomial& pb = b ? *b.exact : one;
  return sphere_area(dim) * sphere_product_integral(pa, pb).get_d();
}

}  // namespace

double omega_inner_product(const OmegaFunction& f, const OmegaFunction& g, double psiShift, const GrushinConfig& cfg,
                           int resolution, double sinShift) {
  const int n = cfg.n, m = cfg.m;
  const double w = cfg.alpha + 1;
  const double base_sin = (n - 2) / w + 1 + psiShift * 2 * cfg.alpha / w + sinShift;
  double total = 0;
  for (const auto& a : f.terms)
    for (const auto& b : g.terms) {
      double ang = angular_pair(a.angular1, b.angular1, n);
      if (ang == 0) continue;
      if (m >= 2) {
        double ang2 = angular_pair(a.angular2, b.angular2, m);
        if (ang2 == 0) continue;
        ang *= ang2;
      }
      double S = a.sinPower + b.sinPower + base_sin;
      double A = (S - 1) / 2;
      int deg = a.profileDegree + b.profileDegree;
      double B, scale;
      int tpow = 0;
      if (m >= 2) {
        double C = a.cosPower + b.cosPower + m - 1;
        B = (C - 1) / 2;
        scale = std::pow(2.0, -A - B - 2);
      } else {
        B = A;
        tpow = a.cosPower + b.cosPower;
        deg += tpow;
        scale = 1.0;
      }
      if (!(A > -1) || !(B > -1)) fail(ErrorKind::NonIntegrableWeight, "combined weight exponent <= -1");
      int np = resolution > 0 ? std::max(resolution, deg / 2 + 1) : deg / 2 + 8;
      const QuadRule& rule = gauss_jacobi_rule(A, B, np);
      CompensatedSum s;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double t = rule.nodes[i];
        double v = rule.weights[i];
        if (a.profile) v *= a.profile(t);
        if (b.profile) v *= b.profile(t);
        if (tpow) v *= std::pow(t, tpow);
        s.add(v);
      }
      total += a.coeff * b.coeff * scale * s.value() * ang;
    }
  return total;
}

PhiRule omega_phi_rule(const GrushinConfig& cfg, int nphi) {
  const int n = cfg.n, m = cfg.m;
  const double w = cfg.alpha + 1;
  const double A0 = (n - 2) / (2 * w);
  PhiRule out;
  if (cfg.alpha == 0) {
    const double B0 = m >= 2 ? (m - 2) / 2.0 : A0;
    const QuadRule& rule = gauss_jacobi_rule(A0, B0, nphi);
    const double scale = m >= 2 ? std::pow(2.0, -A0 - B0 - 2) : 1.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = rule.nodes[i];
      out.phis.push_back(m >= 2 ? 0.5 * std::acos(t) : std::acos(t));
      out.weights.push_back(rule.weights[i] * scale);
    }
    return out;
  }
  const double half = std::numbers::pi / 2;
  const double sinPow = (n - 2) / w + 1;
  const QuadRule& gl = gauss_jacobi_rule(0, 0, nphi);
  // phi = half * v^w on (0, pi/2); for m = 1 the mirror image covers (pi/2, pi).
  for (int side = 0; side < (m >= 2 ? 1 : 2); ++side)
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double v = 0.5 * (gl.nodes[i] + 1);
      const double u = half * std::pow(v, w);
      const double jac = 0.5 * half * w * std::pow(v, w - 1);
      double wt = gl.weights[i] * jac * std::pow(std::sin(u), sinPow);
      if (m >= 2) wt *= std::pow(std::cos(u), m - 1);
      out.phis.push_back(side ? std::numbers::pi - u : u);
      out.weights.push_back(wt);
    }
  return out;
}

double omega_integrate(const GrushinConfig& cfg, const std::function<double(const OmegaPoint&)>& F, int nphi,
                       int sphereOrder) {
  const int n = cfg.n, m = cfg.m;
  const PhiRule rule = omega_phi_rule(cfg, nphi);
  const SphereRule& s1 = sphere_rule(n, sphereOrder);
  const SphereRule* s2 = m >= 2 ? &sphere_rule(m, sphereOrder) : nullptr;
  CompensatedSum total;
  OmegaPoint pt;
  for (std::size_t i = 0; i < rule.phis.size(); ++i) {
    pt.phi = rule.phis[i];
    for (std::size_t a = 0; a < s1.points.size(); ++a) {
      pt.omega1 = s1.points[a];
      if (s2) {
        for (std::size_t b = 0; b < s2->points.size(); ++b) {
          pt.omega2 = s2->points[b];
          total.add(rule.weights[i] * s1.weights[a] * s2->weights[b] * F(pt));
        }
      } else {
        pt.omega2.clear();
        total.add(rule.weights[i] * s1.weights[a] * F(pt));
      }
    }
  }
  return total.value();
}

double omega_phi_mass(const GrushinConfig& cfg) {
  const double w = cfg.alpha + 1;
  const double A0 = (cfg.n - 2) / (2 * w);
  if (cfg.m >= 2) {
    const double B0 = (cfg.m - 2) / 2.0;
    return std::pow(2.0, -A0 - B0 - 2) * jacobi_weight_mass(A0, B0);
  }
  return jacobi_weight_mass(A0, A0);
}

double omega_volume(const GrushinConfig& cfg) {
  double v = omega_phi_mass(cfg) * sphere_area(cfg.n);
  if (cfg.m >= 2) v *= sphere_area(cfg.m);
  return v;
}

}  // namespace grushin
