#include "grushin/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <tuple>

#include "grushin/specfun.hpp"

namespace grushin {

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

RationalPolynomial embed(const RationalPolynomial& p, int nx, int ny, int offset) {
  std::vector<RationalPolynomial::Term> terms;
  terms.reserve(p.size());
  for (const auto& [mono, c] : p.terms()) {
    Monomial e;
    for (int i = 0; i < p.nvars(); ++i) e.e[offset + i] = mono.e[i];
    terms.emplace_back(e, c);
  }
  return RationalPolynomial::from_terms(nx, ny, std::move(terms));
}

}  // namespace

double gauge_norm(const std::vector<double>& x, const std::vector<double>& y, const GrushinConfig& cfg) {
  const double w = cfg.alpha + 1;
  const double r1 = norm2(x), r2 = norm2(y);
  return std::pow(std::pow(r1, 2 * w) + w * w * r2 * r2, 1 / (2 * w));
}

PolarPoint polar_map(const std::vector<double>& x, const std::vector<double>& y, const GrushinConfig& cfg) {
  if (static_cast<int>(x.size()) != cfg.n || static_cast<int>(y.size()) != cfg.m)
    fail(ErrorKind::ParameterOutOfRange, "point shape does not match config");
  const double w = cfg.alpha + 1;
  const double r1 = norm2(x), r2 = norm2(y);
  if (r1 == 0 && r2 == 0) fail(ErrorKind::OriginUndefined, "polar map undefined at the origin");
  PolarPoint p;
  p.rho = gauge_norm(x, y, cfg);
  const double yy = cfg.m == 1 ? y[0] : r2;
  p.phi = std::atan2(std::pow(r1, w), w * yy);
  p.omega1.assign(cfg.n, 0.0);
  if (r1 > 0)
    for (int i = 0; i < cfg.n; ++i) p.omega1[i] = x[i] / r1;
  else
    p.omega1[cfg.n - 1] = 1.0;
  if (cfg.m >= 2) {
    p.omega2.assign(cfg.m, 0.0);
    if (r2 > 0)
      for (int j = 0; j < cfg.m; ++j) p.omega2[j] = y[j] / r2;
    else
      p.omega2[cfg.m - 1] = 1.0;
  }
  return p;
}

std::pair<std::vector<double>, std::vector<double>> polar_inverse(const PolarPoint& p, const GrushinConfig& cfg) {
  const double w = cfg.alpha + 1;
  const double r1 = p.rho * std::pow(std::sin(p.phi), 1 / w);
  const double yr = std::pow(p.rho, w) * std::cos(p.phi) / w;
  std::vector<double> x(cfg.n), y(cfg.m);
  for (int i = 0; i < cfg.n; ++i) x[i] = r1 * p.omega1[i];
  if (cfg.m == 1) y[0] = yr;
  else
    for (int j = 0; j < cfg.m; ++j) y[j] = yr * p.omega2[j];
  return {x, y};
}

double angle_psi(double phi, const GrushinConfig& cfg) {
  return std::pow(std::sin(phi), 2.0 * cfg.alpha / (cfg.alpha + 1));
}

Integer binomial(long top, long bottom) {
  if (bottom < 0 || top < 0 || top < bottom) return Integer(0);
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(top), static_cast<unsigned long>(bottom));
  return r;
}

Integer spherical_dimension(int n, int ell) {
  if (ell < 0) return Integer(0);
  return binomial(n + ell - 1, n - 1) - binomial(n + ell - 3, n - 1);
}

Shell make_shell(const GrushinConfig& cfg, int k, int ell, int j) {
  const int w = cfg.alpha + 1;
  Shell s;
  s.k = k;
  s.ell = ell;
  s.j = j;
  if (k < 0 || ell < 0 || j < 0 || ell > k || j > k) fail(ErrorKind::InadmissibleIndex, "indices out of range");
  if (cfg.m == 1) {
    if (j != 0 || (k - ell) % w != 0) fail(ErrorKind::InadmissibleIndex, "need j = 0 and ell = k mod (alpha+1)");
    s.ktilde = (k - ell) / w;
    s.lambda = (2.0 * ell + cfg.n - 2) / (2.0 * w) + 0.5;
    s.mu = (cfg.n - 2 + 2.0 * ell) / (2.0 * w);
    s.gamma = 0.5;
    s.b = gegenbauer_b(s.ktilde, s.lambda);
    return s;
  }
  const int rem = k - ell - j * w;
  if (rem < 0 || rem % (2 * w) != 0) fail(ErrorKind::InadmissibleIndex, "ktilde not a non-negative integer");
  s.ktilde = rem / (2 * w);
  s.mu = (cfg.n - 2 + 2.0 * ell) / (2.0 * w);
  s.gamma = j + cfg.m / 2.0;
  s.b = std::exp(-0.5 * log_norm_B(s.ktilde, {s.mu, s.gamma - 1}));
  return s;
}

std::vector<Shell> enumerate_shells(const GrushinConfig& cfg, int k) {
  std::vector<Shell> out;
  if (k < 0) return out;
  const int w = cfg.alpha + 1;
  for (int ell = 0; ell <= k; ++ell) {
    if (cfg.m == 1) {
      if ((k - ell) % w == 0) out.push_back(make_shell(cfg, k, ell, 0));
      continue;
    }
    for (int j = 0; j <= k; ++j) {
      int rem = k - ell - j * w;
      if (rem >= 0 && rem % (2 * w) == 0) out.push_back(make_shell(cfg, k, ell, j));
    }
  }
  return out;
}

std::vector<HarmonicIndex> enumerate_indices(const GrushinConfig& cfg, int k) {
  std::vector<HarmonicIndex> out;
  for (const auto& s : enumerate_shells(cfg, k)) {
    long dl = spherical_dimension(cfg.n, s.ell).get_si();
    long dj = cfg.m == 1 ? 1 : spherical_dimension(cfg.m, s.j).get_si();
    for (long p = 1; p <= dl; ++p)
      for (long q = 1; q <= dj; ++q)
        out.push_back({k, s.ell, s.j, static_cast<int>(p), static_cast<int>(q), s.ktilde, s.mu, s.gamma});
  }
  return out;
}

double shell_profile(const GrushinConfig& cfg, const Shell& s, double phi) {
  const double a = s.ell / (cfg.alpha + 1.0);
  const double sn = std::sin(phi), cs = std::cos(phi);
  double F = (a == 0 ? 1.0 : std::pow(sn, a));
  if (cfg.m == 1) return F * gegenbauer_eval(s.ktilde, s.lambda, cs);
  if (s.j) F *= std::pow(cs, s.j);
  return F * jacobi_eval(s.ktilde, {s.mu, s.gamma - 1}, std::cos(2 * phi));
}

ProfileJet shell_profile_jet(const GrushinConfig& cfg, const Shell& s, double phi) {
  const double a = s.ell / (cfg.alpha + 1.0);
  const double sn = std::sin(phi), cs = std::cos(phi);
  const int K = s.ktilde;
  ProfileJet jet;
  double F = (a == 0 ? 1.0 : std::pow(sn, a));
  double L1, L2;  // F'/F and (F'/F)'
  double G, G1, G2;
  if (cfg.m == 1) {
    L1 = a * cs / sn;
    L2 = -a / (sn * sn);
    double lam = s.lambda;
    double c0 = gegenbauer_eval(K, lam, cs);
    double c1 = K >= 1 ? 2 * lam * gegenbauer_eval(K - 1, lam + 1, cs) : 0.0;
    double c2 = K >= 2 ? 4 * lam * (lam + 1) * gegenbauer_eval(K - 2, lam + 2, cs) : 0.0;
    G = c0;
    G1 = -sn * c1;
    G2 = sn * sn * c2 - cs * c1;
  } else {
    F *= s.j ? std::pow(cs, s.j) : 1.0;
    L1 = a * cs / sn - s.j * sn / cs;
    L2 = -a / (sn * sn) - s.j / (cs * cs);
    double A = s.mu, B = s.gamma - 1, t = std::cos(2 * phi), s2 = std::sin(2 * phi);
    double p0 = jacobi_eval(K, {A, B}, t);
    double p1 = K >= 1 ? 0.5 * (K + A + B + 1) * jacobi_eval(K - 1, {A + 1, B + 1}, t) : 0.0;
    double p2 = K >= 2 ? 0.25 * (K + A + B + 1) * (K + A + B + 2) * jacobi_eval(K - 2, {A + 2, B + 2}, t) : 0.0;
    G = p0;
    G1 = -2 * s2 * p1;
    G2 = 4 * s2 * s2 * p2 - 4 * t * p1;
  }
  double F1 = F * L1, F2 = F * (L1 * L1 + L2);
  jet.h = F * G;
  jet.dh = F1 * G + F * G1;
  jet.d2h = F2 * G + 2 * F1 * G1 + F * G2;
  return jet;
}

Dims dims(const GrushinConfig& cfg, int k) {
  const int w = cfg.alpha + 1;
  auto dimP = [&](int kk) {
    Integer d = 0;
    if (kk < 0) return d;
    for (int j = 0; j * w <= kk; ++j) d += binomial(cfg.m + j - 1, cfg.m - 1) * binomial(cfg.n + kk - j * w - 1, cfg.n - 1);
    return d;
  };
  Dims r;
  r.dimP = dimP(k);
  r.dimH = r.dimP - dimP(k - 2);
  return r;
}

Dims dims_series(const GrushinConfig& cfg, int k) {
  if (k < 0) return {Integer(0), Integer(0)};
  const int w = cfg.alpha + 1;
  std::vector<Integer> a(k + 1, Integer(0));
  a[0] = 1;
  // Multiply by 1/(1-r) n times and by 1/(1-r^w) m times.
  for (int t = 0; t < cfg.n; ++t)
    for (int i = 1; i <= k; ++i) a[i] += a[i - 1];
  for (int t = 0; t < cfg.m; ++t)
    for (int i = w; i <= k; ++i) a[i] += a[i - w];
  Dims r;
  r.dimP = a[k];
  r.dimH = a[k] - (k >= 2 ? a[k - 2] : Integer(0));
  return r;
}

Integer dim_harmonic_explicit(const GrushinConfig& cfg, int k) {
  if (k < 0) return Integer(0);
  const int w = cfg.alpha + 1;
  const int p = k / w, ell = k % w;
  Integer first = 0, second = 0;
  for (int j = 0; j <= p; ++j) first += binomial(cfg.m + j - 1, cfg.m - 1) * binomial(cfg.n + k - j * w - 1, cfg.n - 1);
  const int top = ell >= 2 ? p : p - 1;
  for (int j = 0; j <= top; ++j)
    second += binomial(cfg.m + j - 1, cfg.m - 1) * binomial(cfg.n + k - j * w - 3, cfg.n - 1);
  return first - second;
}

namespace {

SphericalBasis build_spherical(int n, int ell) {
  SphericalBasis sb;
  sb.n = n;
  sb.ell = ell;
  if (n == 1) {
    if (ell <= 1) {
      Monomial e;
      e.e[0] = static_cast<std::uint8_t>(ell);
      sb.polys.push_back(RationalPolynomial::monomial(1, 0, e, Rational(1)));
    }
  } else if (n == 2) {
    if (ell == 0) {
      sb.polys.push_back(RationalPolynomial::constant(2, 0, Rational(1)));
    } else {
      std::vector<RationalPolynomial::Term> re, im;
      for (int s = 0; s <= ell; ++s) {
        Monomial e;
        e.e[0] = static_cast<std::uint8_t>(ell - s);
        e.e[1] = static_cast<std::uint8_t>(s);
        Rational c(binomial(ell, s));
        if ((s / 2) % 2) c = -c;
        (s % 2 ? im : re).emplace_back(e, c);
      }
      sb.polys.push_back(RationalPolynomial::from_terms(2, 0, std::move(re)));
      sb.polys.push_back(RationalPolynomial::from_terms(2, 0, std::move(im)));
    }
  } else {
    const RationalPolynomial sq = block_norm_power(n, 0, true, 1);
    const RationalPolynomial xn = RationalPolynomial::variable(n, 0, n - 1);
    for (int mu = 0; mu <= ell; ++mu) {
      const SphericalBasis& lower = spherical_basis(n - 1, mu);
      if (lower.polys.empty()) continue;
      const int r = ell - mu;
      Rational lam = Rational(mu) + Rational(n - 2, 2);
      lam.canonicalize();
      std::vector<Rational> g = gegenbauer_coefficients(r, lam);
      RationalPolynomial radial(n, 0);
      RationalPolynomial sqp = RationalPolynomial::constant(n, 0, Rational(1));
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] != 0) radial += sqp * xn.pow(r - 2 * static_cast<int>(i)) * g[i];
        sqp = sqp * sq;
      }
      for (const auto& h : lower.polys) sb.polys.push_back(to_rational(primitive_part(radial * embed(h, n, 0, 0))));
    }
  }
  for (const auto& p : sb.polys) {
    sb.sq_norms.push_back(sphere_product_integral(p, p));
    sb.fast.emplace_back(p);
  }
  return sb;
}

}  // namespace

const SphericalBasis& spherical_basis(int n, int ell) {
  if (n < 1 || ell < 0) fail(ErrorKind::ParameterOutOfRange, "spherical_basis needs n >= 1, ell >= 0");
  static std::shared_mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<SphericalBasis>> memo;
  auto key = std::make_pair(n, ell);
  {
    std::shared_lock lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return *it->second;
  }
  auto built = std::make_unique<SphericalBasis>(build_spherical(n, ell));
  std::unique_lock lock(mu);
  auto [it, inserted] = memo.try_emplace(key, std::move(built));
  return *it->second;
}

double kernel_K(int n, int k, double cosTau) {
  if (!(std::fabs(cosTau) <= 1 + 1e-12)) fail(ErrorKind::DomainError, "|cosTau| must be <= 1");
  cosTau = std::clamp(cosTau, -1.0, 1.0);
  const double area = sphere_area(n);
  if (n == 1) {
    // S^0 = {+1, -1}: degree 0 and 1 only.
    if (k == 0) return 0.5;
    if (k == 1) return 0.5 * cosTau;
    return 0.0;
  }
  if (n == 2) return (k == 0 ? 1.0 : 2.0 * std::cos(k * std::acos(cosTau))) / (2 * M_PI);
  const double lam = 0.5 * (n - 2);
  const double d = spherical_dimension(n, k).get_d();
  const double c1 = std::exp(log_pochhammer(2 * lam, k).log_abs - std::lgamma(k + 1.0));
  return d / area * gegenbauer_eval(k, lam, cosTau) / c1;
}

double BasisElement::trigEval(const OmegaPoint& pt) const {
  double v = shell_profile(cfg, shell, pt.phi) * (*fastX)(pt.omega1.data());
  if (fastY) v *= (*fastY)(pt.omega2.data());
  return v;
}

OmegaFunction BasisElement::omega_function(bool normalized) const {
  OmegaFunction f{cfg, {}};
  OmegaTerm t;
  t.coeff = normalized ? normConstant * angularScale : 1.0;
  t.sinPower = shell.ell / (cfg.alpha + 1.0);
  Shell s = shell;
  if (cfg.m == 1) {
    t.profile = [s](double x) { return gegenbauer_eval(s.ktilde, s.lambda, x); };
  } else {
    t.cosPower = shell.j;
    t.profile = [s](double x) { return jacobi_eval(s.ktilde, {s.mu, s.gamma - 1}, x); };
    t.angular2 = AngularFactor::from(*harmonicY);
  }
  t.profileDegree = shell.ktilde;
  t.angular1 = AngularFactor::from(*harmonicX);
  f.terms.push_back(std::move(t));
  return f;
}

namespace {

// Radial-angular factor of the Cartesian form, shared by all (p, q) of a shell.
RationalPolynomial shell_factor(const GrushinConfig& cfg, const Shell& s) {
  const int n = cfg.n, m = cfg.m, w = cfg.alpha + 1;
  const RationalPolynomial X = block_norm_power(n, m, true, w);
  const RationalPolynomial Y2 = block_norm_power(n, m, false, 1);
  const RationalPolynomial R = X + Y2 * Rational(w * w);
  const int K = s.ktilde;
  RationalPolynomial out(n, m);
  if (m == 1) {
    Rational lam = Rational(2 * s.ell + n - 2, 2 * w) + Rational(1, 2);
    lam.canonicalize();
    std::vector<Rational> g = gegenbauer_coefficients(K, lam);
    const RationalPolynomial wy = RationalPolynomial::variable(n, m, n) * Rational(w);
    RationalPolynomial Rp = RationalPolynomial::constant(n, m, Rational(1));
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] != 0) out += wy.pow(K - 2 * static_cast<int>(i)) * Rp * g[i];
      Rp = Rp * R;
    }
    return out;
  }
  Rational a(n - 2 + 2 * s.ell, 2 * w), b(2 * s.j + m - 2, 2);
  a.canonicalize();
  b.canonicalize();
  std::vector<Rational> c = jacobi_coefficients_half_shift(K, a, b);
  std::vector<RationalPolynomial> Xp{RationalPolynomial::constant(n, m, Rational(1))};
  std::vector<RationalPolynomial> Rp{RationalPolynomial::constant(n, m, Rational(1))};
  for (int i = 1; i <= K; ++i) {
    Xp.push_back(Xp.back() * X);
    Rp.push_back(Rp.back() * R);
  }
  for (int sIdx = 0; sIdx <= K; ++sIdx)
    if (c[sIdx] != 0) out += Xp[sIdx] * Rp[K - sIdx] * c[sIdx];
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(w), static_cast<unsigned long>(s.j));
  return out * Rational(scale);
}

BasisElement assemble(const GrushinConfig& cfg, const HarmonicIndex& idx, const Shell& s,
                      const RationalPolynomial* factor) {
  BasisElement e;
  e.cfg = cfg;
  e.index = idx;
  e.shell = s;
  e.normConstant = s.b;
  const SphericalBasis& sx = spherical_basis(cfg.n, s.ell);
  if (idx.p < 1 || idx.p > static_cast<int>(sx.polys.size())) fail(ErrorKind::InadmissibleIndex, "p out of range");
  e.harmonicX = &sx.polys[idx.p - 1];
  e.fastX = &sx.fast[idx.p - 1];
  double nrm = sphere_area(cfg.n) * sx.sq_norms[idx.p - 1].get_d();
  if (cfg.m >= 2) {
    const SphericalBasis& sy = spherical_basis(cfg.m, s.j);
    if (idx.q < 1 || idx.q > static_cast<int>(sy.polys.size())) fail(ErrorKind::InadmissibleIndex, "q out of range");
    e.harmonicY = &sy.polys[idx.q - 1];
    e.fastY = &sy.fast[idx.q - 1];
    nrm *= sphere_area(cfg.m) * sy.sq_norms[idx.q - 1].get_d();
  } else if (idx.q != 1) {
    fail(ErrorKind::InadmissibleIndex, "q must be 1 when m = 1");
  }
  e.angularScale = 1 / std::sqrt(nrm);
  if (factor) {
    RationalPolynomial c = embed(*e.harmonicX, cfg.n, cfg.m, 0) * *factor;
    if (e.harmonicY) c = c * embed(*e.harmonicY, cfg.n, cfg.m, cfg.n);
    e.cartesian = std::move(c);
  }
  return e;
}

}  // namespace

BasisElement build_basis_element(const GrushinConfig& cfg, const HarmonicIndex& index) {
  require_harmonic_config(cfg);
  Shell s = make_shell(cfg, index.k, index.ell, index.j);
  RationalPolynomial factor = shell_factor(cfg, s);
  BasisElement e = assemble(cfg, index, s, &factor);
  e.index.ktilde = s.ktilde;
  e.index.mu = s.mu;
  e.index.gamma = s.gamma;
  return e;
}

std::vector<BasisElement> build_basis(const GrushinConfig& cfg, int k, bool withCartesian) {
  require_harmonic_config(cfg);
  std::vector<BasisElement> out;
  for (const auto& s : enumerate_shells(cfg, k)) {
    RationalPolynomial factor;
    if (withCartesian) factor = shell_factor(cfg, s);
    long dl = spherical_dimension(cfg.n, s.ell).get_si();
    long dj = cfg.m == 1 ? 1 : spherical_dimension(cfg.m, s.j).get_si();
    for (long p = 1; p <= dl; ++p)
      for (long q = 1; q <= dj; ++q) {
        HarmonicIndex idx{k, s.ell, s.j, static_cast<int>(p), static_cast<int>(q), s.ktilde, s.mu, s.gamma};
        out.push_back(assemble(cfg, idx, s, withCartesian ? &factor : nullptr));
      }
  }
  return out;
}

OmegaGrid make_omega_grid(const GrushinConfig& cfg, int nphi, int sphereOrder) {
  const int n = cfg.n, m = cfg.m;
  const PhiRule rule = omega_phi_rule(cfg, nphi);
  OmegaGrid g;
  g.cfg = cfg;
  g.sphere1 = &sphere_rule(n, sphereOrder);
  g.sphere2 = m >= 2 ? &sphere_rule(m, sphereOrder) : nullptr;
  const SphereRule& s1 = *g.sphere1;
  for (std::size_t i = 0; i < rule.phis.size(); ++i) {
    g.phis.push_back(rule.phis[i]);
    const double phi = g.phis.back();
    for (std::size_t a = 0; a < s1.points.size(); ++a) {
      const std::size_t nb = g.sphere2 ? g.sphere2->points.size() : 1;
      for (std::size_t b = 0; b < nb; ++b) {
        double wt = rule.weights[i] * s1.weights[a];
        if (g.sphere2) {
          g.points.push_back({phi, s1.points[a], g.sphere2->points[b]});
          wt *= g.sphere2->weights[b];
        } else {
          g.points.push_back({phi, s1.points[a], {}});
        }
        g.weights.push_back(wt);
        g.phiIdx.push_back(static_cast<int>(i));
        g.idx1.push_back(static_cast<int>(a));
        g.idx2.push_back(static_cast<int>(b));
      }
    }
  }
  return g;
}

GridBasisValues::GridBasisValues(const OmegaGrid& grid, const std::vector<BasisElement>& basis) : grid_(grid) {
  std::map<std::tuple<int, int, int>, int> shells;
  std::map<const CompiledPolynomial*, int> xs, ys;
  for (const auto& e : basis) {
    scale_.push_back(e.normConstant * e.angularScale);
    auto key = std::make_tuple(e.shell.k, e.shell.ell, e.shell.j);
    auto [it, fresh] = shells.try_emplace(key, static_cast<int>(profile_.size()));
    if (fresh) {
      std::vector<double> v;
      for (double phi : grid.phis) v.push_back(shell_profile(grid.cfg, e.shell, phi));
      profile_.push_back(std::move(v));
    }
    shellSlot_.push_back(it->second);
    auto [ix, freshX] = xs.try_emplace(e.fastX, static_cast<int>(xv_.size()));
    if (freshX) {
      std::vector<double> v;
      for (const auto& p : grid.sphere1->points) v.push_back((*e.fastX)(p.data()));
      xv_.push_back(std::move(v));
    }
    xSlot_.push_back(ix->second);
    if (e.fastY) {
      auto [iy, freshY] = ys.try_emplace(e.fastY, static_cast<int>(yv_.size()));
      if (freshY) {
        std::vector<double> v;
        for (const auto& p : grid.sphere2->points) v.push_back((*e.fastY)(p.data()));
        yv_.push_back(std::move(v));
      }
      ySlot_.push_back(iy->second);
    } else {
      ySlot_.push_back(-1);
    }
  }
}

double GridBasisValues::value(std::size_t e, std::size_t i) const {
  double v = scale_[e] * profile_[shellSlot_[e]][grid_.phiIdx[i]] * xv_[xSlot_[e]][grid_.idx1[i]];
  if (ySlot_[e] >= 0) v *= yv_[ySlot_[e]][grid_.idx2[i]];
  return v;
}

std::vector<double> GridBasisValues::coefficients(const std::vector<double>& fvalues) const {
  std::vector<double> c(scale_.size());
  for (std::size_t e = 0; e < scale_.size(); ++e) {
    CompensatedSum s;
    for (std::size_t i = 0; i < grid_.points.size(); ++i) s.add(grid_.weights[i] * fvalues[i] * value(e, i));
    c[e] = s.value();
  }
  return c;
}

std::vector<double> GridBasisValues::synthesize(const std::vector<double>& coeffs) const {
  std::vector<double> out(grid_.points.size(), 0.0);
  for (std::size_t e = 0; e < coeffs.size(); ++e)
    if (coeffs[e] != 0)
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeffs[e] * value(e, i);
  return out;
}

namespace {

// Integral of h_a h_b against the phi-part of dOmega.
double profile_pair(const GrushinConfig& cfg, const Shell& a, const Shell& b) {
  const double w = cfg.alpha + 1;
  const double S = (a.ell + b.ell) / w + (cfg.n - 2) / w + 1;
  const double A = (S - 1) / 2;
  const int deg = a.ktilde + b.ktilde;
  if (cfg.m == 1) {
    const QuadRule& r = gauss_jacobi_rule(A, A, deg / 2 + 2);
    CompensatedSum s;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
      s.add(r.weights[i] * gegenbauer_eval(a.ktilde, a.lambda, r.nodes[i]) *
            gegenbauer_eval(b.ktilde, b.lambda, r.nodes[i]));
    return s.value();
  }
  const double C = a.j + b.j + cfg.m - 1;
  const double B = (C - 1) / 2;
  const QuadRule& r = gauss_jacobi_rule(A, B, deg / 2 + 2);
  CompensatedSum s;
  for (std::size_t i = 0; i < r.nodes.size(); ++i)
    s.add(r.weights[i] * jacobi_eval(a.ktilde, {a.mu, a.gamma - 1}, r.nodes[i]) *
          jacobi_eval(b.ktilde, {b.mu, b.gamma - 1}, r.nodes[i]));
  return std::pow(2.0, -A - B - 2) * s.value();
}

// Sphere Gram among distinct harmonics, by a product rule exact at the needed degree.
struct SphereGram {
  std::map<const RationalPolynomial*, std::size_t> slot;
  std::vector<std::vector<double>> gram;
};

SphereGram sphere_gram(int dim, const std::vector<std::pair<const RationalPolynomial*, const CompiledPolynomial*>>& hs,
                       int maxDeg) {
  SphereGram g;
  std::vector<const CompiledPolynomial*> fast;
  for (const auto& [p, f] : hs)
    if (g.slot.try_emplace(p, fast.size()).second) fast.push_back(f);
  const SphereRule& rule = sphere_rule(dim, 2 * maxDeg);
  const std::size_t U = fast.size(), P = rule.points.size();
  std::vector<std::vector<double>> vals(U, std::vector<double>(P));
  for (std::size_t u = 0; u < U; ++u)
    for (std::size_t i = 0; i < P; ++i) vals[u][i] = (*fast[u])(rule.points[i].data());
  g.gram.assign(U, std::vector<double>(U, 0.0));
  for (std::size_t u = 0; u < U; ++u)
    for (std::size_t v = u; v < U; ++v) {
      CompensatedSum s;
      for (std::size_t i = 0; i < P; ++i) s.add(rule.weights[i] * vals[u][i] * vals[v][i]);
      g.gram[u][v] = g.gram[v][u] = s.value();
    }
  return g;
}

}  // namespace

std::vector<std::vector<double>> basis_gram(const GrushinConfig& cfg, const std::vector<BasisElement>& a,
                                            const std::vector<BasisElement>& b) {
  std::vector<std::pair<const RationalPolynomial*, const CompiledPolynomial*>> hx, hy;
  int maxL = 0, maxJ = 0;
  for (const auto* list : {&a, &b})
    for (const auto& e : *list) {
      hx.emplace_back(e.harmonicX, e.fastX);
      maxL = std::max(maxL, e.shell.ell);
      if (e.harmonicY) {
        hy.emplace_back(e.harmonicY, e.fastY);
        maxJ = std::max(maxJ, e.shell.j);
      }
    }
  SphereGram gx = sphere_gram(cfg.n, hx, maxL);
  SphereGram gy;
  if (cfg.m >= 2) gy = sphere_gram(cfg.m, hy, maxJ);
  std::map<std::tuple<int, int, int, int, int, int>, double> phiCache;
  std::vector<std::vector<double>> G(a.size(), std::vector<double>(b.size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      const auto& ea = a[i];
      const auto& eb = b[j];
      double sx = gx.gram[gx.slot.at(ea.harmonicX)][gx.slot.at(eb.harmonicX)];
      double sy = cfg.m >= 2 ? gy.gram[gy.slot.at(ea.harmonicY)][gy.slot.at(eb.harmonicY)] : 1.0;
      if (sx == 0 || sy == 0) continue;
      auto key = std::make_tuple(ea.shell.k, ea.shell.ell, ea.shell.j, eb.shell.k, eb.shell.ell, eb.shell.j);
      auto it = phiCache.find(key);
      if (it == phiCache.end()) it = phiCache.emplace(key, profile_pair(cfg, ea.shell, eb.shell)).first;
      G[i][j] = ea.normConstant * ea.angularScale * eb.normConstant * eb.angularScale * it->second * sx * sy;
    }
  return G;
}

double profile_sq_norm(const GrushinConfig& cfg, const Shell& s) { return profile_pair(cfg, s, s); }

double profile_sq_norm_closed(const GrushinConfig& cfg, const Shell& s) {
  if (cfg.m == 1) return gegenbauer_norm(s.ktilde, s.lambda);
  const double K = s.ktilde, mu = s.mu, g = s.gamma;
  return std::exp(std::lgamma(K + mu + 1) + std::lgamma(K + g) - std::lgamma(K + mu + g) - std::lgamma(K + 1)) /
         (2 * (2 * K + mu + g));
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double kernel_G(const GrushinConfig& cfg, int k, const OmegaPoint& pt1, const OmegaPoint& pt2) {
  const double c1 = std::clamp(dot(pt1.omega1, pt2.omega1), -1.0, 1.0);
  const double c2 = cfg.m >= 2 ? std::clamp(dot(pt1.omega2, pt2.omega2), -1.0, 1.0) : 1.0;
  CompensatedSum s;
  for (const auto& sh : enumerate_shells(cfg, k)) {
    double v = sh.b * sh.b * shell_profile(cfg, sh, pt1.phi) * shell_profile(cfg, sh, pt2.phi) * kernel_K(cfg.n, sh.ell, c1);
    if (cfg.m >= 2) v *= kernel_K(cfg.m, sh.j, c2);
    s.add(v);
  }
  return s.value();
}

OmegaEvaluator project_Pk(const GrushinConfig& cfg, int k, const OmegaEvaluator& f, const OmegaGrid& grid) {
  auto basis = std::make_shared<std::vector<BasisElement>>(build_basis(cfg, k, false));
  std::vector<double> fv(grid.points.size());
  for (std::size_t g = 0; g < grid.points.size(); ++g) fv[g] = f(grid.points[g]);
  auto coeffs = std::make_shared<std::vector<double>>(GridBasisValues(grid, *basis).coefficients(fv));
  return [basis, coeffs](const OmegaPoint& pt) {
    double v = 0;
    for (std::size_t i = 0; i < basis->size(); ++i) v += (*coeffs)[i] * (*basis)[i].normalizedEval(pt);
    return v;
  };
}

OmegaEvaluator project_Pk(const GrushinConfig& cfg, int k, const OmegaEvaluator& f) {
  OmegaGrid grid = make_omega_grid(cfg, k + 12, 2 * k + 12);
  return project_Pk(cfg, k, f, grid);
}

std::vector<double> project_Pk_kernel(const GrushinConfig& cfg, int k, const OmegaEvaluator& f,
                                      const std::vector<OmegaPoint>& at, const OmegaGrid& grid) {
  std::vector<double> fv(grid.points.size());
  for (std::size_t g = 0; g < grid.points.size(); ++g) fv[g] = f(grid.points[g]);
  std::vector<double> out;
  for (const auto& sigma : at) {
    CompensatedSum s;
    for (std::size_t g = 0; g < grid.points.size(); ++g) s.add(grid.weights[g] * kernel_G(cfg, k, sigma, grid.points[g]) * fv[g]);
    out.push_back(s.value());
  }
  return out;
}

double delta_sigma_profile(const GrushinConfig& cfg, const Shell& s, double phi) {
  const double w = cfg.alpha + 1;
  const ProfileJet jet = shell_profile_jet(cfg, s, phi);
  const double sn = std::sin(phi), cs = std::cos(phi);
  double v = w * w * jet.d2h + (cfg.n + cfg.alpha - 1) * w * cs / sn * jet.dh;
  v -= s.ell * (s.ell + cfg.n - 2.0) / (sn * sn) * jet.h;
  if (cfg.m >= 2) {
    v -= (cfg.m - 1) * w * w * sn / cs * jet.dh;
    v -= w * w * s.j * (s.j + cfg.m - 2.0) / (cs * cs) * jet.h;
  }
  return v;
}

namespace {

void check_uv(double u, double v) {
  if (u == 2 || v == 2) fail(ErrorKind::DegenerateParameter, "u = 2 or v = 2 gives a zero Gegenbauer order");
  if (!(u > 1) || !(v > 1)) fail(ErrorKind::ParameterOutOfRange, "need u > 1 and v > 1");
}

// f_{k,l,j}(cos 2 theta), with the B parameters matching the Jacobi parameters.
double addition_f(double u, double v, int k, int l, int j, double th) {
  const int N = (k - l - j) / 2;
  const JacobiParams p{v / 2 - 1 + l, u / 2 - 1 + j};
  return std::exp(-0.5 * log_norm_B(N, p)) * std::pow(std::cos(th), j) * std::pow(std::sin(th), l) *
         jacobi_eval(N, p, std::cos(2 * th));
}

double gamma_signed(double x) { return signed_log_gamma(x).value(); }

}  // namespace

double addition_formula_lhs(double u, double v, int k, double phi, double xi, double theta1, double theta2) {
  check_uv(u, v);
  double arg = std::cos(phi) * std::cos(xi) * std::cos(theta1) + std::sin(phi) * std::sin(xi) * std::cos(theta2);
  return gegenbauer_eval(k, (u + v) / 2 - 1, arg);
}

double addition_formula_rhs(double u, double v, int k, double phi, double xi, double theta1, double theta2) {
  check_uv(u, v);
  const double pre = gamma_signed(u / 2 - 1) * gamma_signed(v / 2 - 1) / gamma_signed((u + v) / 2 - 1);
  CompensatedSum s;
  for (int i = 0; 2 * i <= k; ++i)
    for (int j = 0; j <= k - 2 * i; ++j) {
      int l = k - 2 * i - j;
      double c = (2 * j + u - 2) * (2 * l + v - 2) * pre / (4 * (2 * k + u + v - 2));
      s.add(c * addition_f(u, v, k, l, j, phi) * addition_f(u, v, k, l, j, xi) *
            gegenbauer_eval(j, u / 2 - 1, std::cos(theta1)) * gegenbauer_eval(l, v / 2 - 1, std::cos(theta2)));
    }
  return s.value();
}

double addition_formula_residual(double u, double v, int k, double phi, double xi, double theta1, double theta2) {
  double lhs = addition_formula_lhs(u, v, k, phi, xi, theta1, theta2);
  double rhs = addition_formula_rhs(u, v, k, phi, xi, theta1, theta2);
  return std::fabs(lhs - rhs) / std::max(1.0, std::fabs(lhs));
}

double phi_upper(const GrushinConfig& cfg) { return cfg.m == 1 ? M_PI : M_PI / 2; }

std::vector<double> phi_grid(const GrushinConfig& cfg, int gridSize) {
  if (gridSize < 2) fail(ErrorKind::ParameterOutOfRange, "gridSize must be >= 2");
  std::vector<double> g(gridSize);
  const double up = phi_upper(cfg);
  for (int i = 0; i < gridSize; ++i) g[i] = up * i / (gridSize - 1);
  return g;
}

double kernel_diag_sup(const GrushinConfig& cfg, int k, int gridSize) {
  auto shells = enumerate_shells(cfg, k);
  double best = 0;
  for (double phi : phi_grid(cfg, gridSize)) {
    CompensatedSum s;
    for (const auto& sh : shells) {
      double h = shell_profile(cfg, sh, phi);
      double wgt = std::pow(sh.ell + 1.0, cfg.n - 2);
      if (cfg.m >= 2) wgt *= std::pow(sh.j + 1.0, cfg.m - 2);
      s.add(sh.b * sh.b * h * h * wgt);
    }
    best = std::max(best, s.value());
  }
  return best;
}

namespace {

GrowthFit fit_logs(const std::vector<double>& lx, const std::vector<double>& values) {
  if (lx.size() != values.size() || lx.size() < 4) fail(ErrorKind::DegenerateData, "growth fit needs >= 4 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double N = static_cast<double>(lx.size());
  for (std::size_t i = 0; i < lx.size(); ++i) {
    if (!(values[i] > 0)) fail(ErrorKind::DegenerateData, "growth fit needs positive values");
    double x = lx[i], y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  double den = N * sxx - sx * sx;
  if (!(den > 1e-14 * N * sxx)) fail(ErrorKind::DegenerateData, "growth fit needs distinct abscissae");
  GrowthFit f;
  f.slope = (N * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / N;
  double syyc = N * syy - sy * sy;
  f.rSquared = syyc > 0 ? std::min(1.0, (N * sxy - sx * sy) * (N * sxy - sx * sy) / (den * syyc)) : 1.0;
  return f;
}

}  // namespace

GrowthFit growth_fit(const std::vector<int>& ks, const std::vector<double>& values) {
  std::vector<double> lx;
  for (int k : ks) {
    if (k < 0) fail(ErrorKind::DegenerateData, "growth fit needs k >= 0");
    lx.push_back(std::log(k + 1.0));
  }
  return fit_logs(lx, values);
}

GrowthFit growth_fit_log(const std::vector<double>& xs, const std::vector<double>& values) {
  std::vector<double> lx;
  for (double x : xs) {
    if (!(x > 0)) fail(ErrorKind::DegenerateData, "growth fit needs positive abscissae");
    lx.push_back(std::log(x));
  }
  return fit_logs(lx, values);
}

}  // namespace grushin
