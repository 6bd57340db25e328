#include "grushin/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "grushin/error.hpp"
#include "grushin/quadrature.hpp"
#include "grushin/specfun.hpp"

namespace grushin {

namespace {

ExponentRow dimension_row(const GrushinConfig& cfg, int D, std::string family) {
  ExponentRow r;
  r.m = cfg.m;
  r.n = cfg.n;
  r.alpha = cfg.alpha;
  r.family = std::move(family);
  r.dimensionD = D;
  const Rational inv(1, cfg.alpha + 1);
  r.p = 2 * (D + inv) / (D + 2 * inv);
  r.q = 2 * (D + inv) / Rational(D);
  r.rThreshold = Rational(cfg.alpha + 1) * D + 1;
  r.p.canonicalize();
  r.q.canonicalize();
  r.rThreshold.canonicalize();
  return r;
}

ExponentRow row_of(const GrushinConfig& cfg, Rational p, Rational q, Rational r, std::string family) {
  ExponentRow row;
  row.m = cfg.m;
  row.n = cfg.n;
  row.alpha = cfg.alpha;
  p.canonicalize();
  q.canonicalize();
  r.canonicalize();
  row.p = p;
  row.q = q;
  row.rThreshold = r;
  row.family = std::move(family);
  return row;
}

}  // namespace

bool exponents_covered(const GrushinConfig& cfg) {
  if (cfg.n < 2 || cfg.m < 1 || cfg.alpha < 1) return false;
  if (cfg.m >= 2 && cfg.n == 2 && cfg.alpha >= 2) return false;
  return true;
}

ExponentRow exponents(const GrushinConfig& cfg) {
  if (!exponents_covered(cfg)) fail(ErrorKind::UncoveredCase, "no exponent table row for " + cfg.str());
  const int n = cfg.n, m = cfg.m, a = cfg.alpha, w = a + 1;
  if (m == 1) {
    if (a == 1) return row_of(cfg, Rational(2 * n, n + 1), Rational(2 * n, n - 1), Rational(n), "m=1,n>=2,alpha=1");
    if (n <= 3)
      return row_of(cfg, Rational(6 * a + 10, 3 * a + 7), Rational(6 * a + 10, 3 * a + 3), Rational(3 * a + 5, 2),
                    "m=1,n in {2,3},alpha>=2");
    const int t = w * (n - 1);
    return row_of(cfg, Rational(4 + 2 * t, 4 + t), Rational(4 + 2 * t, t), Rational(2 + t, 2), "m=1,n>=4,alpha>=2");
  }
  if (n == 3 && a >= 2) return dimension_row(cfg, m + 2, "m>=2,n=3,alpha>=2");
  return dimension_row(cfg, n + m - 2, n >= 4 ? "m>=2,n>=4" : "m>=2,n in {2,3},alpha=1");
}

bool exponent_identities_hold(const ExponentRow& row) {
  const Rational ip = 1 / row.p, iq = 1 / row.q;
  if (ip + iq != 1) return false;
  if (ip - iq != 1 / row.rThreshold) return false;
  if (row.m >= 2 && ip - iq != Rational(1) / (Rational(row.alpha + 1) * row.dimensionD + 1)) return false;
  return true;
}

std::vector<ExponentRow> exponent_table(int mMax, int nMax, int aMax) {
  std::vector<ExponentRow> out;
  for (int m = 1; m <= mMax; ++m)
    for (int n = 2; n <= nMax; ++n)
      for (int a = 1; a <= aMax; ++a) {
        GrushinConfig cfg{n, m, a};
        if (exponents_covered(cfg)) out.push_back(exponents(cfg));
      }
  return out;
}

std::string exponent_table_csv(const std::vector<ExponentRow>& rows) {
  std::ostringstream os;
  os << "# schema_version: 1\n";
  os << "m,n,alpha,p,q,r\n";
  for (const auto& r : rows)
    os << r.m << "," << r.n << "," << r.alpha << "," << r.p.get_str() << "," << r.q.get_str() << ","
       << r.rThreshold.get_str() << "\n";
  return os.str();
}

std::string exponent_table_json(const std::vector<ExponentRow>& rows) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["families"] = nlohmann::json::array({
      {{"m", "1"}, {"n", ">=2"}, {"alpha", "1"}, {"p", "2n/(n+1)"}, {"q", "2n/(n-1)"}, {"r", "n"}},
      {{"m", "1"},
       {"n", "2,3"},
       {"alpha", ">=2"},
       {"p", "(6a+10)/(3a+7)"},
       {"q", "(6a+10)/(3a+3)"},
       {"r", "(3a+5)/2"}},
      {{"m", "1"},
       {"n", ">=4"},
       {"alpha", ">=2"},
       {"p", "(4+2(a+1)(n-1))/(4+(a+1)(n-1))"},
       {"q", "(4+2(a+1)(n-1))/((a+1)(n-1))"},
       {"r", "(2+(n-1)(a+1))/2"}},
      {{"m", ">=2"},
       {"n", "3"},
       {"alpha", ">=2"},
       {"p", "2(m+2+1/(a+1))/(m+2+2/(a+1))"},
       {"q", "2(m+2+1/(a+1))/(m+2)"},
       {"r", "(a+1)(m+2)+1"}},
      {{"m", ">=2"},
       {"n", "2,3 (alpha=1); >=4"},
       {"alpha", "1; >=1"},
       {"p", "2(n+m-2+1/(a+1))/(n+m-2+2/(a+1))"},
       {"q", "2(n+m-2+1/(a+1))/(n+m-2)"},
       {"r", "(a+1)(n+m-2)+1"}},
  });
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"m", r.m},
                   {"n", r.n},
                   {"alpha", r.alpha},
                   {"p", r.p.get_str()},
                   {"q", r.q.get_str()},
                   {"r", r.rThreshold.get_str()},
                   {"family", r.family}});
  j["rows"] = arr;
  return j.dump(2);
}

CarlemanSymbol symbol_a(double s, double eta, int k, int Q) {
  const std::complex<double> z(s, eta);
  const std::complex<double> d1 = double(k) - z, d2 = double(k + Q - 2) + z;
  if (std::abs(d1) == 0 || std::abs(d2) == 0) fail(ErrorKind::PoleHit, "symbol denominator vanishes");
  CarlemanSymbol c;
  c.s = s;
  c.eta = eta;
  c.k = k;
  c.Q = Q;
  c.value = -1.0 / (d1 * d2);
  return c;
}

bool dyadic_support(double s, double eta, int k, int gamma, double delta) {
  const double d = std::abs(std::complex<double>(k - s, -eta));
  return d >= delta * std::ldexp(1.0, gamma - 2) && d <= std::ldexp(1.0, gamma);
}

double eigenrelation_residual(const GrushinConfig& cfg, const HarmonicIndex& index, double s, double eta,
                              const std::vector<PolarPoint>& samplePoints) {
  const BasisElement e = build_basis_element(cfg, index);
  const int k = index.k, N = cfg.n + cfg.m;
  const double w = cfg.alpha + 1, Q = cfg.Q();
  const double scale = e.normConstant * e.angularScale;
  const std::complex<double> z(s, eta);
  const std::complex<double> eig = -(double(k) - z) * (double(k) + Q - 2 + z);
  CompiledPolynomial P(e.cartesian), LP(apply_grushin(e.cartesian, cfg));
  std::vector<CompiledPolynomial> grad;
  for (int v = 0; v < N; ++v) grad.emplace_back(e.cartesian.derivative(v));
  const std::complex<double> c = (z - double(k)) / (2 * w);
  double worst = 0;
  for (const PolarPoint& pp : samplePoints) {
    const double t = std::log(pp.rho);
    const std::complex<double> phase = std::exp(std::complex<double>(0, eta * t));
    const double psi = angle_psi(pp.phi, cfg);
    double ang = (*e.fastX)(pp.omega1.data());
    if (e.fastY) ang *= (*e.fastY)(pp.omega2.data());
    const double u = scale * shell_profile(cfg, e.shell, pp.phi) * ang;
    const std::complex<double> rhs = eig * psi * phase * u;

    const double dsu = scale * delta_sigma_profile(cfg, e.shell, pp.phi) * ang;
    const std::complex<double> polar = psi * phase * ((z * z + (Q - 2) * z) * u + dsu);

    auto [x, y] = polar_inverse(pp, cfg);
    std::vector<double> pt(x);
    pt.insert(pt.end(), y.begin(), y.end());
    double x2 = 0, xg = 0, yg = 0;
    for (int i = 0; i < cfg.n; ++i) {
      x2 += x[i] * x[i];
      xg += x[i] * grad[i](pt.data());
    }
    for (int j = 0; j < cfg.m; ++j) yg += y[j] * grad[cfg.n + j](pt.data());
    const double xa = std::pow(x2, cfg.alpha);
    const double R = std::pow(pp.rho, 2 * w);
    const std::complex<double> F = std::exp(c * std::log(R));
    const std::complex<double> F1 = c * F / R, F2 = c * (c - 1.0) * F / (R * R);
    const double Pv = P(pt.data());
    const double dR = 2 * w * xa * (Q + 2 * cfg.alpha), gradR2 = 4 * w * w * xa * R;
    std::complex<double> lap = Pv * (F1 * dR + F2 * gradR2) + 4 * w * xa * F1 * (xg + w * yg) + F * LP(pt.data());
    const std::complex<double> cart = scale * std::pow(pp.rho, 2 - s) * lap;

    worst = std::max({worst, std::abs(polar - rhs), std::abs(cart - rhs)});
  }
  return worst;
}

std::string CarlemanTestFunction::family() const {
  std::ostringstream os;
  os << "bump[" << r0 << "," << r1 << "]xH" << k << "#" << element;
  return os.str();
}

namespace {

double log_sum_exp(const std::vector<double>& logs) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : logs) mx = std::max(mx, v);
  if (!std::isfinite(mx)) return mx;
  CompensatedSum s;
  for (double v : logs) s.add(std::exp(v - mx));
  return mx + std::log(s.value());
}

// log of the integral over (t0, t1) of exp(L(t)), composite Gauss-Legendre.
template <class F>
double log_integral_t(double t0, double t1, const F& L, int panels = 400, int order = 16) {
  const QuadRule& r = gauss_jacobi_rule(0, 0, order);
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(panels) * order);
  const double h = (t1 - t0) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = t0 + p * h;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      const double t = a + h * (r.nodes[i] + 1) / 2;
      logs.push_back(std::log(r.weights[i] * h / 2) + L(t));
    }
  }
  return log_sum_exp(logs);
}

// Integral over the phi-part of dOmega of psi^E |normConstant h|^power, by Gauss-Jacobi in the cosine variable.
double omega_profile_power(const GrushinConfig& cfg, const BasisElement& e, double E, double power, int npts) {
  const double w = cfg.alpha + 1;
  const double a = (cfg.n - 2) / w + 1 + 2 * cfg.alpha * E / w;
  const double A = (a - 1) / 2;
  if (!(A > -1)) fail(ErrorKind::NonIntegrableWeight, "Carleman weight not integrable");
  CompensatedSum s;
  if (cfg.m == 1) {
    const QuadRule& r = gauss_jacobi_rule(A, A, npts);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      const double phi = std::acos(r.nodes[i]);
      s.add(r.weights[i] * std::pow(std::fabs(e.normConstant * shell_profile(cfg, e.shell, phi)), power));
    }
    return s.value();
  }
  const double B = (cfg.m - 2) / 2.0;
  const QuadRule& r = gauss_jacobi_rule(A, B, npts);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const double phi = std::acos(r.nodes[i]) / 2;
    s.add(r.weights[i] * std::pow(std::fabs(e.normConstant * shell_profile(cfg, e.shell, phi)), power));
  }
  return std::pow(2.0, -A - B - 2) * s.value();
}

// Integral of |angularScale Y Z|^power over the sphere product.
double omega_angular_power(const GrushinConfig& cfg, const BasisElement& e, double power, int order) {
  const SphereRule& r1 = sphere_rule(cfg.n, order);
  CompensatedSum s1;
  for (std::size_t i = 0; i < r1.points.size(); ++i)
    s1.add(r1.weights[i] * std::pow(std::fabs((*e.fastX)(r1.points[i].data())), power));
  double v = s1.value();
  if (cfg.m >= 2) {
    const SphereRule& r2 = sphere_rule(cfg.m, order);
    CompensatedSum s2;
    for (std::size_t i = 0; i < r2.points.size(); ++i)
      s2.add(r2.weights[i] * std::pow(std::fabs((*e.fastY)(r2.points[i].data())), power));
    v *= s2.value();
  }
  return v * std::pow(std::fabs(e.angularScale), power);
}

}  // namespace

CarlemanResult carleman_ratio(const GrushinConfig& cfg, double s, double epsilon, const CarlemanTestFunction& g) {
  const ExponentRow ex = exponents(cfg);
  if (!(epsilon > 0) || !(epsilon < 0.125)) fail(ErrorKind::ParameterOutOfRange, "need 0 < epsilon < 1/8");
  if (std::fabs(s - std::round(s)) == 0) fail(ErrorKind::ParameterOutOfRange, "s must have positive distance to N");
  if (!(g.r0 > 0) || !(g.r1 > g.r0)) fail(ErrorKind::NonSmoothTestFunction, "bump support must be 0 < r0 < r1");
  if (!(g.dilation > 0) || g.amplitude == 0 || !std::isfinite(g.amplitude))
    fail(ErrorKind::ParameterOutOfRange, "need dilation > 0 and a finite nonzero amplitude");
  std::vector<BasisElement> basis = build_basis(cfg, g.k, false);
  if (g.element < 0 || g.element >= static_cast<int>(basis.size()))
    fail(ErrorKind::InadmissibleIndex, "test-function element out of range");
  const BasisElement& e = basis[g.element];
  const double p = ex.p.get_d(), q = ex.q.get_d();
  const double Q = cfg.Q(), k = g.k, lam = g.dilation, r0 = g.r0, r1 = g.r1;
  const double t0 = std::log(r0 / lam), t1 = std::log(r1 / lam);

  // chi(r) = exp(-1/D), D = (r - r0)(r1 - r); log|chi''(r) + (2k+Q-1) chi'(r)/r|.
  auto log_chi = [&](double r) {
    const double D = (r - r0) * (r1 - r);
    return D > 0 ? -1 / D : -std::numeric_limits<double>::infinity();
  };
  auto log_lap = [&](double r) {
    const double D = (r - r0) * (r1 - r);
    if (!(D > 0)) return -std::numeric_limits<double>::infinity();
    const double D1 = r1 + r0 - 2 * r, D2 = -2;
    const double M = D1 * D1 / (D * D * D * D) + D2 / (D * D) - 2 * D1 * D1 / (D * D * D) +
                     (2 * k + Q - 1) * D1 / (r * D * D);
    return -1 / D + std::log(std::fabs(M));
  };
  const double logTq = log_integral_t(t0, t1, [&](double t) {
    const double r = lam * std::exp(t);
    return -s * q * t + q * (log_chi(r) + k * std::log(r));
  });
  const double logTp = log_integral_t(t0, t1, [&](double t) {
    const double r = lam * std::exp(t);
    return (2 - s) * p * t + p * (2 * std::log(lam) + log_lap(r) + k * std::log(r));
  });
  const int nphi = 96, order = 48;
  const double Oq = omega_profile_power(cfg, e, epsilon * q - 1, q, nphi) * omega_angular_power(cfg, e, q, order);
  const double Op =
      omega_profile_power(cfg, e, p * (1 - epsilon) - 1, p, nphi) * omega_angular_power(cfg, e, p, order);
  const double mlog = -cfg.m * std::log(cfg.alpha + 1.0);
  CarlemanResult res;
  res.s = s;
  res.epsilon = epsilon;
  const double la = std::log(std::fabs(g.amplitude));
  res.logLhs = la + (mlog + logTq + std::log(Oq)) / q;
  res.logRhs = la + (mlog + logTp + std::log(Op)) / p;
  res.lhs = std::exp(res.logLhs);
  res.rhs = std::exp(res.logRhs);
  res.ratio = std::exp(res.logLhs - res.logRhs);
  return res;
}

std::vector<double> default_s_grid() { return {100.5, 125.5, 150.5, 175.5, 200.5}; }

CarlemanSweep carleman_sweep(const GrushinConfig& cfg, double epsilon, const std::vector<double>& sGrid,
                             const CarlemanTestFunction& g) {
  CarlemanSweep sw;
  sw.cfg = cfg;
  sw.g = g;
  std::vector<double> ratios;
  for (double s : sGrid) {
    sw.results.push_back(carleman_ratio(cfg, s, epsilon, g));
    ratios.push_back(sw.results.back().ratio);
  }
  sw.slope = growth_fit_log(sGrid, ratios).slope;
  return sw;
}

std::string carleman_csv(const GrushinConfig& cfg, const CarlemanTestFunction& g,
                         const std::vector<CarlemanResult>& results) {
  std::ostringstream os;
  os << "# schema_version: 1\n";
  os << "n,m,alpha,s,epsilon,family,lhs,rhs,ratio\n";
  char buf[64];
  auto f = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : results)
    os << cfg.n << "," << cfg.m << "," << cfg.alpha << "," << f(r.s) << "," << f(r.epsilon) << "," << g.family()
       << "," << f(r.lhs) << "," << f(r.rhs) << "," << f(r.ratio) << "\n";
  return os.str();
}

}  // namespace grushin
