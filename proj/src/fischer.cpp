#include "grushin/fischer.hpp"

#include <cmath>

#include "json.hpp"
#include "grushin/harmonics.hpp"
#include "grushin/quadrature.hpp"
#include "grushin/specfun.hpp"

namespace grushin {

std::size_t harmonic_dimension(const GrushinConfig& cfg, int k) {
  if (k < 0) return 0;
  return static_cast<std::size_t>(dims(cfg, k).dimH.get_ui());
}

SpectralRep SpectralRep::zero(const GrushinConfig& cfg, int k) {
  SpectralRep r;
  r.cfg = cfg;
  r.k = k;
  for (int p = 0; 2 * p <= k; ++p) r.shells.emplace_back(harmonic_dimension(cfg, k - 2 * p), Rational(0));
  return r;
}

bool SpectralRep::is_zero() const {
  for (const auto& s : shells)
    for (const auto& c : s)
      if (c != 0) return false;
  return true;
}

Rational spectral_L_factor(const GrushinConfig& cfg, int k, int p) {
  return Rational(2 * p) * Rational(2 * p + cfg.Q() + 2 * (k - 2 * p) - 2);
}

SpectralRep spectral_L(const SpectralRep& rep) {
  SpectralRep out = SpectralRep::zero(rep.cfg, rep.k - 2);
  for (std::size_t p = 1; p < rep.shells.size(); ++p) {
    Rational f = spectral_L_factor(rep.cfg, rep.k, static_cast<int>(p));
    for (std::size_t i = 0; i < rep.shells[p].size(); ++i) out.shells[p - 1][i] = f * rep.shells[p][i];
  }
  return out;
}

SpectralRep multiply_rho2(const SpectralRep& rep) {
  SpectralRep out = SpectralRep::zero(rep.cfg, rep.k + 2);
  for (std::size_t p = 0; p < rep.shells.size(); ++p) out.shells[p + 1] = rep.shells[p];
  return out;
}

Integer double_factorial(long n) {
  if (n < -1) fail(ErrorKind::DomainError, "double factorial of n < -1");
  Integer r;
  if (n <= 0) return Integer(1);
  mpz_2fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

Rational power_coefficient(const GrushinConfig& cfg, int k, int v, int j) {
  if (v > j) return Rational(0);
  const long Q = cfg.Q();
  Rational r(double_factorial(2 * j) * double_factorial(Q + 2 * k - 2 * j - 2),
             double_factorial(2 * j - 2 * v) * double_factorial(Q + 2 * k - 2 * j - 2 * v - 2));
  r.canonicalize();
  return r;
}

ProjCoefficients proj_coefficients(const GrushinConfig& cfg, int k, int ell) {
  if (ell < 0 || 2 * ell > k) fail(ErrorKind::InvalidShell, "need 0 <= 2 ell <= k");
  ProjCoefficients pc;
  pc.k = k;
  pc.ell = ell;
  const Rational Q2(cfg.Q(), 2);
  const Rational top = Q2 + (k - ell);  // argument of the denominator Gamma
  for (int j = 0; j <= k / 2 - ell; ++j) {
    // Gamma(a) / Gamma(top) = 1 / prod_{x = a}^{top - 1} x with top - a = ell + j + 1.
    Rational a = Q2 + (k - 2 * ell - j - 1);
    Rational den = Rational(1);
    for (Rational x = a; x < top; x += 1) den *= x;
    Integer four;
    mpz_ui_pow_ui(four.get_mpz_t(), 4, static_cast<unsigned long>(j + ell));
    den *= Rational(four) * factorial(j) * factorial(ell);
    Rational num = Q2 + (k - 2 * ell - 1);
    if (j % 2) num = -num;
    Rational v = num / den;
    v.canonicalize();
    pc.alphas.push_back(v);
  }
  return pc;
}

SpectralRep apply_proj(const ProjCoefficients& pc, const SpectralRep& rep) {
  if (rep.k != pc.k) fail(ErrorKind::InvalidShell, "rep degree does not match coefficients");
  SpectralRep acc = SpectralRep::zero(rep.cfg, pc.k - 2 * pc.ell);
  SpectralRep Lp = rep;
  for (int i = 0; i < pc.ell; ++i) Lp = spectral_L(Lp);
  for (std::size_t j = 0; j < pc.alphas.size(); ++j) {
    SpectralRep term = Lp;
    for (std::size_t t = 0; t < j; ++t) term = multiply_rho2(term);
    for (std::size_t p = 0; p < term.shells.size(); ++p)
      for (std::size_t i = 0; i < term.shells[p].size(); ++i) acc.shells[p][i] += pc.alphas[j] * term.shells[p][i];
    Lp = spectral_L(Lp);
  }
  return acc;
}

ProjIdentityReport verify_proj_identity(const GrushinConfig& cfg, int k) {
  ProjIdentityReport rep;
  rep.cfg = cfg;
  rep.k = k;
  for (int ell = 0; 2 * ell <= k; ++ell) {
    ProjCoefficients pc = proj_coefficients(cfg, k, ell);
    for (int p = 0; 2 * p <= k; ++p) {
      SpectralRep in = SpectralRep::zero(cfg, k);
      for (std::size_t i = 0; i < in.shells[p].size(); ++i) in.shells[p][i] = Rational(static_cast<long>(i) + 1);
      SpectralRep out = apply_proj(pc, in);
      ++rep.checked;
      for (std::size_t s = 0; s < out.shells.size(); ++s)
        for (std::size_t i = 0; i < out.shells[s].size(); ++i) {
          Rational expect = (p == ell && s == 0) ? in.shells[p][i] : Rational(0);
          Rational diff = out.shells[s][i] - expect;
          if (diff != 0) rep.nonzero.push_back({k, ell, static_cast<int>(s), diff});
        }
    }
  }
  return rep;
}

Rational sl2_symbol(const GrushinConfig& cfg, const Rational& a, int k) {
  return (a - k) * (a + k + cfg.Q() - 2);
}

Sl2Residual sl2_commutator_check(const GrushinConfig& cfg, const Rational& a, int k) {
  const Rational Q2(cfg.Q(), 2);
  Sl2Residual r;
  // [L, rho^2] on rho^a g: result is a multiple of rho^a g.
  Rational lr = sl2_symbol(cfg, a + 2, k) - sl2_symbol(cfg, a, k);
  r.lRho2 = lr - 4 * (a + Q2);
  // [L, E + Q/2]: multiple of rho^{a-2} g.
  Rational le = sl2_symbol(cfg, a, k) * (a + Q2) - (a - 2 + Q2) * sl2_symbol(cfg, a, k);
  r.lEuler = le - 2 * sl2_symbol(cfg, a, k);
  // [rho^2, E + Q/2]: multiple of rho^{a+2} g.
  Rational re = (a + Q2) - (a + 2 + Q2);
  r.rho2Euler = re - Rational(-2);
  return r;
}

double sl2_pointwise_residual(const BasisElement& e, const std::vector<double>& x, const std::vector<double>& y) {
  const GrushinConfig& cfg = e.cfg;
  PolarPoint pp = polar_map(x, y, cfg);
  OmegaPoint sigma{pp.phi, pp.omega1, pp.omega2};
  const double Q = cfg.Q();
  const int k = e.index.k;
  double ang = (*e.fastX)(sigma.omega1.data());
  if (e.fastY) ang *= (*e.fastY)(sigma.omega2.data());
  const double g = shell_profile(cfg, e.shell, pp.phi) * ang;
  const double dsg = delta_sigma_profile(cfg, e.shell, pp.phi) * ang;
  auto L = [&](double a) { return std::pow(pp.rho, a - 2) * ((a * (a - 1) + (Q - 1) * a) * g + dsg); };
  const double lhs = L(k + 2.0) - pp.rho * pp.rho * L(k);
  std::vector<double> pt(x);
  pt.insert(pt.end(), y.begin(), y.end());
  const double u = e.cartesian.evaluate(pt);
  const double eu = apply_euler(e.cartesian, cfg).evaluate(pt);
  const double rhs = 4 * (eu + Q / 2 * u);
  return std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs));
}

FischerReport fischer_decompose(const GrushinConfig& cfg, const RationalPolynomial& f, int kCut, int nphi,
                                int sphereOrder) {
  require_harmonic_config(cfg);
  const int k = delta_degree(f, cfg);
  if (kCut < 0) fail(ErrorKind::ParameterOutOfRange, "kCut must be >= 0");
  if (nphi <= 0) nphi = kCut > 32 ? (k + kCut) / 2 + 8 : k / 2 + 24;
  if (sphereOrder <= 0) sphereOrder = kCut > 32 ? k + kCut + 8 : k + 40;
  OmegaGrid grid = make_omega_grid(cfg, nphi, sphereOrder);
  CompiledPolynomial fc(f);
  std::vector<double> fv(grid.points.size());
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    PolarPoint p{1.0, grid.points[i].phi, grid.points[i].omega1, grid.points[i].omega2};
    auto [x, y] = polar_inverse(p, cfg);
    x.insert(x.end(), y.begin(), y.end());
    fv[i] = fc(x.data());
  }
  FischerReport rep;
  rep.cfg = cfg;
  rep.k = k;
  rep.kCut = kCut;
  rep.nphi = nphi;
  rep.sphereOrder = sphereOrder;
  {
    CompensatedSum s;
    for (std::size_t i = 0; i < fv.size(); ++i) s.add(grid.weights[i] * fv[i] * fv[i]);
    rep.fNormSq = s.value();
  }
  std::vector<double> resid = fv;
  const int top = std::max(kCut, k);
  for (int kp = 0; kp <= top; ++kp) {
    const bool inRange = kp <= k && (k - kp) % 2 == 0;
    if (!inRange && kp > kCut) continue;
    std::vector<BasisElement> basis = build_basis(cfg, kp, false);
    GridBasisValues vals(grid, basis);
    std::vector<double> c = vals.coefficients(fv);
    double mass = 0;
    for (double v : c) mass += v * v;
    rep.shells.push_back({kp, inRange, mass});
    if (inRange) {
      rep.inRangeMass += mass;
      std::vector<double> comp = vals.synthesize(c);
      for (std::size_t i = 0; i < resid.size(); ++i) resid[i] -= comp[i];
    } else {
      rep.outOfRangeMass += mass;
    }
  }
  CompensatedSum s;
  for (std::size_t i = 0; i < resid.size(); ++i) s.add(grid.weights[i] * resid[i] * resid[i]);
  rep.residualNorm = std::sqrt(std::max(0.0, s.value()));
  return rep;
}

std::string fischer_report_json(const FischerReport& r) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["config"] = {{"n", r.cfg.n}, {"m", r.cfg.m}, {"alpha", r.cfg.alpha}};
  j["k"] = r.k;
  j["kCut"] = r.kCut;
  j["grid"] = {{"nphi", r.nphi}, {"sphere_order", r.sphereOrder}};
  j["f_norm_sq"] = r.fNormSq;
  j["in_range_mass"] = r.inRangeMass;
  j["out_of_range_mass"] = r.outOfRangeMass;
  j["residual_norm"] = r.residualNorm;
  nlohmann::json shells = nlohmann::json::array();
  for (const auto& s : r.shells) shells.push_back({{"k", s.kprime}, {"in_range", s.inRange}, {"mass", s.mass}});
  j["shells"] = shells;
  return j.dump(2);
}

}  // namespace grushin
