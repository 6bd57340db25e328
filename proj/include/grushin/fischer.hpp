#pragma once

#include <string>
#include <vector>

#include "grushin/config.hpp"
#include "grushin/harmonics.hpp"
#include "grushin/ratpoly.hpp"

namespace grushin {

// Sum_p rho^{2p} u_{k-2p}; shells[p] holds coordinates of u_{k-2p} in the basis of H_{k-2p}.
struct SpectralRep {
  GrushinConfig cfg;
  int k = 0;
  std::vector<std::vector<Rational>> shells;

  static SpectralRep zero(const GrushinConfig& cfg, int k);
  bool is_zero() const;
  friend bool operator==(const SpectralRep& a, const SpectralRep& b) { return a.k == b.k && a.shells == b.shells; }
};

// Dimension of H_k as a machine integer.
std::size_t harmonic_dimension(const GrushinConfig& cfg, int k);

// Perturbed operator on shell decompositions: degree k -> k-2.
SpectralRep spectral_L(const SpectralRep& rep);
// Multiplication by rho^2: degree k -> k+2.
SpectralRep multiply_rho2(const SpectralRep& rep);
// Eigenvalue of spectral_L on rho^{2p} u_{k-2p}.
Rational spectral_L_factor(const GrushinConfig& cfg, int k, int p);
// (2j)!!/(2j-2v)!! * (Q+2k-2j-2)!!/(Q+2k-2j-2v-2)!!, zero when v > j.
Rational power_coefficient(const GrushinConfig& cfg, int k, int v, int j);
Integer double_factorial(long n);

struct ProjCoefficients {
  int k = 0;
  int ell = 0;
  std::vector<Rational> alphas;
};
ProjCoefficients proj_coefficients(const GrushinConfig& cfg, int k, int ell);
// sum_j alpha_j rho^{2j} L^{j+ell}.
SpectralRep apply_proj(const ProjCoefficients& pc, const SpectralRep& rep);

struct ProjResidual {
  int k = 0;
  int ell = 0;
  int shell = 0;
  Rational value;
};
struct ProjIdentityReport {
  GrushinConfig cfg;
  int k = 0;
  std::size_t checked = 0;
  std::vector<ProjResidual> nonzero;
  bool pass() const { return nonzero.empty(); }
};
ProjIdentityReport verify_proj_identity(const GrushinConfig& cfg, int k);

// Residuals of the three commutation relations on rho^a g_k.
struct Sl2Residual {
  Rational lRho2;
  Rational lEuler;
  Rational rho2Euler;
  bool zero() const { return lRho2 == 0 && lEuler == 0 && rho2Euler == 0; }
};
Sl2Residual sl2_commutator_check(const GrushinConfig& cfg, const Rational& a, int k);
// Coefficient of rho^{a-2} g in L(rho^a g): (a-k)(a+k+Q-2).
Rational sl2_symbol(const GrushinConfig& cfg, const Rational& a, int k);

// [L, rho^2] u - 4 (E + Q/2) u at a Cartesian point, L evaluated in polar form, E u from the
// exact Euler operator applied to the Cartesian polynomial. Relative.
double sl2_pointwise_residual(const BasisElement& e, const std::vector<double>& x, const std::vector<double>& y);

struct FischerShell {
  int kprime = 0;
  bool inRange = false;
  double mass = 0;
};
struct FischerReport {
  GrushinConfig cfg;
  int k = 0;
  int kCut = 0;
  int nphi = 0;
  int sphereOrder = 0;
  double fNormSq = 0;
  double inRangeMass = 0;
  double outOfRangeMass = 0;
  double residualNorm = 0;
  std::vector<FischerShell> shells;
};
// Grid resolution defaults to a value fixed by k alone, so reports for different kCut share one grid.
FischerReport fischer_decompose(const GrushinConfig& cfg, const RationalPolynomial& f, int kCut, int nphi = 0,
                                int sphereOrder = 0);
std::string fischer_report_json(const FischerReport& r);

}  // namespace grushin
