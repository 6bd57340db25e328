#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "grushin/config.hpp"
#include "grushin/quadrature.hpp"
#include "grushin/ratpoly.hpp"

namespace grushin {

struct PolarPoint {
  double rho = 0;
  double phi = 0;
  std::vector<double> omega1;
  std::vector<double> omega2;  // empty for m = 1
};

// Forward map; throws OriginUndefined at (0, 0). For m = 1, phi in (0, pi) carries the sign of y.
PolarPoint polar_map(const std::vector<double>& x, const std::vector<double>& y, const GrushinConfig& cfg);
std::pair<std::vector<double>, std::vector<double>> polar_inverse(const PolarPoint& p, const GrushinConfig& cfg);
// psi(phi) = sin^{2 alpha/(alpha+1)} phi.
double angle_psi(double phi, const GrushinConfig& cfg);
double gauge_norm(const std::vector<double>& x, const std::vector<double>& y, const GrushinConfig& cfg);

// One (ell, j) block of H_k. For m = 1, j = 0 and the profile is Gegenbauer of degree ktilde.
struct Shell {
  int k = 0;
  int ell = 0;
  int j = 0;
  int ktilde = 0;
  double mu = 0;      // Jacobi a-parameter (m >= 2)
  double gamma = 0;   // so the Jacobi b-parameter is gamma - 1 (m >= 2)
  double lambda = 0;  // Gegenbauer order (m = 1)
  double b = 0;       // normalization constant
};

struct HarmonicIndex {
  int k = 0;
  int ell = 0;
  int j = 0;
  int p = 1;  // 1..d_ell(n)
  int q = 1;  // 1..d_j(m)
  int ktilde = 0;
  double mu = 0;
  double gamma = 0;
  friend bool operator==(const HarmonicIndex& a, const HarmonicIndex& b) {
    return a.k == b.k && a.ell == b.ell && a.j == b.j && a.p == b.p && a.q == b.q;
  }
};

std::vector<Shell> enumerate_shells(const GrushinConfig& cfg, int k);
Shell make_shell(const GrushinConfig& cfg, int k, int ell, int j);
std::vector<HarmonicIndex> enumerate_indices(const GrushinConfig& cfg, int k);

// h_{k,ell,j}(phi) without the normalization constant, and its first two derivatives.
double shell_profile(const GrushinConfig& cfg, const Shell& s, double phi);
struct ProfileJet {
  double h = 0;
  double dh = 0;
  double d2h = 0;
};
ProfileJet shell_profile_jet(const GrushinConfig& cfg, const Shell& s, double phi);

// d_ell(n), the dimension of degree-ell spherical harmonics on S^{n-1}.
Integer spherical_dimension(int n, int ell);
Integer binomial(long top, long bottom);  // zero outside 0 <= bottom <= top

struct Dims {
  Integer dimP;
  Integer dimH;
};
// Binomial sum.
Dims dims(const GrushinConfig& cfg, int k);
// Power-series coefficients of the generating functions.
Dims dims_series(const GrushinConfig& cfg, int k);
// dimH by the explicit two-case formula.
Integer dim_harmonic_explicit(const GrushinConfig& cfg, int k);

// Orthogonal solid harmonics of degree ell on R^n with squared norms for the normalized sphere measure.
struct SphericalBasis {
  int n = 0;
  int ell = 0;
  std::vector<RationalPolynomial> polys;  // variables x_1..x_n (nx = n, ny = 0)
  std::vector<Rational> sq_norms;
  std::vector<CompiledPolynomial> fast;
};
const SphericalBasis& spherical_basis(int n, int ell);

// Reproducing kernel of degree-k spherical harmonics on S^{n-1}.
double kernel_K(int n, int k, double cosTau);

struct BasisElement {
  GrushinConfig cfg;
  HarmonicIndex index;
  Shell shell;
  RationalPolynomial cartesian;
  const RationalPolynomial* harmonicX = nullptr;  // Y_{ell,p} as a solid harmonic
  const RationalPolynomial* harmonicY = nullptr;  // Y_{j,q}; null for m = 1
  const CompiledPolynomial* fastX = nullptr;
  const CompiledPolynomial* fastY = nullptr;
  double normConstant = 0;
  // 1 / (|Y|_{L2(S^{n-1})} |Z|_{L2(S^{m-1})}).
  double angularScale = 1;

  // rho^k h Y Z at rho = 1 (unnormalized).
  double trigEval(const OmegaPoint& pt) const;
  // Orthonormal in L^2(Omega, dOmega).
  double normalizedEval(const OmegaPoint& pt) const { return normConstant * angularScale * trigEval(pt); }
  OmegaFunction omega_function(bool normalized) const;
};

BasisElement build_basis_element(const GrushinConfig& cfg, const HarmonicIndex& index);
std::vector<BasisElement> build_basis(const GrushinConfig& cfg, int k, bool withCartesian = true);

// Quadrature grid on Omega exact for polynomial degree up to about `order`.
// Product structure: point i sits at phis[phiIdx[i]], sphere nodes idx1[i] and idx2[i].
struct OmegaGrid {
  GrushinConfig cfg;
  std::vector<OmegaPoint> points;
  std::vector<double> weights;
  std::vector<double> phis;
  std::vector<int> phiIdx, idx1, idx2;
  const SphereRule* sphere1 = nullptr;
  const SphereRule* sphere2 = nullptr;
};
OmegaGrid make_omega_grid(const GrushinConfig& cfg, int nphi, int sphereOrder);

// Values of normalized basis elements on a grid, computed from cached factors.
class GridBasisValues {
 public:
  GridBasisValues(const OmegaGrid& grid, const std::vector<BasisElement>& basis);
  double value(std::size_t element, std::size_t point) const;
  // <f, e_i> for each element, f given by its grid values.
  std::vector<double> coefficients(const std::vector<double>& fvalues) const;
  // sum_i c_i e_i at every grid point.
  std::vector<double> synthesize(const std::vector<double>& coeffs) const;

 private:
  const OmegaGrid& grid_;
  std::vector<double> scale_;
  std::vector<int> shellSlot_, xSlot_, ySlot_;
  std::vector<std::vector<double>> profile_, xv_, yv_;
};

// Gram matrix of normalized elements (factorized: phi-integrals and sphere blocks).
std::vector<std::vector<double>> basis_gram(const GrushinConfig& cfg, const std::vector<BasisElement>& a,
                                            const std::vector<BasisElement>& b);
// Integral of h^2 against the phi-part of dOmega by quadrature.
double profile_sq_norm(const GrushinConfig& cfg, const Shell& s);
// Closed form of the same integral.
double profile_sq_norm_closed(const GrushinConfig& cfg, const Shell& s);

double kernel_G(const GrushinConfig& cfg, int k, const OmegaPoint& pt1, const OmegaPoint& pt2);

using OmegaEvaluator = std::function<double(const OmegaPoint&)>;
// Sum <f, e_i> e_i over the orthonormal basis, inner products on `grid`.
OmegaEvaluator project_Pk(const GrushinConfig& cfg, int k, const OmegaEvaluator& f, const OmegaGrid& grid);
OmegaEvaluator project_Pk(const GrushinConfig& cfg, int k, const OmegaEvaluator& f);
// Values of the kernel-integral form of the projection at the given points.
std::vector<double> project_Pk_kernel(const GrushinConfig& cfg, int k, const OmegaEvaluator& f,
                                      const std::vector<OmegaPoint>& at, const OmegaGrid& grid);

// Delta_sigma (h Y Z) / (Y Z) at phi, from the polar form with the sphere eigenvalues.
double delta_sigma_profile(const GrushinConfig& cfg, const Shell& s, double phi);

// Relative residual of the Gegenbauer addition formula; throws DegenerateParameter for u = 2 or v = 2.
double addition_formula_residual(double u, double v, int k, double phi, double xi, double theta1, double theta2);
double addition_formula_lhs(double u, double v, int k, double phi, double xi, double theta1, double theta2);
double addition_formula_rhs(double u, double v, int k, double phi, double xi, double theta1, double theta2);

// Max over a phi-grid of sum b^2 h^2 (ell+1)^{n-2} (j+1)^{m-2}.
double kernel_diag_sup(const GrushinConfig& cfg, int k, int gridSize);

// Least-squares slope of log(value) against log(k+1).
struct GrowthFit {
  double slope = 0;
  double intercept = 0;  // log of the fitted constant
  double rSquared = 0;
};
// Needs at least four points with positive values and distinct k.
GrowthFit growth_fit(const std::vector<int>& ks, const std::vector<double>& values);
// Same fit against log(x) for positive real abscissae.
GrowthFit growth_fit_log(const std::vector<double>& xs, const std::vector<double>& values);

// Uniform phi-grid over the closed interval for the configuration.
std::vector<double> phi_grid(const GrushinConfig& cfg, int gridSize);
double phi_upper(const GrushinConfig& cfg);

}  // namespace grushin
