#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grushin/config.hpp"
#include "grushin/ratpoly.hpp"

namespace grushin {

// Pinned tolerances.
inline constexpr double kBernsteinConstant = 12.0;
inline constexpr double kUnitBoundSlack = 1e-12;
inline constexpr double kLegendreSlack = 1e-12;
inline constexpr double kRatioBoundSlack = 1e-12;
inline constexpr double kClosedFormTol = 1e-10;
inline constexpr double kShiftedClosedTol = 1e-12;
inline constexpr double kGrowthSlack = 0.35;
inline constexpr double kAsymptoticSlopeSlack = 0.3;
inline constexpr double kAsymptoticConstantTol = 0.15;
inline constexpr double kBoundedSlope = 0.1;

struct BoundRow {
  std::vector<double> params;  // same order as BoundReport::paramNames
  int k = 0;
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  bool pass = true;
};

struct BoundReport {
  std::string boundName;
  std::string parameterGrid;
  std::vector<std::string> paramNames;
  std::vector<BoundRow> rows;
  double worstRatio = 0;
  std::string worstPoint;
  std::optional<double> fittedExponent;
  std::optional<double> claimedExponent;
  bool covered = true;  // false when no bound is claimed; pass is then true and the report is informational
  std::string note;
  bool pass = false;

  // Folds a row into worstRatio / worstPoint / pass.
  void add(BoundRow row);
};

std::string bound_report_csv(const BoundReport& r);
std::string bound_report_json(const BoundReport& r);

// Chebyshev-Lobatto points cos(pi i / (N-1)).
std::vector<double> chebyshev_grid(int gridSize);

// sup |(1-x^2)^{1/4} g_n^{(a,b)}(x)| (2n+a+b+1)^{1/4} over a, b on a grid of spacing `step`, n <= nMax.
// Pass iff the sup is below kBernsteinConstant. One row per (a, b), k = the n attaining it.
BoundReport bernstein_check(double aMax, double bMax, int nMax, int gridSize, double step = 0.5);
// sup |g_n^{(a,b)}| for integer a, b <= abMax; pass iff <= 1 + kUnitBoundSlack.
BoundReport unit_bound_check(int nMax, int abMax = 20, int gridSize = 2001);
// (1-x^2)^{1/4}|P_n| against 2/sqrt(pi(2n+1)); pass iff lhs <= rhs + kLegendreSlack.
BoundReport legendre_check(int nMax, int gridSize = 2001);

// I/B against ((2n+gamma+beta+1)/gamma)^{gamma-alpha} for alpha sampled in (gamma-1, gamma).
BoundReport kl1_check(double gamma, double beta, int nMax, int alphaSamples = 9);
// (I/B) (2n+gamma+beta+1)^{-(gamma-alpha)/(1-eps)}: worstRatio is the empirical constant.
// Pass iff finite and the tail growth slope is <= kBoundedSlope.
BoundReport dxsa1_check(int gamma, int beta, double alpha, double epsilon, int nMax);

// Per-term ratio (j-2k)(j+2mu-2k)/(j(j+2lambda)).
Rational term_ratio(const Rational& lambda, const Rational& mu, int j, int k);
// The same ratio from the unreduced Pochhammer expression; nullopt when a factor vanishes.
std::optional<Rational> term_ratio_unreduced(const Rational& lambda, const Rational& mu, int j, int k);
// Exact: ratio <= 1 and reduced == unreduced for 1 <= j <= jMax, 0 <= k <= (j-1)/2. Needs mu <= lambda.
BoundReport term_ratio_check(const Rational& lambda, const Rational& mu, int jMax);

// Integral over [0, pi] of |b^{(lambda+ell)}_{j-ell} C^{(lambda+ell)}_{j-ell}(cos)|^2 sin^{2(mu+ell)}.
double shifted_gegenbauer_norm(int j, int ell, double lambda, double mu);
// Exact per-term ratio on the binary rationals of (lambda, mu) when mu <= lambda, monotonicity in ell, and the
// ell = 0 growth: bounded for lambda-1/2 < mu <= lambda, slope 2(lambda-mu)-1 for mu < lambda-1/2.
BoundReport iin_check(double lambda, double mu, int jMax, int ellMax);
// Slope and leading constant of J_j^{(lambda; mu)}; throws CriticalLine at mu = lambda - 1/2.
BoundReport j_asymptotic_check(double lambda, double mu, int jMax);
struct JAsymptotic {
  double exponent = 0;
  double constant = 0;
};
JAsymptotic j_asymptotic(double lambda, double mu);

// Psi: psi^{-beta}; Sin: sin^{-beta}; Auto picks Sin for m = 1 and Psi otherwise.
enum class WeightKind { Auto, Psi, Sin };
WeightKind resolve_weight(const GrushinConfig& cfg, WeightKind kind);
// Supremum of admissible beta: the weighted measure is integrable iff beta < threshold.
double weight_threshold(const GrushinConfig& cfg, WeightKind kind);
// lambda_max of W_ij = <w e_i, w e_j> over the orthonormal basis of H_k; W is diagonal.
double projector_weighted_norm(const GrushinConfig& cfg, int k, double beta, WeightKind kind = WeightKind::Auto);
// The diagonal entry of W for one shell, by Gauss-Jacobi quadrature.
double weighted_shell_norm(const GrushinConfig& cfg, int k, int ell, int j, double beta, WeightKind kind);

// Fitted exponent of projector_weighted_norm on [kMin, kMax] against the claimed exponent.
BoundReport projector_growth_check(const GrushinConfig& cfg, double beta, int kMin, int kMax,
                                   WeightKind kind = WeightKind::Auto);
// Fitted exponent of kernel_diag_sup on [kMin, kMax] against n+m-2 or m+2.
BoundReport kernel_growth_check(const GrushinConfig& cfg, int kMin, int kMax, int gridSize = 401);
// Claimed exponent for kernel_diag_sup, or nullopt when no bound applies.
std::optional<double> kernel_growth_claim(const GrushinConfig& cfg);

// norm_B, connection_I, gegenbauer_J against Gauss-Jacobi quadrature on `cells` parameter cells each,
// and the shifted closed form against the finite sum. Row params: (form, deg, p1, p2, p3),
// form 0 = norm_B, 1 = connection_I, 2 = gegenbauer_J, 3 = shifted closed form.
BoundReport closed_forms_check(int cells = 200);

// Quadrature values used by closed_forms_check.
double norm_B_quadrature(int deg, double a, double b);
double connection_I_quadrature(int deg, double gamma, double alpha, double beta);
double gegenbauer_J_quadrature(int deg, double lambda, double mu);

}  // namespace grushin
