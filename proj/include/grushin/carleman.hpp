#pragma once

#include <complex>
#include <string>
#include <vector>

#include "grushin/config.hpp"
#include "grushin/harmonics.hpp"
#include "grushin/ratpoly.hpp"

namespace grushin {

inline constexpr double kEigenrelationTol = 1e-8;
inline constexpr double kCarlemanSlope = 0.1;
inline constexpr double kDilationTol = 1e-10;
inline constexpr double kAmplitudeTol = 1e-12;

struct ExponentRow {
  int m = 0;
  int n = 0;
  int alpha = 0;
  Rational p;
  Rational q;
  Rational rThreshold;  // V in L^r with r strictly above this
  std::string family;   // which table row produced the values
  int dimensionD = 0;   // m >= 2 rows: the D in p = 2(D + 1/(alpha+1)) / (D + 2/(alpha+1)); 0 for m = 1
};

// Table row for (cfg); throws UncoveredCase outside the table.
ExponentRow exponents(const GrushinConfig& cfg);
bool exponents_covered(const GrushinConfig& cfg);
// 1/p + 1/q = 1, 1/p - 1/q = 1/r, and for m >= 2 rows 1/r = 1/((alpha+1) D + 1).
bool exponent_identities_hold(const ExponentRow& row);
// Covered rows for m <= mMax, 2 <= n <= nMax, 1 <= alpha <= aMax, ordered by (m, n, alpha).
std::vector<ExponentRow> exponent_table(int mMax, int nMax, int aMax);
// Columns m,n,alpha,p,q,r.
std::string exponent_table_csv(const std::vector<ExponentRow>& rows);
std::string exponent_table_json(const std::vector<ExponentRow>& rows);

struct CarlemanSymbol {
  double s = 0;
  double eta = 0;
  int k = 0;
  int Q = 0;
  std::complex<double> value;
};
// -1/((k-(s+i eta))(k+Q-2+s+i eta)); throws PoleHit when the denominator vanishes.
CarlemanSymbol symbol_a(double s, double eta, int k, int Q);
// |k - s - i eta| in [delta 2^{gamma-2}, 2^gamma].
bool dyadic_support(double s, double eta, int k, int gamma, double delta);

// max over samples of |rho^{2-s} Delta_alpha(rho^s e^{i eta t} u) - (symbol) psi e^{i eta t} u| for the normalized
// element at `index`, with Delta_alpha evaluated both from the polar form and by the Cartesian chain rule.
double eigenrelation_residual(const GrushinConfig& cfg, const HarmonicIndex& index, double s, double eta,
                              const std::vector<PolarPoint>& samplePoints);

// g = amplitude * chi(lambda rho) (lambda rho)^k u(sigma), chi the bump exp(-1/((r - r0)(r1 - r))) on (r0, r1),
// u the normalized basis element number `element` of H_k.
struct CarlemanTestFunction {
  int k = 1;
  int element = 0;
  double r0 = 0.5;
  double r1 = 1.0;
  double amplitude = 1.0;
  double dilation = 1.0;
  std::string family() const;
};

struct CarlemanResult {
  double s = 0;
  double epsilon = 0;
  double logLhs = 0;
  double logRhs = 0;
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
};
// lhs = ||rho^{-s} psi^eps g||_q, rhs = ||rho^{2-s} psi^{-eps} Delta_alpha g||_p, measure rho^{-Q} dx dy.
CarlemanResult carleman_ratio(const GrushinConfig& cfg, double s, double epsilon, const CarlemanTestFunction& g);

struct CarlemanSweep {
  GrushinConfig cfg;
  CarlemanTestFunction g;
  std::vector<CarlemanResult> results;
  double slope = 0;  // fitted exponent of ratio against s
  bool pass() const { return slope <= kCarlemanSlope; }
};
std::vector<double> default_s_grid();
CarlemanSweep carleman_sweep(const GrushinConfig& cfg, double epsilon, const std::vector<double>& sGrid,
                             const CarlemanTestFunction& g);
// Columns n,m,alpha,s,epsilon,family,lhs,rhs,ratio.
std::string carleman_csv(const GrushinConfig& cfg, const CarlemanTestFunction& g,
                         const std::vector<CarlemanResult>& results);

}  // namespace grushin
