#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "grushin/config.hpp"
#include "grushin/ratpoly.hpp"

namespace grushin {

// Gauss rule for the weight (1-t)^A (1+t)^B on [-1, 1].
struct QuadRule {
  double weightA = 0;
  double weightB = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

const QuadRule& gauss_jacobi_rule(double A, double B, int npoints);
// Total mass 2^{A+B+1} B(A+1, B+1).
double jacobi_weight_mass(double A, double B);

struct EigenResult {
  std::vector<double> values;                // ascending
  std::vector<std::vector<double>> vectors;  // vectors[i] belongs to values[i]
};

EigenResult sym_eigen(const std::vector<std::vector<double>>& matrix, bool want_vectors = false);

// Normalized average over S^{n-1} of x^powers.
Rational sphere_monomial_integral(int n, const std::vector<int>& powers);
// Normalized average over the sphere of P*Q; all variables of P and Q are sphere coordinates.
Rational sphere_product_integral(const RationalPolynomial& P, const RationalPolynomial& Q);
// |S^{n-1}|.
double sphere_area(int n);

// Product rule on S^{n-1}, exact for polynomials of degree <= order.
struct SphereRule {
  int dim = 0;
  std::vector<std::vector<double>> points;
  std::vector<double> weights;  // sum to |S^{n-1}|
};
const SphereRule& sphere_rule(int n, int order);

// Point on the gauge sphere: phi in (0, pi/2) for m >= 2, in (0, pi) for m = 1.
struct OmegaPoint {
  double phi = 0;
  std::vector<double> omega1;
  std::vector<double> omega2;  // empty for m = 1
};

struct AngularFactor {
  std::shared_ptr<const RationalPolynomial> exact;  // variables are the sphere coordinates
  std::shared_ptr<const CompiledPolynomial> fast;
  static AngularFactor from(RationalPolynomial p);
  explicit operator bool() const { return static_cast<bool>(exact); }
};

// coeff * sin^sinPower(phi) * cos^cosPower(phi) * profile(t) * A1(omega1) * A2(omega2).
// For m >= 2 t = cos 2phi; for m = 1 t = cos phi and cosPower counts powers of t.
struct OmegaTerm {
  double coeff = 1;
  double sinPower = 0;
  int cosPower = 0;
  std::function<double(double)> profile;
  int profileDegree = 0;
  AngularFactor angular1;
  AngularFactor angular2;
};

struct OmegaFunction {
  GrushinConfig cfg;
  std::vector<OmegaTerm> terms;

  double operator()(const OmegaPoint& pt) const;
  // Restriction of a polynomial in (x, y) to rho = 1.
  static OmegaFunction from_polynomial(const GrushinConfig& cfg, const RationalPolynomial& p);
  static OmegaFunction constant(const GrushinConfig& cfg, double c);
  OmegaFunction& operator+=(const OmegaFunction& o);
  OmegaFunction scaled(double c) const;
};

// <f, psi^psiShift sin^sinShift g> in L^2(Omega, dOmega); resolution <= 0 picks the default.
double omega_inner_product(const OmegaFunction& f, const OmegaFunction& g, double psiShift, const GrushinConfig& cfg,
                           int resolution = 0, double sinShift = 0);

// Sampled integral of F over Omega with dOmega.
// Nodes and weights for the phi-part of dOmega. For alpha = 0 this is Gauss-Jacobi in cos(2 phi)
// (cos(phi) for m = 1). For alpha > 0 it is Gauss-Legendre in v with phi = c v^{alpha+1} near each
// end where sin(phi) vanishes, which makes the powers sin^{l/(alpha+1)} smooth.
struct PhiRule {
  std::vector<double> phis;
  std::vector<double> weights;
};
PhiRule omega_phi_rule(const GrushinConfig& cfg, int nphi);

double omega_integrate(const GrushinConfig& cfg, const std::function<double(const OmegaPoint&)>& F, int nphi,
                       int sphereOrder);

// Integral over [0, pi/2] (m >= 2) or [0, pi] (m = 1) of the phi-part of dOmega.
double omega_phi_mass(const GrushinConfig& cfg);
// Total measure of Omega.
double omega_volume(const GrushinConfig& cfg);

}  // namespace grushin
