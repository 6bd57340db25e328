#pragma once

#include <utility>
#include <vector>

#include "grushin/ratpoly.hpp"

namespace grushin {

// Exponents of P_n^{(a,b)}; evaluation accepts any real pair.
struct JacobiParams {
  double a = 0;
  double b = 0;
};

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double v);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0;
  double comp_ = 0;
};

struct SignedLog {
  double log_abs = 0;  // -inf when the value is zero
  int sign = 1;        // 0 for an exact zero
  double value() const;
};

double log_gamma(double x);
// log|Gamma(x)| and sign for any non-pole x.
SignedLog signed_log_gamma(double x);
// (x)_n = x (x+1) ... (x+n-1).
SignedLog log_pochhammer(double x, int n);
double pochhammer(double x, int n);
Rational pochhammer(const Rational& x, int n);
Rational factorial(int n);

double jacobi_eval(int deg, JacobiParams p, double x);
// P_deg and its x-derivative.
std::pair<double, double> jacobi_eval_with_derivative(int deg, JacobiParams p, double x);
// P_0 .. P_maxdeg at x.
void jacobi_sequence(int maxdeg, JacobiParams p, double x, double* out);

double gegenbauer_eval(int deg, double lambda, double x);
// C_deg and its derivative.
std::pair<double, double> gegenbauer_eval_with_derivative(int deg, double lambda, double x);

// Coefficients c_s with P_n^{(a,b)}(t) = sum_s c_s ((1-t)/2)^s.
std::vector<Rational> jacobi_coefficients_half_shift(int deg, const Rational& a, const Rational& b);
// Coefficients g_i with C_n^{(lambda)}(t) = sum_i g_i t^{n-2i}.
std::vector<Rational> gegenbauer_coefficients(int deg, const Rational& lambda);

// Integral over [0, pi/2] of sin^{2a+1} cos^{2b+1} P_n^{(a,b)}(cos 2phi)^2.
double norm_B(int deg, JacobiParams p);
double log_norm_B(int deg, JacobiParams p);

double normalized_g(int deg, JacobiParams p, double x);
// 0.5 log of the Gamma-ratio prefactor of normalized_g.
double log_normalized_g_prefactor(int deg, JacobiParams p);

// Integral over [0, pi/2] of P_n^{(gamma,beta)}(cos 2theta)^2 sin^{2alpha+1} cos^{2beta+1}.
double connection_I(int deg, double gamma, double alpha, double beta);
// Closed form valid for alpha = gamma - 1, gamma > 0.
double connection_I_shifted_closed(int deg, double gamma, double beta);

// Integral over [0, pi] of C_deg^{(lambda)}(cos theta)^2 sin^{2 mu}.
double gegenbauer_J(int deg, double lambda, double mu);
// Orthogonality norm: gegenbauer_J with mu = lambda, closed form.
double gegenbauer_norm(int deg, double lambda);
// b_deg^{(lambda)} = gegenbauer_norm^{-1/2}.
double gegenbauer_b(int deg, double lambda);

}  // namespace grushin
