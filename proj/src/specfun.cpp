#include "grushin/specfun.hpp"

#include <math.h>

#include <cmath>
#include <limits>

namespace grushin {

void CompensatedSum::add(double v) {
  double t = sum_ + v;
  if (std::fabs(sum_) >= std::fabs(v)) comp_ += (sum_ - t) + v;
  else comp_ += (v - t) + sum_;
  sum_ = t;
}

double SignedLog::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_abs);
}

double log_gamma(double x) {
  if (!(x > 0)) fail(ErrorKind::DomainError, "log_gamma needs x > 0");
  int s;
  return ::lgamma_r(x, &s);
}

SignedLog signed_log_gamma(double x) {
  if (x <= 0 && x == std::floor(x)) fail(ErrorKind::DomainError, "Gamma pole");
  int s;
  double v = ::lgamma_r(x, &s);
  return {v, s};
}

SignedLog log_pochhammer(double x, int n) {
  if (n <= 0) return {0.0, 1};
  if (x > 0) {
    int s;
    return {::lgamma_r(x + n, &s) - ::lgamma_r(x, &s), 1};
  }
  SignedLog r{0.0, 1};
  for (int i = 0; i < n; ++i) {
    double v = x + i;
    if (v == 0) return {-std::numeric_limits<double>::infinity(), 0};
    r.log_abs += std::log(std::fabs(v));
    if (v < 0) r.sign = -r.sign;
  }
  return r;
}

double pochhammer(double x, int n) { return log_pochhammer(x, n).value(); }

Rational pochhammer(const Rational& x, int n) {
  Rational r = 1;
  for (int i = 0; i < n; ++i) r *= x + i;
  return r;
}

Rational factorial(int n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(f);
}

namespace {

double jacobi_by_series(int n, double a, double b, double x) {
  // (a+1)_n/n! sum_s (-n)_s (n+a+b+1)_s / ((a+1)_s s!) ((1-x)/2)^s
  double z = (1 - x) / 2, term = 1, sum = 1;
  for (int s = 0; s < n; ++s) {
    term *= (s - n) * (n + a + b + 1 + s) / ((a + 1 + s) * (s + 1)) * z;
    sum += term;
  }
  double lead = 1;
  for (int i = 0; i < n; ++i) lead *= (a + 1 + i) / (i + 1);
  return lead * sum;
}

}  // namespace

void jacobi_sequence(int maxdeg, JacobiParams p, double x, double* out) {
  const double a = p.a, b = p.b;
  out[0] = 1.0;
  if (maxdeg == 0) return;
  out[1] = (a + 1) + (a + b + 2) * (x - 1) / 2;
  for (int n = 1; n < maxdeg; ++n) {
    double s = 2 * n + a + b;
    double a1 = 2 * (n + 1) * (n + a + b + 1) * s;
    if (a1 == 0) {
      out[n + 1] = jacobi_by_series(n + 1, a, b, x);
      continue;
    }
    double a2 = (s + 1) * (a * a - b * b);
    double a3 = s * (s + 1) * (s + 2);
    double a4 = 2 * (n + a) * (n + b) * (s + 2);
    out[n + 1] = ((a2 + a3 * x) * out[n] - a4 * out[n - 1]) / a1;
  }
}

double jacobi_eval(int deg, JacobiParams p, double x) {
  if (deg < 0) fail(ErrorKind::ParameterOutOfRange, "negative degree");
  if (deg == 0) return 1.0;
  double p0 = 1.0, p1 = (p.a + 1) + (p.a + p.b + 2) * (x - 1) / 2;
  const double a = p.a, b = p.b;
  for (int n = 1; n < deg; ++n) {
    double s = 2 * n + a + b;
    double a1 = 2 * (n + 1) * (n + a + b + 1) * s;
    if (a1 == 0) return jacobi_by_series(deg, a, b, x);
    double a2 = (s + 1) * (a * a - b * b);
    double a3 = s * (s + 1) * (s + 2);
    double a4 = 2 * (n + a) * (n + b) * (s + 2);
    double p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

std::pair<double, double> jacobi_eval_with_derivative(int deg, JacobiParams p, double x) {
  double v = jacobi_eval(deg, p, x);
  if (deg == 0) return {v, 0.0};
  double d = (deg + p.a + p.b + 1) / 2 * jacobi_eval(deg - 1, {p.a + 1, p.b + 1}, x);
  return {v, d};
}

double gegenbauer_eval(int deg, double lambda, double x) {
  if (lambda == 0) fail(ErrorKind::DegenerateParameter, "Gegenbauer order 0");
  if (deg < 0) fail(ErrorKind::ParameterOutOfRange, "negative degree");
  if (deg == 0) return 1.0;
  double c0 = 1.0, c1 = 2 * lambda * x;
  for (int n = 2; n <= deg; ++n) {
    double c2 = (2 * x * (n + lambda - 1) * c1 - (n + 2 * lambda - 2) * c0) / n;
    c0 = c1;
    c1 = c2;
  }
  return c1;
}

std::pair<double, double> gegenbauer_eval_with_derivative(int deg, double lambda, double x) {
  double v = gegenbauer_eval(deg, lambda, x);
  if (deg == 0) return {v, 0.0};
  return {v, 2 * lambda * gegenbauer_eval(deg - 1, lambda + 1, x)};
}

std::vector<Rational> jacobi_coefficients_half_shift(int deg, const Rational& a, const Rational& b) {
  std::vector<Rational> c(deg + 1);
  Rational lead = pochhammer(Rational(a + 1), deg) / factorial(deg);
  Rational t = 1;  // (-n)_s (n+a+b+1)_s / ((a+1)_s s!)
  for (int s = 0; s <= deg; ++s) {
    c[s] = lead * t;
    if (s < deg) t *= Rational(s - deg) * (deg + a + b + 1 + s) / ((a + 1 + s) * (s + 1));
  }
  return c;
}

std::vector<Rational> gegenbauer_coefficients(int deg, const Rational& lambda) {
  std::vector<Rational> g;
  for (int i = 0; 2 * i <= deg; ++i) {
    Rational v = pochhammer(lambda, deg - i) / (factorial(i) * factorial(deg - 2 * i));
    Integer two;
    mpz_ui_pow_ui(two.get_mpz_t(), 2, static_cast<unsigned long>(deg - 2 * i));
    v *= Rational(two);
    if (i % 2) v = -v;
    g.push_back(v);
  }
  return g;
}

double log_norm_B(int deg, JacobiParams p) {
  const double a = p.a, b = p.b;
  if (!(a > -1) || !(b > -1)) fail(ErrorKind::ParameterOutOfRange, "norm_B needs a, b > -1");
  if (deg < 0) fail(ErrorKind::ParameterOutOfRange, "negative degree");
  int s;
  double v = ::lgamma_r(deg + a + 1, &s) + ::lgamma_r(deg + b + 1, &s) - ::lgamma_r(deg + 1.0, &s) - std::log(2.0);
  // (2n+a+b+1) Gamma(n+a+b+1) collapses to Gamma(a+b+2) at n = 0.
  if (deg == 0) v -= ::lgamma_r(a + b + 2, &s);
  else v -= std::log(2 * deg + a + b + 1) + ::lgamma_r(deg + a + b + 1, &s);
  return v;
}

double norm_B(int deg, JacobiParams p) { return std::exp(log_norm_B(deg, p)); }

double log_normalized_g_prefactor(int deg, JacobiParams p) {
  int s;
  return 0.5 * (::lgamma_r(deg + 1.0, &s) + ::lgamma_r(deg + p.a + p.b + 1, &s) - ::lgamma_r(deg + p.a + 1, &s) -
                ::lgamma_r(deg + p.b + 1, &s));
}

double normalized_g(int deg, JacobiParams p, double x) {
  if (std::fabs(x) > 1) fail(ErrorKind::DomainError, "normalized_g needs |x| <= 1");
  if (p.a < 0 || p.b < 0) fail(ErrorKind::ParameterOutOfRange, "normalized_g needs a, b >= 0");
  double w = std::pow((1 - x) / 2, p.a / 2) * std::pow((1 + x) / 2, p.b / 2);
  return std::exp(log_normalized_g_prefactor(deg, p)) * w * jacobi_eval(deg, p, x);
}

double connection_I(int n, double gamma, double alpha, double beta) {
  if (!(gamma > -1) || !(alpha > -1) || !(beta > -1))
    fail(ErrorKind::ParameterOutOfRange, "connection_I needs gamma, alpha, beta > -1");
  if (n < 0) fail(ErrorKind::ParameterOutOfRange, "negative degree");
  const double ab = alpha + beta;
  SignedLog lead_num = log_pochhammer(beta + 1, n);
  SignedLog lead_den = log_pochhammer(ab + 2, n);
  CompensatedSum sum;
  for (int k = 0; k <= n; ++k) {
    SignedLog shift = log_pochhammer(gamma - alpha, n - k);
    if (shift.sign == 0) continue;
    // (ab+2k+1)/(ab+1) (ab+1)_k = (ab+2k+1)(ab+2)_{k-1} for k >= 1, and 1 at k = 0.
    double lf = 0;
    if (k > 0) lf = std::log(ab + 2 * k + 1) + log_pochhammer(ab + 2, k - 1).log_abs;
    SignedLog up = log_pochhammer(beta + gamma + n + 1, k);
    int s;
    double lc = lead_num.log_abs - lead_den.log_abs + lf + shift.log_abs + up.log_abs - ::lgamma_r(n - k + 1.0, &s) -
                log_pochhammer(beta + 1, k).log_abs - log_pochhammer(ab + n + 2, k).log_abs;
    double lt = 2 * lc + log_norm_B(k, {alpha, beta});
    sum.add(std::exp(lt));
  }
  return sum.value();
}

double connection_I_shifted_closed(int n, double gamma, double beta) {
  if (!(gamma > 0) || !(beta > -1)) fail(ErrorKind::ParameterOutOfRange, "needs gamma > 0, beta > -1");
  int s;
  double v = ::lgamma_r(gamma + n + 1, &s) + ::lgamma_r(beta + n + 1, &s) - std::log(2 * gamma) -
             ::lgamma_r(gamma + beta + n + 1, &s) - ::lgamma_r(n + 1.0, &s);
  return std::exp(v);
}

double gegenbauer_J(int j, double lambda, double mu) {
  if (!(lambda > 0) || !(mu > -0.5)) fail(ErrorKind::ParameterOutOfRange, "gegenbauer_J needs lambda > 0, mu > -1/2");
  if (mu == 0) fail(ErrorKind::DegenerateParameter, "gegenbauer_J prefactor pole at mu = 0");
  if (j < 0) fail(ErrorKind::ParameterOutOfRange, "negative degree");
  int s;
  double lp = 0.5 * std::log(M_PI) + ::lgamma_r(mu + 0.5, &s) - std::log(std::fabs(mu)) - ::lgamma_r(mu + 1, &s);
  int psign = mu > 0 ? 1 : -1;
  CompensatedSum sum;
  for (int k = 0; 2 * k <= j; ++k) {
    SignedLog dmu = log_pochhammer(lambda - mu, k);
    if (dmu.sign == 0) continue;
    int r = j - 2 * k;
    SignedLog two_mu = log_pochhammer(2 * mu, r);
    double lin = j + mu - 2 * k;
    double lsq = log_pochhammer(lambda, j - k).log_abs + dmu.log_abs - log_pochhammer(mu + 1, j - k).log_abs -
                 ::lgamma_r(k + 1.0, &s);
    double lt = lp + 2 * lsq + std::log(std::fabs(lin)) + two_mu.log_abs - ::lgamma_r(r + 1.0, &s);
    int sign = psign * (lin > 0 ? 1 : -1) * two_mu.sign;
    sum.add(sign * std::exp(lt));
  }
  return sum.value();
}

double gegenbauer_norm(int j, double lambda) {
  if (!(lambda > -0.5) || lambda == 0) fail(ErrorKind::ParameterOutOfRange, "gegenbauer_norm needs lambda > -1/2, nonzero");
  SignedLog g2 = signed_log_gamma(j + 2 * lambda);
  SignedLog gl = signed_log_gamma(lambda);
  double lin = j + lambda;
  int s;
  double v = std::log(M_PI) + (1 - 2 * lambda) * std::log(2.0) + g2.log_abs - ::lgamma_r(j + 1.0, &s) -
             std::log(std::fabs(lin)) - 2 * gl.log_abs;
  return std::exp(v);
}

double gegenbauer_b(int j, double lambda) { return 1.0 / std::sqrt(gegenbauer_norm(j, lambda)); }

}  // namespace grushin
