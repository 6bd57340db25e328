#pragma once

#include <cmath>
#include <numbers>

// Test oracles independent of the library's quadrature.
namespace oracle {

// Double-exponential (tanh-sinh) rule on (a, b). f(x, b - x) receives the distance to the
// upper end so that factors like sin(pi - x) keep full precision.
template <class F>
double tanh_sinh(F f, double a, double b, double h = 1.0 / 64, double tmax = 4.0) {
  const double half = 0.5 * (b - a);
  double sum = 0;
  const int N = static_cast<int>(tmax / h);
  for (int i = -N; i <= N; ++i) {
    const double t = i * h;
    const double z = 0.5 * std::numbers::pi * std::sinh(t);
    const double w = 0.5 * std::numbers::pi * std::cosh(t) / (std::cosh(z) * std::cosh(z));
    // 1 - tanh z and 1 + tanh z without cancellation.
    const double lo = 2.0 / (std::exp(-2 * z) + 1.0);  // 1 + x
    const double hi = 2.0 / (std::exp(2 * z) + 1.0);   // 1 - x
    const double x = a + half * lo;
    const double xc = half * hi;
    if (!(lo > 0) || !(hi > 0)) continue;
    sum += w * f(x, xc);
  }
  return half * h * sum;
}

// Same rule with f(x, x - a, b - x).
template <class F>
double tanh_sinh_ends(F f, double a, double b, double h = 1.0 / 64, double tmax = 4.0) {
  const double half = 0.5 * (b - a);
  double sum = 0;
  const int N = static_cast<int>(tmax / h);
  for (int i = -N; i <= N; ++i) {
    const double t = i * h;
    const double z = 0.5 * std::numbers::pi * std::sinh(t);
    const double w = 0.5 * std::numbers::pi * std::cosh(t) / (std::cosh(z) * std::cosh(z));
    const double lo = 2.0 / (std::exp(-2 * z) + 1.0);
    const double hi = 2.0 / (std::exp(2 * z) + 1.0);
    if (!(lo > 0) || !(hi > 0)) continue;
    sum += w * f(a + half * lo, half * lo, half * hi);
  }
  return half * h * sum;
}

// Legendre P_n by the three-term recurrence.
inline double legendre(int n, double x) {
  double p0 = 1, p1 = x;
  if (n == 0) return p0;
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// Jacobi P_n^{(a,b)} from the explicit binomial sum; *scale receives the sum of |terms|.
inline double jacobi_explicit(int n, double a, double b, double x, double* scale = nullptr) {
  double sum = 0, mag = 0;
  for (int s = 0; s <= n; ++s) {
    const double c = std::exp(std::lgamma(n + a + 1) - std::lgamma(n - s + 1) - std::lgamma(a + s + 1) +
                              std::lgamma(n + b + 1) - std::lgamma(s + 1) - std::lgamma(n + b - s + 1));
    const double term = c * std::pow((x - 1) / 2, s) * std::pow((x + 1) / 2, n - s);
    sum += term;
    mag += std::abs(term);
  }
  if (scale) *scale = mag;
  return sum;
}

}  // namespace oracle
