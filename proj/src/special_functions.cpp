#include "sigscore/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sigscore {

namespace {

constexpr double kTolerance = 1e-15;
constexpr int kMaxIterations = 500;
constexpr double kTiny = 1e-300;

// P(a, x) by its power series around 0.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double denom = a;
  for (int n = 0; n < kMaxIterations; ++n) {
    denom += 1.0;
    term *= x / denom;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kTolerance) {
      break;
    }
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by the Legendre continued fraction, evaluated with the modified
// Lentz algorithm.
double gamma_q_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) {
      d = kTiny;
    }
    c = b + an / c;
    if (std::abs(c) < kTiny) {
      c = kTiny;
    }
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kTolerance) {
      break;
    }
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double beta_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) {
    d = kTiny;
  }
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) {
      d = kTiny;
    }
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) {
      c = kTiny;
    }
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) {
      d = kTiny;
    }
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) {
      c = kTiny;
    }
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kTolerance) {
      break;
    }
  }
  return h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0 || !std::isfinite(a)) {
    throw std::invalid_argument("regularized_gamma_p requires a > 0 and x >= 0");
  }
  if (x == 0.0) {
    return 0.0;
  }
  if (!std::isfinite(x)) {
    return 1.0;
  }
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0 || !std::isfinite(a)) {
    throw std::invalid_argument("regularized_gamma_q requires a > 0 and x >= 0");
  }
  if (x == 0.0) {
    return 1.0;
  }
  if (!std::isfinite(x)) {
    return 0.0;
  }
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_fraction(a, x);
}

double regularized_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) {
    throw std::invalid_argument("regularized_beta requires a > 0 and b > 0");
  }
  if (x < 0.0 || x > 1.0) {
    throw std::invalid_argument("regularized_beta requires x in [0, 1]");
  }
  if (x == 0.0 || x == 1.0) {
    return x;
  }
  const double front =
      std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
               a * std::log(x) + b * std::log1p(-x));
  // Continued fraction converges fast for x < (a+1)/(a+b+2); use the
  // symmetry I_x(a,b) = 1 - I_{1-x}(b,a) otherwise.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_fraction(b, a, 1.0 - x) / b;
}

double chi_square_sf(double x, double df) {
  if (df <= 0.0) {
    throw std::invalid_argument("chi_square_sf requires df > 0");
  }
  if (x <= 0.0) {
    return 1.0;
  }
  return regularized_gamma_q(0.5 * df, 0.5 * x);
}

double f_sf(double x, double df1, double df2) {
  if (df1 <= 0.0 || df2 <= 0.0) {
    throw std::invalid_argument("f_sf requires positive degrees of freedom");
  }
  if (x <= 0.0) {
    return 1.0;
  }
  if (!std::isfinite(x)) {
    return 0.0;
  }
  return regularized_beta(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * x));
}

}  // namespace sigscore
