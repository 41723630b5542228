#pragma once

namespace sigscore {

// Regularized lower incomplete gamma P(a, x); Q is its complement. Series
// expansion for x < a + 1, modified Lentz continued fraction otherwise,
// both iterated to an absolute tolerance of 1e-15.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b) by continued fraction.
double regularized_beta(double a, double b, double x);

// Survival function of the chi-square distribution.
double chi_square_sf(double x, double df);

// Survival function of the F distribution with (df1, df2) degrees of freedom.
double f_sf(double x, double df1, double df2);

}  // namespace sigscore
