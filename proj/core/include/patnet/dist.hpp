#pragma once

namespace patnet {

/// Standard normal CDF and two-sided p-value, erfc-based (|err| < 1e-15).
double normal_cdf(double x);
double normal_two_sided_p(double z);

/// Regularized incomplete beta I_x(a, b) by continued fraction, accurate to
/// about 1e-13; the workhorse behind the Student-t and F tails.
double incomplete_beta(double a, double b, double x);

/// Two-sided p-value of a Student-t statistic with nu degrees of freedom.
double student_t_two_sided_p(double t, double nu);

/// Survival function of chi-squared with 1 degree of freedom.
double chi2_1df_sf(double x);

/// Natural log of the binomial coefficient, via lgamma.
double log_choose(int n, int k);

}  // namespace patnet
