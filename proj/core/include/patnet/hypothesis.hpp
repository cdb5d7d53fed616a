#pragma once

#include <span>

namespace patnet {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Pearson correlation with a two-sided t-test p-value (n >= 3).
TestResult pearson_r_test(std::span<const double> x, std::span<const double> y);

/// Two-sample Kolmogorov-Smirnov, two-sided. Uses the exact path-counting
/// distribution when both samples have fewer than 25 observations, the
/// asymptotic Kolmogorov series otherwise.
TestResult ks_two_sample_test(std::span<const double> a, std::span<const double> b);

/// Pearson chi-squared on a 2x2 table [[a,b],[c,d]], df = 1. Continuity
/// correction off by default.
TestResult chi2_2x2_test(long long a, long long b, long long c, long long d,
                         bool yates_correction = false);

/// Exact two-sided binomial test: sums P(X = k) over all k whose probability
/// does not exceed the observed outcome's (the minimum-likelihood convention).
TestResult binomial_test(int successes, int n, double p0);

/// Welch two-sample t-test, two-sided.
TestResult t_two_sample_test(std::span<const double> a, std::span<const double> b);

}  // namespace patnet
