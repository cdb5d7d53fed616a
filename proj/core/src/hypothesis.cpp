#include "patnet/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "patnet/dist.hpp"

namespace patnet {

TestResult pearson_r_test(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson_r_test: size mismatch");
    const std::size_t n = x.size();
    if (n < 3) throw std::invalid_argument("pearson_r_test: need at least 3 observations");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("pearson_r_test: zero variance input");
    double r = sxy / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);
    const double nu = static_cast<double>(n) - 2.0;
    double p;
    if (std::fabs(r) >= 1.0) {
        p = 0.0;
    } else {
        const double t = r * std::sqrt(nu / (1.0 - r * r));
        p = student_t_two_sided_p(t, nu);
    }
    return {r, p};
}

namespace {

// Largest |i*m - j*n| along the empirical CDF path of the two sorted samples.
long long ks_distance_numerator(const std::vector<double>& a, const std::vector<double>& b) {
    const long long n = static_cast<long long>(a.size());
    const long long m = static_cast<long long>(b.size());
    long long i = 0, j = 0, best = 0;
    while (i < n || j < m) {
        const double va = i < n ? a[static_cast<std::size_t>(i)]
                                : std::numeric_limits<double>::infinity();
        const double vb = j < m ? b[static_cast<std::size_t>(j)]
                                : std::numeric_limits<double>::infinity();
        const double v = std::min(va, vb);
        while (i < n && a[static_cast<std::size_t>(i)] == v) ++i;
        while (j < m && b[static_cast<std::size_t>(j)] == v) ++j;
        best = std::max(best, std::llabs(i * m - j * n));
    }
    return best;
}

// Number of monotone lattice paths (0,0) -> (n,m) with |i*m - j*n| <= h at
// every visited point, exact in double for n, m < 25.
double ks_paths_within(long long n, long long m, long long h) {
    std::vector<double> u(static_cast<std::size_t>(m) + 1, 0.0);
    auto ok = [&](long long i, long long j) { return std::llabs(i * m - j * n) <= h; };
    u[0] = 1.0;
    for (long long j = 1; j <= m; ++j)
        u[static_cast<std::size_t>(j)] =
            ok(0, j) ? u[static_cast<std::size_t>(j - 1)] : 0.0;
    for (long long i = 1; i <= n; ++i) {
        u[0] = ok(i, 0) ? u[0] : 0.0;
        for (long long j = 1; j <= m; ++j) {
            if (!ok(i, j))
                u[static_cast<std::size_t>(j)] = 0.0;
            else
                u[static_cast<std::size_t>(j)] += u[static_cast<std::size_t>(j - 1)];
        }
    }
    return u[static_cast<std::size_t>(m)];
}

bool has_cross_ties(const std::vector<double>& a, const std::vector<double>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return true;
        if (a[i] < b[j])
            ++i;
        else
            ++j;
    }
    return false;
}

}  // namespace

TestResult ks_two_sample_test(std::span<const double> a_in, std::span<const double> b_in) {
    if (a_in.empty() || b_in.empty())
        throw std::invalid_argument("ks_two_sample_test: empty sample");
    std::vector<double> a(a_in.begin(), a_in.end());
    std::vector<double> b(b_in.begin(), b_in.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    const long long n = static_cast<long long>(a.size());
    const long long m = static_cast<long long>(b.size());
    const long long h = ks_distance_numerator(a, b);
    const double d = static_cast<double>(h) / (static_cast<double>(n) * static_cast<double>(m));
    if (h == 0) return {0.0, 1.0};

    // Exact distribution assumes continuous data; cross-sample ties push us
    // to the asymptotic branch.
    if (n < 25 && m < 25 && !has_cross_ties(a, b)) {
        const double within = ks_paths_within(n, m, h - 1);
        const double total = std::exp(log_choose(static_cast<int>(n + m), static_cast<int>(n)));
        double p = 1.0 - within / total;
        p = std::clamp(p, 0.0, 1.0);
        return {d, p};
    }

    const double ne = static_cast<double>(n) * static_cast<double>(m) /
                      (static_cast<double>(n) + static_cast<double>(m));
    const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    double q = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * (k % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        q += term;
        if (std::fabs(term) < 1e-16) break;
    }
    return {d, std::clamp(q, 0.0, 1.0)};
}

TestResult chi2_2x2_test(long long a, long long b, long long c, long long d,
                         bool yates_correction) {
    if (a < 0 || b < 0 || c < 0 || d < 0)
        throw std::invalid_argument("chi2_2x2_test: negative cell");
    const double r1 = static_cast<double>(a + b);
    const double r2 = static_cast<double>(c + d);
    const double c1 = static_cast<double>(a + c);
    const double c2 = static_cast<double>(b + d);
    const double n = r1 + r2;
    if (r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0)
        throw std::invalid_argument("chi2_2x2_test: zero margin");
    double num = std::fabs(static_cast<double>(a) * static_cast<double>(d) -
                           static_cast<double>(b) * static_cast<double>(c));
    if (yates_correction) num = std::max(0.0, num - n / 2.0);
    const double x2 = n * num * num / (r1 * r2 * c1 * c2);
    return {x2, chi2_1df_sf(x2)};
}

TestResult binomial_test(int successes, int n, double p0) {
    if (n < 1) throw std::invalid_argument("binomial_test: n must be >= 1");
    if (successes < 0 || successes > n)
        throw std::invalid_argument("binomial_test: successes out of range");
    if (p0 <= 0.0 || p0 >= 1.0)
        throw std::invalid_argument("binomial_test: p0 must lie in (0,1)");

    auto log_pmf = [&](int k) {
        return log_choose(n, k) + k * std::log(p0) + (n - k) * std::log1p(-p0);
    };
    const double log_obs = log_pmf(successes);
    const double cutoff = log_obs + 1e-7;  // tolerate round-off in equal-mass tails
    double p = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double lp = log_pmf(k);
        if (lp <= cutoff) p += std::exp(lp);
    }
    return {static_cast<double>(successes) / static_cast<double>(n), std::min(p, 1.0)};
}

TestResult t_two_sample_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("t_two_sample_test: need >= 2 observations per sample");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double ma = 0.0, mb = 0.0;
    for (double v : a) ma += v;
    for (double v : b) mb += v;
    ma /= na;
    mb /= nb;
    double va = 0.0, vb = 0.0;
    for (double v : a) va += (v - ma) * (v - ma);
    for (double v : b) vb += (v - mb) * (v - mb);
    va /= na - 1.0;
    vb /= nb - 1.0;
    const double denom2 = va / na + vb / nb;
    if (denom2 == 0.0) {
        if (ma == mb) return {0.0, 1.0};
        return {ma > mb ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity(),
                0.0};
    }
    const double t = (ma - mb) / std::sqrt(denom2);
    const double nu = denom2 * denom2 /
                      (va * va / (na * na * (na - 1.0)) + vb * vb / (nb * nb * (nb - 1.0)));
    return {t, student_t_two_sided_p(t, nu)};
}

}  // namespace patnet
