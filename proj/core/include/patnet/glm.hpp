#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "patnet/table.hpp"

namespace patnet {

struct GlmTerm {
    enum class Kind { continuous, fixed_effect, interaction };
    Kind kind = Kind::continuous;
    std::string column;                    // continuous / fixed_effect
    std::string column2;                   // second factor of an interaction
    std::optional<std::string> reference;  // fixed_effect: dropped level

    static GlmTerm cont(std::string col);
    static GlmTerm fe(std::string col, std::optional<std::string> ref = std::nullopt);
    static GlmTerm inter(std::string a, std::string b);
};

struct GlmSpec {
    enum class Family { logistic, linear };
    Family family = Family::logistic;
    std::string response;
    std::vector<GlmTerm> terms;
    std::optional<std::string> cluster;  // cluster-robust errors when set
    int max_iterations = 100;
    double gradient_tol = 1e-8;
};

struct GlmFit {
    GlmSpec spec;
    std::vector<std::string> term_names;  // "(intercept)" first, dummies as col=level
    std::vector<double> coefficients;
    std::vector<double> se;                          // naive
    std::optional<std::vector<double>> robust_se;    // set when spec.cluster given
    double deviance = 0.0;
    std::vector<double> deviance_trace;  // nonincreasing by construction
    std::size_t n_obs = 0;
    int iterations = 0;
    bool converged = false;
    bool separation_flag = false;
    std::vector<std::string> dropped_columns;  // rank-deficient columns

    std::optional<double> coefficient(const std::string& term) const;
};

/// Logistic fit by iteratively reweighted least squares (step-halved so the
/// deviance never increases) to max-abs gradient <= gradient_tol or
/// max_iterations; linear fit by least squares. Categorical terms become
/// one-hot columns with one reference level dropped. Rank-deficient columns
/// are dropped and reported. Design accumulation is chunk-parallel with
/// integer-independent fixed reduction order, so fits are deterministic and
/// invariant to thread count.
GlmFit fit_glm(const GlmSpec& spec, const DataTable& data, unsigned threads = 1);

/// Cluster-robust (sandwich) standard errors with the small-sample factor
/// G/(G-1) * (N-1)/(N-K). With every observation its own cluster this equals
/// the heteroskedasticity-robust (HC1) variance. Requires >= 2 clusters.
std::vector<double> cluster_robust_se(const GlmFit& fit, const DataTable& data,
                                      const std::string& cluster_column);

/// CSV (term,coefficient,se,robust_se,z,p) plus a JSON metadata line with
/// family, n_obs, deviance, and dropped columns.
void write_glm_fit(std::ostream& out, const GlmFit& fit);

}  // namespace patnet
