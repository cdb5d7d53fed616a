#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patnet/corpus.hpp"

namespace patnet {

class InfeasibleParamsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameters of the synthetic corpus generator. The generator plants a
/// known logistic grant model, a homophily tilt in examiner assignment, and
/// an experience/unconventionality gradient in appeal reversals, so every
/// downstream estimate can be checked against the coefficients used here.
struct SynthParams {
    std::int64_t n_patents = 10000;
    int n_codes = 120;               // subclass universe size
    double code_zipf_exponent = 0.8; // popularity ~ 1/(rank+1)^s
    int n_groups = 8;                // co-occurrence communities

    // distinct-subclass count per patent: probability of counts 1,2,3,...
    std::vector<double> code_count_probs = {0.15, 0.35, 0.30, 0.15, 0.05};
    // team sizes 1,2,3,...
    std::vector<double> team_size_probs = {0.35, 0.30, 0.20, 0.10, 0.05};

    int first_year = 2001;  // baseline network year
    int last_year = 2018;

    double p_woman_inventor = 0.35;
    double p_unknown_name = 0.04;  // initials-only inventors

    // Examiner pool.
    int n_examiners = 200;
    double p_woman_examiner = 0.35;
    double examiner_weight_exponent = 0.7;  // assignment skew -> experience spread
    double homophily_odds = 1.0;  // odds multiplier of a woman examiner for all-women teams

    // Planted grant model, logistic in:
    //   u    = patent boundary-spanning level, centered to [-1, 1]
    //   W    = 1 for women-majority teams (determined members)
    //   e    = log1p(examiner prior count) / 6
    double grant_intercept = 0.6;
    double beta_unconventional = 0.3;
    double beta_women = -0.15;
    double beta_interaction = 0.0;  // W x u
    double beta_examiner_experience = 0.4;
    double p_pending = 0.02;

    // Appeals of abandoned applications.
    double p_appeal = 0.35;
    double reversal_intercept = -0.8;
    double reversal_beta_experience = -2.0;  // on e
    double reversal_beta_unconventional = 0.8;  // on u

    // Optional-field richness (claims, citations, fees, credit hours).
    double mean_extra_claims = 4.0;

    void validate() const;  // throws InfeasibleParamsError

    std::string to_json() const;
    static SynthParams from_json(const std::string& text);
    static SynthParams from_json_file(const std::string& path);
};

/// Deterministic for a fixed (params, seed): two invocations produce
/// byte-identical serialized corpora. Records come out sorted by filing
/// date, so the generator's own running examiner counts match what an
/// ExperienceIndex later reconstructs.
std::vector<PatentApplication> synth_corpus(const SynthParams& params, std::uint64_t seed);

/// Name pools the generator draws from; every entry resolves in the shipped
/// gender dictionary with the matching gender at probability >= 0.9.
std::span<const std::string_view> synth_women_names();
std::span<const std::string_view> synth_men_names();

}  // namespace patnet
