#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "patnet/corpus.hpp"
#include "patnet/date.hpp"
#include "patnet/gender.hpp"

namespace patnet {

enum class Tercile { low, mid, high };
std::string_view to_string(Tercile t);

enum class ExperienceKind { examiner, inventor_team };

struct ExperienceRecord {
    std::string person_id;  // examiner id, or app id for a team
    Date as_of;
    double count = 0.0;  // integer for examiners, team mean for inventors
    std::optional<Tercile> tercile;
};

/// Prior-activity lookup built once over a corpus. Examiners are identified
/// by examiner_id, inventors by their exact name string. "Prior" always
/// means strictly before the reference date.
class ExperienceIndex {
public:
    static ExperienceIndex build(std::span<const PatentApplication> records);

    /// Applications with examiner_id == id filed strictly before as_of.
    std::int64_t examiner_prior(const std::string& id, Date as_of) const;

    /// Applications listing this inventor name, filed strictly before as_of.
    std::int64_t inventor_prior(const std::string& name, Date as_of) const;

    ExperienceRecord examiner_experience(const std::string& id, Date as_of) const;

    /// Mean of per-member prior counts.
    ExperienceRecord inventor_team_experience(std::span<const std::string> members,
                                              Date as_of) const;

private:
    std::unordered_map<std::string, std::vector<std::int64_t>> examiner_days_;
    std::unordered_map<std::string, std::vector<std::int64_t>> inventor_days_;
};

/// Tercile cuts over an analysis population; ties go to the lower bin.
struct TercileCuts {
    double low_upper = 0.0;  // values <= low_upper are low
    double mid_upper = 0.0;  // values <= mid_upper (and > low_upper) are mid

    Tercile classify(double value) const {
        if (value <= low_upper) return Tercile::low;
        if (value <= mid_upper) return Tercile::mid;
        return Tercile::high;
    }
};

TercileCuts tercile_cuts(std::span<const double> population);

struct ClaimsDelta {
    int delta_absolute = 0;
    double delta_relative = 0.0;
};

/// delta_absolute = n_app - n_grant; delta_relative = delta_absolute / n_app.
/// n_app must be >= 1 (every application carries at least one independent
/// claim). Negative deltas mean claims were added during prosecution.
ClaimsDelta claims_delta(int n_app, int n_grant);

/// Exact calendar days between filing and grant; throws if grant precedes
/// filing.
std::int64_t grant_latency(Date filing_date, Date grant_date);

/// mean_exp_men * prop_men - mean_exp_women * prop_women over the examiners
/// active in one CPC class (focal-code class; per-examiner experience is the
/// number of applications they examined within that class). Positive values
/// mean men persist longer in the field. Throws when the class has no
/// gender-determined examiner.
double survivorship_index(std::span<const PatentApplication> records,
                          std::string_view cpc_class, const GenderDict& dict,
                          double threshold = 0.5);

/// One observation for the over-assignment contrast: a single-gender team
/// and a gender-determined examiner.
struct AssignmentObs {
    bool all_women_team = false;  // false means all-men
    bool woman_examiner = false;
};

struct OverAssignment {
    double ratio_based = 0.0;  // P(w exam | all-women)/P(w exam | all-men) - 1
    double logit_based = 0.0;  // exp(beta_all_women) - 1 from a plain logit
};

/// Throws when either team-type cell is empty.
OverAssignment over_assignment(std::span<const AssignmentObs> obs);

/// Builds the all-women/all-men observation rows from a corpus, inferring
/// both team and examiner gender from the dictionary. Rows that are not
/// single-gender or lack a determined examiner are dropped and counted.
struct AssignmentRows {
    std::vector<AssignmentObs> rows;
    std::size_t n_dropped = 0;
};
AssignmentRows assignment_rows(std::span<const PatentApplication> records,
                               const GenderDict& dict, double threshold = 0.5);

/// One row for reversal-rate tabulation.
struct ReversalObs {
    double experience = 0.0;   // examiner experience at filing
    double p_atypical = 0.0;   // patent unconventionality
    bool appealed = false;
    bool reversed = false;
};

struct ReversalCell {
    std::int64_t n_appealed = 0;
    std::int64_t n_reversed = 0;
    std::optional<double> rate;  // null when the cell has no appealed rows
};

struct ReversalTable {
    std::vector<double> bin_upper_edges;      // per experience bin (quantiles)
    std::vector<ReversalCell> conventional;   // p_atypical <= 0
    std::vector<ReversalCell> unconventional; // p_atypical > 0
};

/// Reversal rate (reversed / appealed) per experience-quantile bin and
/// conventionality side. Bins are cut over the appealed rows' experience;
/// exact zeros of p_atypical count as conventional.
ReversalTable reversal_rates(std::span<const ReversalObs> rows, int n_bins = 3);

struct LostValue {
    std::int64_t lost_patents = 0;
    double lost_dollars = 0.0;
    bool negative = false;  // women's rate exceeded men's
};

/// lost_patents = floor(n_apps * (rate_men - rate_women));
/// lost_dollars = lost_patents * per_patent_value.
LostValue lost_value(std::int64_t n_apps, double rate_men, double rate_women,
                     double per_patent_value);

/// (rate_high - rate_low) * reassigned_fraction; all inputs in [0,1].
double reassignment_gain(double rate_high, double rate_low, double reassigned_fraction);

/// Inputs-echoing report for the closed-form estimators; serialized as JSON
/// so every figure is recomputable from the artifact alone.
struct EstimatorReport {
    std::string formula;
    std::vector<std::pair<std::string, double>> inputs;
    std::vector<std::pair<std::string, double>> outputs;

    std::string to_json() const;
};

EstimatorReport report_lost_value(std::int64_t n_apps, double rate_men, double rate_women,
                                  double per_patent_value);
EstimatorReport report_reassignment_gain(double rate_high, double rate_low,
                                         double reassigned_fraction);
EstimatorReport report_over_assignment(std::span<const AssignmentObs> obs);

}  // namespace patnet
