#include "patnet/frame.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

namespace patnet {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

AnalysisFrame build_analysis_frame(std::span<const PatentApplication> records,
                                   std::span<const ScoreResult> scores,
                                   const GenderDict& dict, const FrameOptions& options) {
    std::unordered_map<std::string_view, const ScoreResult*> score_of;
    score_of.reserve(scores.size());
    for (const auto& s : scores) score_of.emplace(s.app_id, &s);

    const ExperienceIndex experience = ExperienceIndex::build(records);

    AnalysisFrame frame;
    frame.n_input = records.size();

    std::vector<double> granted, p_atypical, women_majority, prop_women, all_women;
    std::vector<double> examiner_woman, examiner_exp, inventor_exp, big_entity, credit_hours;
    std::vector<double> claims_abs, claims_rel, latency, citations, maintenance;
    std::vector<double> appealed, reversed;
    std::vector<std::string> team_size, year, cpc_class;

    for (const auto& r : records) {
        auto it = score_of.find(r.app_id);
        if (it == score_of.end() || !it->second->p_atypical) {
            ++frame.n_dropped_unscored;
            continue;
        }
        if (r.status == AppStatus::pending) {
            ++frame.n_dropped_pending;
            continue;
        }
        std::vector<GenderLabel> labels;
        labels.reserve(r.inventor_names.size());
        for (const auto& name : r.inventor_names)
            labels.push_back(infer_gender(name, dict, options.gender_threshold));
        if (labels.empty()) {
            ++frame.n_dropped_gender;
            continue;
        }
        const TeamComposition tc = team_composition(labels);
        if (!tc.classifiable || tc.frac_unknown() > options.max_unknown_share) {
            ++frame.n_dropped_gender;
            continue;
        }
        if (!r.examiner_id || !r.examiner_name) {
            ++frame.n_dropped_missing;
            continue;
        }
        const Gender exg = infer_gender(*r.examiner_name, dict, options.gender_threshold).value;
        if (exg == Gender::unknown) {
            ++frame.n_dropped_missing;
            continue;
        }

        granted.push_back(r.status == AppStatus::granted ? 1.0 : 0.0);
        p_atypical.push_back(*it->second->p_atypical);
        women_majority.push_back(*tc.women_majority ? 1.0 : 0.0);
        prop_women.push_back(*tc.prop_women);
        all_women.push_back(tc.all_women ? 1.0 : 0.0);
        team_size.push_back(std::to_string(tc.team_size_capped));
        year.push_back(std::to_string(r.filing_year()));
        cpc_class.push_back(std::string(r.focal_code().cpc_class()));
        examiner_woman.push_back(exg == Gender::woman ? 1.0 : 0.0);
        examiner_exp.push_back(
            static_cast<double>(experience.examiner_prior(*r.examiner_id, r.filing_date)));
        inventor_exp.push_back(
            experience.inventor_team_experience(r.inventor_names, r.filing_date).count);
        big_entity.push_back(r.big_entity ? (*r.big_entity ? 1.0 : 0.0) : kNaN);
        credit_hours.push_back(r.credit_hours ? *r.credit_hours : kNaN);

        if (r.n_claims_app && r.n_claims_grant && *r.n_claims_app >= 1) {
            const ClaimsDelta d = claims_delta(*r.n_claims_app, *r.n_claims_grant);
            claims_abs.push_back(d.delta_absolute);
            claims_rel.push_back(d.delta_relative);
        } else {
            claims_abs.push_back(kNaN);
            claims_rel.push_back(kNaN);
        }
        latency.push_back(r.grant_date
                              ? static_cast<double>(grant_latency(r.filing_date, *r.grant_date))
                              : kNaN);
        citations.push_back(r.citation_count_8yr ? static_cast<double>(*r.citation_count_8yr)
                                                 : kNaN);
        maintenance.push_back(
            r.maintenance_fee_paid ? (*r.maintenance_fee_paid ? 1.0 : 0.0) : kNaN);
        appealed.push_back(r.appealed ? (*r.appealed ? 1.0 : 0.0) : kNaN);
        reversed.push_back(r.reversed ? (*r.reversed ? 1.0 : 0.0) : kNaN);
    }

    frame.n_rows = granted.size();
    DataTable& t = frame.table;
    t.add_numeric("granted", std::move(granted));
    t.add_numeric("p_atypical", std::move(p_atypical));
    t.add_numeric("women_majority", std::move(women_majority));
    t.add_numeric("prop_women", std::move(prop_women));
    t.add_numeric("all_women", std::move(all_women));
    t.add_categorical("team_size", std::move(team_size));
    t.add_categorical("year", std::move(year));
    t.add_categorical("cpc_class", std::move(cpc_class));
    t.add_numeric("examiner_woman", std::move(examiner_woman));
    t.add_numeric("examiner_experience", std::move(examiner_exp));
    t.add_numeric("inventor_experience", std::move(inventor_exp));
    t.add_numeric("big_entity", std::move(big_entity));
    t.add_numeric("credit_hours", std::move(credit_hours));
    t.add_numeric("claims_delta_abs", std::move(claims_abs));
    t.add_numeric("claims_delta_rel", std::move(claims_rel));
    t.add_numeric("grant_latency_days", std::move(latency));
    t.add_numeric("citation_count_8yr", std::move(citations));
    t.add_numeric("maintenance_fee_paid", std::move(maintenance));
    t.add_numeric("appealed", std::move(appealed));
    t.add_numeric("reversed", std::move(reversed));
    return frame;
}

CompleteRows complete_rows(const DataTable& table,
                           std::span<const std::string> required_numeric) {
    std::vector<std::size_t> keep;
    keep.reserve(table.n_rows());
    for (std::size_t i = 0; i < table.n_rows(); ++i) {
        bool ok = true;
        for (const auto& col : required_numeric) {
            if (std::isnan(table.numeric(col)[i])) {
                ok = false;
                break;
            }
        }
        if (ok) keep.push_back(i);
    }
    CompleteRows out;
    out.n_dropped = table.n_rows() - keep.size();
    out.table = table.select_rows(keep);
    return out;
}

}  // namespace patnet
