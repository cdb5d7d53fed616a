#pragma once

#include <span>
#include <string>

#include "patnet/corpus.hpp"
#include "patnet/gender.hpp"
#include "patnet/metrics.hpp"
#include "patnet/scoring.hpp"
#include "patnet/table.hpp"

namespace patnet {

/// Options for assembling the per-application analysis table.
struct FrameOptions {
    double gender_threshold = 0.5;
    /// Teams with a larger unknown-member share are dropped from
    /// gender-composition columns (the row survives; the columns go null and
    /// the row is excluded by require_columns).
    double max_unknown_share = 0.0;
};

struct AnalysisFrame {
    DataTable table;
    std::size_t n_input = 0;
    std::size_t n_rows = 0;
    std::size_t n_dropped_pending = 0;      // no granted/abandoned outcome
    std::size_t n_dropped_unscored = 0;     // no defined unconventionality
    std::size_t n_dropped_gender = 0;       // team not classifiable under the cap
    std::size_t n_dropped_missing = 0;      // examiner fields absent
};

/// Joins records with their scores and derives the regression covariates:
/// response "granted" (granted=1, abandoned=0; pending rows dropped),
/// "p_atypical", "women_majority", "prop_women", "all_women", "team_size"
/// (capped, categorical), "year" (categorical), "cpc_class" (categorical),
/// "examiner_woman", "examiner_experience", "inventor_experience",
/// "big_entity", "credit_hours" plus claims/latency/impact columns where
/// present. Rows missing any of the required pieces are dropped and counted.
AnalysisFrame build_analysis_frame(std::span<const PatentApplication> records,
                                   std::span<const ScoreResult> scores,
                                   const GenderDict& dict, const FrameOptions& options = {});

struct CompleteRows {
    DataTable table;
    std::size_t n_dropped = 0;
};

/// Rows where every listed numeric column is non-NaN; the complement count
/// is reported so analyses can state their null-drop.
CompleteRows complete_rows(const DataTable& table,
                           std::span<const std::string> required_numeric);

}  // namespace patnet
