#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patnet/corpus.hpp"
#include "patnet/nullmodel.hpp"

namespace patnet {

enum class Aggregation { min, mean, median };
enum class TimingPolicy { prior_year, same_year };

std::string_view to_string(Aggregation a);
std::string_view to_string(TimingPolicy t);
std::optional<Aggregation> aggregation_from_string(std::string_view s);
std::optional<TimingPolicy> timing_from_string(std::string_view s);

/// Patent-level unconventionality. L is the aggregate (min/mean/median) of
/// the focal-pair z-scores; p_atypical = -L, so positive values mark rare,
/// boundary-pushing combinations and negative values conventional ones.
struct ScoreResult {
    std::string app_id;
    Aggregation aggregation = Aggregation::min;
    std::optional<double> L;
    std::optional<double> p_atypical;
    int n_focal_pairs = 0;     // defined pairs entering the aggregate
    int n_excluded_pairs = 0;  // undefined or never-seen pairs
    int network_year = 0;
};

/// (focal, other) for every distinct non-focal subclass, in listing order.
/// Throws std::invalid_argument when the patent has fewer than two distinct
/// subclasses.
std::vector<std::pair<CpcCode, CpcCode>> focal_pairs(const PatentApplication& patent);

ScoreResult score_patent(const PatentApplication& patent, const ZScoreSnapshot& snapshot,
                         Aggregation aggregation);

class SnapshotMissingError : public std::runtime_error {
public:
    explicit SnapshotMissingError(int year);
    int year;
};

struct SnapshotSet {
    std::map<int, ZScoreSnapshot> by_year;

    const ZScoreSnapshot& require(int year) const;
};

/// Scores each patent against the snapshot chosen by the timing policy:
/// prior_year (default) uses filing year - 1, same_year uses the filing
/// year. Parallel over patents; output order equals input order.
std::vector<ScoreResult> score_corpus(std::span<const PatentApplication> records,
                                      const SnapshotSet& snapshots, Aggregation aggregation,
                                      TimingPolicy timing = TimingPolicy::prior_year,
                                      unsigned threads = 1);

/// CSV: app_id,network_year,aggregation,L,p_atypical,n_focal_pairs,n_excluded_pairs.
void write_score_table(std::ostream& out, std::span<const ScoreResult> scores);
std::vector<ScoreResult> read_score_table(std::istream& in);

}  // namespace patnet
