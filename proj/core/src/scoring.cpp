#include "patnet/scoring.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "patnet/csv.hpp"
#include "patnet/parallel.hpp"

namespace patnet {

std::string_view to_string(Aggregation a) {
    switch (a) {
        case Aggregation::min: return "min";
        case Aggregation::mean: return "mean";
        case Aggregation::median: return "median";
    }
    return "min";
}

std::string_view to_string(TimingPolicy t) {
    return t == TimingPolicy::prior_year ? "prior" : "same";
}

std::optional<Aggregation> aggregation_from_string(std::string_view s) {
    if (s == "min") return Aggregation::min;
    if (s == "mean") return Aggregation::mean;
    if (s == "median") return Aggregation::median;
    return std::nullopt;
}

std::optional<TimingPolicy> timing_from_string(std::string_view s) {
    if (s == "prior") return TimingPolicy::prior_year;
    if (s == "same") return TimingPolicy::same_year;
    return std::nullopt;
}

std::vector<std::pair<CpcCode, CpcCode>> focal_pairs(const PatentApplication& patent) {
    const auto distinct = patent.distinct_subclasses();
    if (distinct.size() < 2)
        throw std::invalid_argument("focal_pairs: patent " + patent.app_id +
                                    " has fewer than two distinct subclasses");
    std::vector<std::pair<CpcCode, CpcCode>> out;
    out.reserve(distinct.size() - 1);
    for (std::size_t i = 1; i < distinct.size(); ++i)
        out.emplace_back(distinct.front(), distinct[i]);
    return out;
}

namespace {

double aggregate(std::vector<double>& zs, Aggregation aggregation) {
    switch (aggregation) {
        case Aggregation::min:
            return *std::min_element(zs.begin(), zs.end());
        case Aggregation::mean: {
            double sum = 0.0;
            for (double z : zs) sum += z;
            return sum / static_cast<double>(zs.size());
        }
        case Aggregation::median: {
            std::sort(zs.begin(), zs.end());
            const std::size_t n = zs.size();
            return n % 2 == 1 ? zs[n / 2] : 0.5 * (zs[n / 2 - 1] + zs[n / 2]);
        }
    }
    return 0.0;
}

}  // namespace

ScoreResult score_patent(const PatentApplication& patent, const ZScoreSnapshot& snapshot,
                         Aggregation aggregation) {
    ScoreResult result;
    result.app_id = patent.app_id;
    result.aggregation = aggregation;
    result.network_year = snapshot.year_t;

    std::vector<double> zs;
    for (const auto& [focal, other] : focal_pairs(patent)) {
        const PairStats* stats = snapshot.find(PairKey(focal, other));
        if (stats && stats->z) {
            zs.push_back(*stats->z);
        } else {
            ++result.n_excluded_pairs;
        }
    }
    result.n_focal_pairs = static_cast<int>(zs.size());
    if (!zs.empty()) {
        result.L = aggregate(zs, aggregation);
        result.p_atypical = -*result.L;
    }
    return result;
}

SnapshotMissingError::SnapshotMissingError(int y)
    : std::runtime_error("no z-score snapshot for year " + std::to_string(y)), year(y) {}

const ZScoreSnapshot& SnapshotSet::require(int year) const {
    auto it = by_year.find(year);
    if (it == by_year.end()) throw SnapshotMissingError(year);
    return it->second;
}

std::vector<ScoreResult> score_corpus(std::span<const PatentApplication> records,
                                      const SnapshotSet& snapshots, Aggregation aggregation,
                                      TimingPolicy timing, unsigned threads) {
    auto snapshot_year = [timing](const PatentApplication& r) {
        return timing == TimingPolicy::prior_year ? r.filing_year() - 1 : r.filing_year();
    };
    // Validate coverage up front so a missing year fails before any work.
    for (const auto& r : records) snapshots.require(snapshot_year(r));

    std::vector<ScoreResult> out(records.size());
    for_each_chunk(records.size(), 4096, threads,
                   [&](std::size_t, std::size_t begin, std::size_t end) {
                       for (std::size_t i = begin; i < end; ++i)
                           out[i] = score_patent(records[i],
                                                 snapshots.require(snapshot_year(records[i])),
                                                 aggregation);
                   });
    return out;
}

void write_score_table(std::ostream& out, std::span<const ScoreResult> scores) {
    out << "app_id,network_year,aggregation,L,p_atypical,n_focal_pairs,n_excluded_pairs\n";
    for (const auto& s : scores) {
        out << csv_escape(s.app_id) << ',' << s.network_year << ',' << to_string(s.aggregation)
            << ',';
        if (s.L) out << format_double(*s.L);
        out << ',';
        if (s.p_atypical) out << format_double(*s.p_atypical);
        out << ',' << s.n_focal_pairs << ',' << s.n_excluded_pairs << '\n';
    }
}

std::vector<ScoreResult> read_score_table(std::istream& in) {
    std::vector<ScoreResult> out;
    std::string line;
    if (!read_line(in, line) || !line.starts_with("app_id,"))
        throw std::runtime_error("score table: missing header");
    while (read_line(in, line)) {
        if (line.empty()) continue;
        auto fields = csv_split(line);
        if (fields.size() != 7) throw std::runtime_error("score table: bad row");
        ScoreResult s;
        s.app_id = fields[0];
        s.network_year = std::stoi(fields[1]);
        auto agg = aggregation_from_string(fields[2]);
        if (!agg) throw std::runtime_error("score table: bad aggregation " + fields[2]);
        s.aggregation = *agg;
        if (!fields[3].empty()) s.L = std::strtod(fields[3].c_str(), nullptr);
        if (!fields[4].empty()) s.p_atypical = std::strtod(fields[4].c_str(), nullptr);
        s.n_focal_pairs = std::stoi(fields[5]);
        s.n_excluded_pairs = std::stoi(fields[6]);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace patnet
