#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <unordered_map>

#include "patnet/cooccur.hpp"
#include "patnet/cpc.hpp"

namespace patnet {

/// Null-model statistics for one subclass pair in a given year's network.
struct PairStats {
    PairKey pair;
    std::uint64_t observed = 0;
    double mu = 0.0;
    double sigma = 0.0;
    std::optional<double> z;
};

/// z = (observed - mu) / sigma. With sigma = 0 the z-score is 0 when the
/// observation equals the null mean and undefined otherwise; undefined pairs
/// are excluded from scoring and counted by the callers.
std::optional<double> pair_z(double observed, double mu, double sigma);

struct NullModelConfig {
    int replicates = 100;
    std::uint64_t master_seed = 0;
    unsigned threads = 1;
    int max_attempts = 10000;  // reshuffle rounds per replicate
};

using PairCountMap = std::unordered_map<PairKey, std::uint32_t, PairKeyHash>;

/// Randomization structure extracted from a network: the patent slot layout
/// plus the code-token multiset. A replicate shuffles the token multiset
/// uniformly over the slots and then repairs within-patent duplicates by
/// swapping each offending token with a uniformly random slot elsewhere
/// (rejecting swaps that would create a new duplicate). Code usage and the
/// number of patents are invariant throughout.
class PermutationModel {
public:
    explicit PermutationModel(const CooccurrenceNetwork& net);

    /// One replicate's pair counts, or nullopt when the duplicate repair
    /// budget (max_attempts sweeps) is exhausted (degenerate margins).
    std::optional<PairCountMap> permute_once(std::uint64_t seed,
                                             int max_attempts = 10000) const;

    std::size_t n_tokens() const { return tokens_.size(); }
    std::size_t n_patents() const { return slots_.size(); }
    const std::vector<CpcCode>& codes() const { return codes_; }

private:
    std::vector<CpcCode> codes_;           // sorted, distinct
    std::vector<std::uint32_t> tokens_;    // code indices, one entry per usage
    std::vector<std::uint32_t> slots_;     // per-patent distinct-code count
};

struct NullStats {
    std::unordered_map<PairKey, std::pair<double, double>, PairKeyHash> mu_sigma;
    int replicates = 0;           // requested
    int failed_replicates = 0;    // fix-up budget exhausted
    std::uint64_t master_seed = 0;

    std::pair<double, double> get(PairKey p) const {
        auto it = mu_sigma.find(p);
        return it == mu_sigma.end() ? std::pair<double, double>{0.0, 0.0} : it->second;
    }
};

/// Monte-Carlo mu/sigma per pair over R replicates. Replicate i draws all of
/// its randomness from split_seed(master_seed, i), and the accumulators are
/// integer-exact, so the result is identical for any thread count. sigma uses
/// divisor R-1 over the successful replicates. Throws when replicates < 2.
NullStats null_stats(const CooccurrenceNetwork& net, const NullModelConfig& config);

/// Exhaustive oracle over all duplicate-free assignments, each equally
/// likely; returns exact (mean, population std) per pair. Every valid
/// set-level assignment corresponds to the same number of token-level
/// arrangements, so plain enumeration is uniform. Throws when the network
/// has more than max_tokens tokens.
std::unordered_map<PairKey, std::pair<double, double>, PairKeyHash> exact_null_small(
    const CooccurrenceNetwork& net, std::size_t max_tokens = 12);

/// Per-year z-score snapshot: stats for the union of observed pairs and
/// pairs seen in any replicate. Pairs in neither have no entry and score as
/// undefined downstream.
struct ZScoreSnapshot {
    int year_t = 0;
    int replicates = 0;
    std::uint64_t master_seed = 0;
    std::unordered_map<PairKey, PairStats, PairKeyHash> pairs;

    const PairStats* find(PairKey p) const {
        auto it = pairs.find(p);
        return it == pairs.end() ? nullptr : &it->second;
    }
};

ZScoreSnapshot make_snapshot(const CooccurrenceNetwork& net, const NullStats& stats);

/// CSV pair_a,pair_b,observed,mu,sigma,z under a JSON header line
/// {"format","year_t","replicates","master_seed"}. Undefined z serializes as
/// an empty field. Round-trips exactly.
void save_snapshot(const ZScoreSnapshot& snap, std::ostream& out);
ZScoreSnapshot load_snapshot(std::istream& in);
void save_snapshot_file(const ZScoreSnapshot& snap, const std::string& path);
ZScoreSnapshot load_snapshot_file(const std::string& path);

}  // namespace patnet
