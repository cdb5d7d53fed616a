#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <unordered_map>

#include "patnet/corpus.hpp"
#include "patnet/cpc.hpp"

namespace patnet {

/// Cumulative subclass co-occurrence network over all patents filed in years
/// <= year_t. Immutable after build; merging is element-wise addition.
struct CooccurrenceNetwork {
    int year_t = 0;
    std::uint64_t n_patents = 0;
    std::unordered_map<PairKey, std::uint64_t, PairKeyHash> pair_counts;
    std::unordered_map<CpcCode, std::uint64_t, CpcCodeHash> code_usage;
    /// Multiset of per-patent distinct-code counts, as count-of-counts.
    std::map<std::uint32_t, std::uint64_t> slot_counts;

    std::uint64_t pair_count(PairKey p) const {
        auto it = pair_counts.find(p);
        return it == pair_counts.end() ? 0 : it->second;
    }
    std::uint64_t usage(CpcCode c) const {
        auto it = code_usage.find(c);
        return it == code_usage.end() ? 0 : it->second;
    }
    std::uint64_t total_pairs() const;   // sum of pair_counts
    std::uint64_t total_tokens() const;  // sum of code_usage

    bool operator==(const CooccurrenceNetwork&) const = default;
};

/// Counts every unordered pair of distinct subclasses once per patent.
/// Records must already be scoreable-filtered; a record filed after year_t
/// throws std::invalid_argument. Chunk-parallel; result independent of
/// thread count.
CooccurrenceNetwork build_network(std::span<const PatentApplication> records, int year_t,
                                  unsigned threads = 1);

/// Element-wise sum. Intended for networks built from disjoint record sets;
/// year_t of the result is the max of the inputs.
CooccurrenceNetwork merge_networks(const CooccurrenceNetwork& a,
                                   const CooccurrenceNetwork& b);

/// Snapshot format: one JSON header line {"format","year_t","n_patents"},
/// then sections of CSV rows ("#codes" code,usage; "#slots" k,count;
/// "#pairs" a,b,count), each sorted, so save/load round-trips exactly and
/// equal networks serialize to identical bytes.
void save_network(const CooccurrenceNetwork& net, std::ostream& out);
CooccurrenceNetwork load_network(std::istream& in);
void save_network_file(const CooccurrenceNetwork& net, const std::string& path);
CooccurrenceNetwork load_network_file(const std::string& path);

}  // namespace patnet
