#include "patnet/nullmodel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "patnet/csv.hpp"
#include "patnet/parallel.hpp"
#include "patnet/rng.hpp"

namespace patnet {

std::optional<double> pair_z(double observed, double mu, double sigma) {
    if (sigma > 0.0) return (observed - mu) / sigma;
    if (observed == mu) return 0.0;
    return std::nullopt;
}

PermutationModel::PermutationModel(const CooccurrenceNetwork& net) {
    codes_.reserve(net.code_usage.size());
    for (const auto& [code, n] : net.code_usage) codes_.push_back(code);
    std::sort(codes_.begin(), codes_.end());

    tokens_.reserve(net.total_tokens());
    for (std::uint32_t i = 0; i < codes_.size(); ++i) {
        const std::uint64_t usage = net.code_usage.at(codes_[i]);
        for (std::uint64_t n = 0; n < usage; ++n) tokens_.push_back(i);
    }

    std::uint64_t slot_total = 0;
    for (const auto& [k, count] : net.slot_counts) {
        for (std::uint64_t n = 0; n < count; ++n) slots_.push_back(k);
        slot_total += static_cast<std::uint64_t>(k) * count;
    }
    if (slot_total != tokens_.size())
        throw std::invalid_argument(
            "PermutationModel: slot multiset and code usage disagree on token count");
}

std::optional<PairCountMap> PermutationModel::permute_once(std::uint64_t seed,
                                                           int max_attempts) const {
    Rng rng(seed);
    std::vector<std::uint32_t> deal = tokens_;
    rng.shuffle(deal);
    const std::size_t n_tokens = deal.size();

    // patent p owns deal[offset[p] .. offset[p] + slots_[p]); patent_of maps
    // a token position back to its patent
    std::vector<std::size_t> offset(slots_.size());
    std::vector<std::uint32_t> patent_of(n_tokens);
    std::size_t pos = 0;
    for (std::size_t p = 0; p < slots_.size(); ++p) {
        offset[p] = pos;
        for (std::size_t i = 0; i < slots_[p]; ++i) patent_of[pos + i] = static_cast<std::uint32_t>(p);
        pos += slots_[p];
    }

    // stamp-based duplicate detection, one stamp per patent scan
    std::vector<std::uint64_t> mark(codes_.size(), ~std::uint64_t{0});
    std::uint64_t stamp = 0;
    auto patent_has_code = [&](std::size_t p, std::uint32_t code, std::size_t skip_pos) {
        const std::size_t b = offset[p];
        for (std::size_t i = 0; i < slots_[p]; ++i) {
            const std::size_t q = b + i;
            if (q != skip_pos && deal[q] == code) return true;
        }
        return false;
    };
    // positions within a patent holding a code already seen earlier in it
    auto collect_duplicates = [&](std::vector<std::size_t>& dups) {
        dups.clear();
        for (std::size_t p = 0; p < slots_.size(); ++p) {
            ++stamp;
            const std::size_t b = offset[p];
            for (std::size_t i = 0; i < slots_[p]; ++i) {
                const std::uint32_t c = deal[b + i];
                if (mark[c] == stamp)
                    dups.push_back(b + i);
                else
                    mark[c] = stamp;
            }
        }
    };

    // Repair sweeps: each duplicate token is swapped with a uniformly random
    // slot elsewhere, accepting only swaps that leave both patents
    // duplicate-free. Usage and slot structure are invariant under swaps.
    std::vector<std::size_t> dups;
    collect_duplicates(dups);
    for (int attempt = 0; !dups.empty(); ++attempt) {
        if (attempt >= max_attempts) return std::nullopt;
        for (const std::size_t at : dups) {
            const std::size_t p = patent_of[at];
            const std::uint32_t code = deal[at];
            if (!patent_has_code(p, code, at)) continue;  // fixed by an earlier swap
            for (int retry = 0; retry < 64; ++retry) {
                const std::size_t j = static_cast<std::size_t>(rng.bounded(n_tokens));
                const std::size_t pj = patent_of[j];
                if (pj == p) continue;
                const std::uint32_t other = deal[j];
                if (other == code) continue;
                if (patent_has_code(pj, code, j)) continue;
                if (patent_has_code(p, other, at)) continue;
                std::swap(deal[at], deal[j]);
                break;
            }
        }
        collect_duplicates(dups);
    }

    // Mixing phase: uniformly proposed token swaps accepted only when both
    // patents stay duplicate-free. The proposal is symmetric and the state
    // graph is connected under pairwise interchanges, so the stationary
    // distribution is uniform over duplicate-free assignments; the repair
    // bias decays geometrically in the number of sweeps. Small problems get
    // many sweeps, large ones amortize across tokens.
    const std::size_t sweeps =
        std::clamp<std::size_t>(4096 / std::max<std::size_t>(n_tokens, 1), 3, 512);
    const std::size_t mix_attempts = sweeps * n_tokens;
    for (std::size_t a = 0; a < mix_attempts; ++a) {
        const std::size_t i = static_cast<std::size_t>(rng.bounded(n_tokens));
        const std::size_t j = static_cast<std::size_t>(rng.bounded(n_tokens));
        const std::size_t pi = patent_of[i];
        const std::size_t pj = patent_of[j];
        if (pi == pj) continue;
        const std::uint32_t ci = deal[i];
        const std::uint32_t cj = deal[j];
        if (ci == cj) continue;
        if (patent_has_code(pj, ci, j)) continue;
        if (patent_has_code(pi, cj, i)) continue;
        std::swap(deal[i], deal[j]);
    }

    PairCountMap counts;
    for (std::size_t p = 0; p < slots_.size(); ++p) {
        const std::size_t b = offset[p];
        const std::size_t k = slots_[p];
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                ++counts[PairKey(codes_[deal[b + i]], codes_[deal[b + j]])];
    }
    return counts;
}

NullStats null_stats(const CooccurrenceNetwork& net, const NullModelConfig& config) {
    if (config.replicates < 2)
        throw std::invalid_argument("null_stats: need at least 2 replicates");

    const PermutationModel model(net);

    struct Acc {
        std::uint64_t sum = 0;
        std::uint64_t sumsq = 0;
    };
    using AccMap = std::unordered_map<PairKey, Acc, PairKeyHash>;

    // Integer accumulators commute exactly, so merging per-chunk results in
    // any order yields bit-identical mu/sigma for every thread count.
    AccMap total;
    std::mutex total_mutex;
    std::atomic<int> failures{0};

    const std::size_t replicates = static_cast<std::size_t>(config.replicates);
    for_each_chunk(replicates, 16, config.threads,
                   [&](std::size_t, std::size_t begin, std::size_t end) {
                       AccMap local;
                       for (std::size_t i = begin; i < end; ++i) {
                           auto counts = model.permute_once(split_seed(config.master_seed, i),
                                                            config.max_attempts);
                           if (!counts) {
                               failures.fetch_add(1);
                               continue;
                           }
                           for (const auto& [pair, c] : *counts) {
                               Acc& a = local[pair];
                               a.sum += c;
                               a.sumsq += static_cast<std::uint64_t>(c) * c;
                           }
                       }
                       std::lock_guard<std::mutex> lock(total_mutex);
                       for (const auto& [pair, a] : local) {
                           Acc& t = total[pair];
                           t.sum += a.sum;
                           t.sumsq += a.sumsq;
                       }
                   });

    NullStats out;
    out.replicates = config.replicates;
    out.master_seed = config.master_seed;
    out.failed_replicates = failures.load();
    const std::int64_t r_ok = config.replicates - out.failed_replicates;
    if (r_ok < 2)
        throw std::runtime_error("null_stats: fewer than 2 successful replicates (" +
                                 std::to_string(r_ok) + " of " +
                                 std::to_string(config.replicates) + ")");

    const double n = static_cast<double>(r_ok);
    for (const auto& [pair, a] : total) {
        const double sum = static_cast<double>(a.sum);
        const double sumsq = static_cast<double>(a.sumsq);
        const double mu = sum / n;
        double var = (sumsq - sum * sum / n) / (n - 1.0);
        if (var < 0.0) var = 0.0;  // round-off guard for constant counts
        out.mu_sigma[pair] = {mu, std::sqrt(var)};
    }
    return out;
}

namespace {

// Exhaustive enumeration state for exact_null_small.
struct Enumerator {
    std::vector<CpcCode> codes;
    std::vector<std::uint32_t> remaining;        // tokens left per code
    std::vector<std::uint32_t> slots;            // per-patent k
    std::vector<std::vector<std::uint32_t>> assigned;  // chosen code ids per patent
    std::uint64_t n_assignments = 0;
    std::unordered_map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> acc;  // key -> (S1, S2)

    void at_leaf() {
        ++n_assignments;
        std::unordered_map<std::uint64_t, std::uint32_t> counts;
        for (const auto& set : assigned)
            for (std::size_t i = 0; i < set.size(); ++i)
                for (std::size_t j = i + 1; j < set.size(); ++j) {
                    const std::uint64_t key =
                        (std::uint64_t(set[i]) << 32) | std::uint64_t(set[j]);
                    ++counts[key];
                }
        for (const auto& [key, c] : counts) {
            auto& [s1, s2] = acc[key];
            s1 += c;
            s2 += static_cast<std::uint64_t>(c) * c;
        }
    }

    // Chooses k distinct available codes for patent p, smallest code id first.
    void choose(std::size_t p, std::uint32_t k, std::uint32_t from,
                std::vector<std::uint32_t>& set) {
        if (k == 0) {
            assigned[p] = set;
            descend(p + 1);
            return;
        }
        for (std::uint32_t c = from; c + k <= codes.size(); ++c) {
            if (remaining[c] == 0) continue;
            --remaining[c];
            set.push_back(c);
            choose(p, k - 1, c + 1, set);
            set.pop_back();
            ++remaining[c];
        }
    }

    void descend(std::size_t p) {
        if (p == slots.size()) {
            at_leaf();
            return;
        }
        std::vector<std::uint32_t> set;
        set.reserve(slots[p]);
        choose(p, slots[p], 0, set);
    }
};

}  // namespace

std::unordered_map<PairKey, std::pair<double, double>, PairKeyHash> exact_null_small(
    const CooccurrenceNetwork& net, std::size_t max_tokens) {
    if (net.total_tokens() > max_tokens)
        throw std::invalid_argument("exact_null_small: token budget exceeded (" +
                                    std::to_string(net.total_tokens()) + " > " +
                                    std::to_string(max_tokens) + ")");

    Enumerator e;
    for (const auto& [code, n] : net.code_usage) e.codes.push_back(code);
    std::sort(e.codes.begin(), e.codes.end());
    e.remaining.resize(e.codes.size());
    for (std::size_t i = 0; i < e.codes.size(); ++i)
        e.remaining[i] = static_cast<std::uint32_t>(net.code_usage.at(e.codes[i]));
    for (const auto& [k, count] : net.slot_counts)
        for (std::uint64_t n = 0; n < count; ++n) e.slots.push_back(k);
    e.assigned.resize(e.slots.size());
    e.descend(0);

    if (e.n_assignments == 0)
        throw std::runtime_error("exact_null_small: no duplicate-free assignment exists");

    std::unordered_map<PairKey, std::pair<double, double>, PairKeyHash> out;
    const double n = static_cast<double>(e.n_assignments);
    for (const auto& [key, s] : e.acc) {
        const auto [s1, s2] = s;
        const double mean = static_cast<double>(s1) / n;
        double var = static_cast<double>(s2) / n - mean * mean;
        if (var < 0.0) var = 0.0;
        const CpcCode a = e.codes[static_cast<std::uint32_t>(key >> 32)];
        const CpcCode b = e.codes[static_cast<std::uint32_t>(key & 0xFFFFFFFFu)];
        out[PairKey(a, b)] = {mean, std::sqrt(var)};
    }
    return out;
}

ZScoreSnapshot make_snapshot(const CooccurrenceNetwork& net, const NullStats& stats) {
    ZScoreSnapshot snap;
    snap.year_t = net.year_t;
    snap.replicates = stats.replicates;
    snap.master_seed = stats.master_seed;

    auto add_pair = [&](PairKey pair) {
        if (snap.pairs.contains(pair)) return;
        PairStats ps;
        ps.pair = pair;
        ps.observed = net.pair_count(pair);
        const auto [mu, sigma] = stats.get(pair);
        ps.mu = mu;
        ps.sigma = sigma;
        ps.z = pair_z(static_cast<double>(ps.observed), mu, sigma);
        snap.pairs.emplace(pair, ps);
    };
    for (const auto& [pair, count] : net.pair_counts) add_pair(pair);
    for (const auto& [pair, ms] : stats.mu_sigma) add_pair(pair);
    return snap;
}

void save_snapshot(const ZScoreSnapshot& snap, std::ostream& out) {
    nlohmann::json header;
    header["format"] = "patnet-zscores-v1";
    header["year_t"] = snap.year_t;
    header["replicates"] = snap.replicates;
    header["master_seed"] = snap.master_seed;
    out << header.dump() << '\n';
    out << "pair_a,pair_b,observed,mu,sigma,z\n";

    std::vector<PairKey> keys;
    keys.reserve(snap.pairs.size());
    for (const auto& [pair, ps] : snap.pairs) keys.push_back(pair);
    std::sort(keys.begin(), keys.end());
    for (const PairKey& k : keys) {
        const PairStats& ps = snap.pairs.at(k);
        out << k.a.subclass() << ',' << k.b.subclass() << ',' << ps.observed << ','
            << format_double(ps.mu) << ',' << format_double(ps.sigma) << ',';
        if (ps.z) out << format_double(*ps.z);
        out << '\n';
    }
}

ZScoreSnapshot load_snapshot(std::istream& in) {
    std::string line;
    if (!read_line(in, line)) throw std::runtime_error("z-score snapshot: empty file");
    auto header = nlohmann::json::parse(line, nullptr, false);
    if (header.is_discarded() || header.value("format", "") != "patnet-zscores-v1")
        throw std::runtime_error("z-score snapshot: bad header");
    ZScoreSnapshot snap;
    snap.year_t = header.at("year_t").get<int>();
    snap.replicates = header.at("replicates").get<int>();
    snap.master_seed = header.at("master_seed").get<std::uint64_t>();

    if (!read_line(in, line) || !line.starts_with("pair_a,"))
        throw std::runtime_error("z-score snapshot: missing column header");
    while (read_line(in, line)) {
        if (line.empty()) continue;
        auto fields = csv_split(line);
        if (fields.size() != 6) throw std::runtime_error("z-score snapshot: bad row");
        auto a = CpcCode::parse(fields[0]);
        auto b = CpcCode::parse(fields[1]);
        if (!a || !b) throw std::runtime_error("z-score snapshot: bad pair codes");
        PairStats ps;
        ps.pair = PairKey(*a, *b);
        ps.observed = std::stoull(fields[2]);
        ps.mu = std::strtod(fields[3].c_str(), nullptr);
        ps.sigma = std::strtod(fields[4].c_str(), nullptr);
        if (!fields[5].empty()) ps.z = std::strtod(fields[5].c_str(), nullptr);
        snap.pairs.emplace(ps.pair, ps);
    }
    return snap;
}

void save_snapshot_file(const ZScoreSnapshot& snap, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write z-score snapshot: " + path);
    save_snapshot(snap, out);
}

ZScoreSnapshot load_snapshot_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open z-score snapshot: " + path);
    return load_snapshot(in);
}

}  // namespace patnet
