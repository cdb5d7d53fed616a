#include "patnet/cooccur.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "patnet/csv.hpp"
#include "patnet/parallel.hpp"

namespace patnet {

std::uint64_t CooccurrenceNetwork::total_pairs() const {
    std::uint64_t sum = 0;
    for (const auto& [k, v] : pair_counts) sum += v;
    return sum;
}

std::uint64_t CooccurrenceNetwork::total_tokens() const {
    std::uint64_t sum = 0;
    for (const auto& [k, v] : code_usage) sum += v;
    return sum;
}

namespace {

void add_record(CooccurrenceNetwork& net, const PatentApplication& rec) {
    const auto codes = rec.distinct_subclasses();
    ++net.n_patents;
    ++net.slot_counts[static_cast<std::uint32_t>(codes.size())];
    for (std::size_t i = 0; i < codes.size(); ++i) {
        ++net.code_usage[codes[i]];
        for (std::size_t j = i + 1; j < codes.size(); ++j)
            ++net.pair_counts[PairKey(codes[i], codes[j])];
    }
}

}  // namespace

CooccurrenceNetwork build_network(std::span<const PatentApplication> records, int year_t,
                                  unsigned threads) {
    for (const auto& r : records)
        if (r.filing_year() > year_t)
            throw std::invalid_argument("build_network: record " + r.app_id +
                                        " filed after year " + std::to_string(year_t));

    constexpr std::size_t kChunk = 65536;
    std::vector<CooccurrenceNetwork> partials(chunk_count(records.size(), kChunk));
    for_each_chunk(records.size(), kChunk, threads,
                   [&](std::size_t c, std::size_t begin, std::size_t end) {
                       for (std::size_t i = begin; i < end; ++i)
                           add_record(partials[c], records[i]);
                   });

    CooccurrenceNetwork net;
    net.year_t = year_t;
    for (const auto& p : partials) {
        net.n_patents += p.n_patents;
        for (const auto& [k, v] : p.pair_counts) net.pair_counts[k] += v;
        for (const auto& [k, v] : p.code_usage) net.code_usage[k] += v;
        for (const auto& [k, v] : p.slot_counts) net.slot_counts[k] += v;
    }
    return net;
}

CooccurrenceNetwork merge_networks(const CooccurrenceNetwork& a,
                                   const CooccurrenceNetwork& b) {
    CooccurrenceNetwork out = a;
    out.year_t = std::max(a.year_t, b.year_t);
    out.n_patents += b.n_patents;
    for (const auto& [k, v] : b.pair_counts) out.pair_counts[k] += v;
    for (const auto& [k, v] : b.code_usage) out.code_usage[k] += v;
    for (const auto& [k, v] : b.slot_counts) out.slot_counts[k] += v;
    return out;
}

void save_network(const CooccurrenceNetwork& net, std::ostream& out) {
    nlohmann::json header;
    header["format"] = "patnet-network-v1";
    header["year_t"] = net.year_t;
    header["n_patents"] = net.n_patents;
    out << header.dump() << '\n';

    out << "#codes\n";
    std::vector<std::pair<CpcCode, std::uint64_t>> codes(net.code_usage.begin(),
                                                         net.code_usage.end());
    std::sort(codes.begin(), codes.end());
    for (const auto& [c, n] : codes) out << c.subclass() << ',' << n << '\n';

    out << "#slots\n";
    for (const auto& [k, n] : net.slot_counts) out << k << ',' << n << '\n';

    out << "#pairs\n";
    std::vector<std::pair<PairKey, std::uint64_t>> pairs(net.pair_counts.begin(),
                                                         net.pair_counts.end());
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [p, n] : pairs)
        out << p.a.subclass() << ',' << p.b.subclass() << ',' << n << '\n';
}

CooccurrenceNetwork load_network(std::istream& in) {
    std::string line;
    if (!read_line(in, line)) throw std::runtime_error("network snapshot: empty file");
    auto header = nlohmann::json::parse(line, nullptr, false);
    if (header.is_discarded() || header.value("format", "") != "patnet-network-v1")
        throw std::runtime_error("network snapshot: bad header");
    CooccurrenceNetwork net;
    net.year_t = header.at("year_t").get<int>();
    net.n_patents = header.at("n_patents").get<std::uint64_t>();

    enum class Section { none, codes, slots, pairs } section = Section::none;
    while (read_line(in, line)) {
        if (line.empty()) continue;
        if (line == "#codes") { section = Section::codes; continue; }
        if (line == "#slots") { section = Section::slots; continue; }
        if (line == "#pairs") { section = Section::pairs; continue; }
        auto fields = csv_split(line);
        switch (section) {
            case Section::codes: {
                if (fields.size() != 2) throw std::runtime_error("network snapshot: bad code row");
                auto code = CpcCode::parse(fields[0]);
                if (!code) throw std::runtime_error("network snapshot: bad code " + fields[0]);
                net.code_usage[*code] = std::stoull(fields[1]);
                break;
            }
            case Section::slots: {
                if (fields.size() != 2) throw std::runtime_error("network snapshot: bad slot row");
                net.slot_counts[static_cast<std::uint32_t>(std::stoul(fields[0]))] =
                    std::stoull(fields[1]);
                break;
            }
            case Section::pairs: {
                if (fields.size() != 3) throw std::runtime_error("network snapshot: bad pair row");
                auto a = CpcCode::parse(fields[0]);
                auto b = CpcCode::parse(fields[1]);
                if (!a || !b) throw std::runtime_error("network snapshot: bad pair codes");
                net.pair_counts[PairKey(*a, *b)] = std::stoull(fields[2]);
                break;
            }
            case Section::none:
                throw std::runtime_error("network snapshot: data before section marker");
        }
    }
    return net;
}

void save_network_file(const CooccurrenceNetwork& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write network snapshot: " + path);
    save_network(net, out);
}

CooccurrenceNetwork load_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open network snapshot: " + path);
    return load_network(in);
}

}  // namespace patnet
