#include <doctest.h>

#include <sstream>

#include "patnet/cooccur.hpp"
#include "patnet/synth.hpp"

using namespace patnet;

namespace {

PatentApplication app_with_codes(const std::string& id, int year,
                                 std::vector<std::string> code_strs) {
    PatentApplication app;
    app.app_id = id;
    app.filing_date = *Date::make(year, 6, 15);
    app.status = AppStatus::pending;
    for (const auto& s : code_strs) app.cpc_codes.push_back(*CpcCode::parse(s));
    return app;
}

}  // namespace

TEST_CASE("single record network") {
    std::vector<PatentApplication> records = {app_with_codes("p1", 2004, {"A61B", "H04N"})};
    auto net = build_network(records, 2004);
    CHECK(net.n_patents == 1);
    CHECK(net.pair_count(PairKey(*CpcCode::parse("A61B"), *CpcCode::parse("H04N"))) == 1);
    CHECK(net.usage(*CpcCode::parse("A61B")) == 1);
    CHECK(net.usage(*CpcCode::parse("H04N")) == 1);
    CHECK(net.slot_counts.at(2) == 1);
}

TEST_CASE("pair counting identity over duplicate patents") {
    std::vector<PatentApplication> records = {
        app_with_codes("p1", 2003, {"A01B", "B01C", "C01D"}),
        app_with_codes("p2", 2003, {"A01B", "B01C", "C01D"}),
    };
    auto net = build_network(records, 2003);
    for (auto [x, y] : {std::pair{"A01B", "B01C"}, {"A01B", "C01D"}, {"B01C", "C01D"}})
        CHECK(net.pair_count(PairKey(*CpcCode::parse(x), *CpcCode::parse(y))) == 2);
    CHECK(net.total_pairs() == 6);  // 2 * C(3,2)
}

TEST_CASE("records filed after year_t are rejected") {
    std::vector<PatentApplication> records = {app_with_codes("p1", 2010, {"A61B", "H04N"})};
    CHECK_THROWS_AS(build_network(records, 2009), std::invalid_argument);
}

TEST_CASE("merge identities") {
    SynthParams params;
    params.n_patents = 400;
    auto records = synth_corpus(params, 99);
    auto net = build_network(records, params.last_year);

    SUBCASE("empty is the identity element") {
        CooccurrenceNetwork empty;
        empty.year_t = net.year_t;
        CHECK(merge_networks(net, empty) == net);
    }
    SUBCASE("commutative") {
        std::vector<PatentApplication> first(records.begin(), records.begin() + 150);
        std::vector<PatentApplication> rest(records.begin() + 150, records.end());
        auto a = build_network(first, params.last_year);
        auto b = build_network(rest, params.last_year);
        CHECK(merge_networks(a, b) == merge_networks(b, a));
        CHECK(merge_networks(a, b).total_pairs() == a.total_pairs() + b.total_pairs());
    }
}

TEST_CASE("cumulativity: build(<=t) equals merge(build(<=t-1), build(=t))") {
    SynthParams params;
    params.n_patents = 600;
    auto records = synth_corpus(params, 5);
    const int t = 2005;
    std::vector<PatentApplication> upto, before, exactly;
    for (const auto& r : records) {
        if (r.filing_year() <= t) upto.push_back(r);
        if (r.filing_year() <= t - 1) before.push_back(r);
        if (r.filing_year() == t) exactly.push_back(r);
    }
    auto whole = build_network(upto, t);
    auto merged = merge_networks(build_network(before, t - 1), build_network(exactly, t));
    CHECK(whole == merged);
}

TEST_CASE("parallel build equals serial build") {
    SynthParams params;
    params.n_patents = 3000;
    auto records = synth_corpus(params, 11);
    auto serial = build_network(records, params.last_year, 1);
    auto parallel = build_network(records, params.last_year, 8);
    CHECK(serial == parallel);
}

TEST_CASE("monotonicity in t") {
    SynthParams params;
    params.n_patents = 500;
    auto records = synth_corpus(params, 21);
    std::vector<PatentApplication> early, late;
    for (const auto& r : records) {
        if (r.filing_year() <= 2007) early.push_back(r);
        if (r.filing_year() <= 2012) late.push_back(r);
    }
    auto a = build_network(early, 2007);
    auto b = build_network(late, 2012);
    for (const auto& [pair, count] : a.pair_counts) CHECK(b.pair_count(pair) >= count);
}

TEST_CASE("usage bounds every pair count") {
    SynthParams params;
    params.n_patents = 400;
    auto records = synth_corpus(params, 31);
    auto net = build_network(records, params.last_year);
    for (const auto& [pair, count] : net.pair_counts) {
        CHECK(net.usage(pair.a) >= count);
        CHECK(net.usage(pair.b) >= count);
    }
}

TEST_CASE("snapshot save/load round-trips exactly") {
    SynthParams params;
    params.n_patents = 250;
    auto records = synth_corpus(params, 41);
    auto net = build_network(records, params.last_year);

    std::ostringstream out;
    save_network(net, out);
    std::istringstream in(out.str());
    auto loaded = load_network(in);
    CHECK(loaded == net);

    std::ostringstream out2;
    save_network(loaded, out2);
    CHECK(out.str() == out2.str());
}
