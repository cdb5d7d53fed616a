#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "patnet/rng.hpp"
#include "patnet/scoring.hpp"
#include "testutil.hpp"

using namespace patnet;
using testutil::plain_app;

namespace {

// Snapshot with the given focal-pair z values against code_strs[0].
ZScoreSnapshot snapshot_with(const std::vector<std::string>& code_strs,
                             const std::vector<std::optional<double>>& zs, int year = 2004) {
    ZScoreSnapshot snap;
    snap.year_t = year;
    const CpcCode focal = *CpcCode::parse(code_strs.front());
    for (std::size_t i = 1; i < code_strs.size(); ++i) {
        PairStats ps;
        ps.pair = PairKey(focal, *CpcCode::parse(code_strs[i]));
        ps.z = zs[i - 1];
        ps.mu = 0.0;
        ps.sigma = zs[i - 1] ? 1.0 : 0.0;
        ps.observed = 0;
        snap.pairs.emplace(ps.pair, ps);
    }
    return snap;
}

}  // namespace

TEST_CASE("focal pairs follow listing order and dedupe") {
    auto app = plain_app("p", 2005, {"A61B", "H04N", "G08B", "H04Q"});
    auto pairs = focal_pairs(app);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].second == *CpcCode::parse("H04N"));
    CHECK(pairs[1].second == *CpcCode::parse("G08B"));
    CHECK(pairs[2].second == *CpcCode::parse("H04Q"));

    auto two = focal_pairs(plain_app("p", 2005, {"A01B", "B02C"}));
    CHECK(two.size() == 1);

    auto deduped = focal_pairs(plain_app("p", 2005, {"A01B", "B02C", "B02C"}));
    CHECK(deduped.size() == 1);

    CHECK_THROWS_AS(focal_pairs(plain_app("p", 2005, {"A01B", "A01B5/00"})),
                    std::invalid_argument);
}

TEST_CASE("fig-1 style anchor: most uncommon link scores 25.9 under min-z") {
    auto app = plain_app("p", 2005, {"A61B", "H04N", "G08B", "H04Q"});
    // pair unconventionality (-z) values 25.9, 3.0, 1.1
    auto snap = snapshot_with({"A61B", "H04N", "G08B", "H04Q"}, {-25.9, -3.0, -1.1});
    auto result = score_patent(app, snap, Aggregation::min);
    REQUIRE(result.p_atypical.has_value());
    CHECK(*result.p_atypical == doctest::Approx(25.9));
    CHECK(*result.L == doctest::Approx(-25.9));
    CHECK(result.n_focal_pairs == 3);
    CHECK(result.n_excluded_pairs == 0);
}

TEST_CASE("single zero-z pair scores zero under every aggregation") {
    auto app = plain_app("p", 2005, {"A01B", "B02C"});
    auto snap = snapshot_with({"A01B", "B02C"}, {0.0});
    for (auto agg : {Aggregation::min, Aggregation::mean, Aggregation::median}) {
        auto r = score_patent(app, snap, agg);
        CHECK(*r.p_atypical == doctest::Approx(0.0));
    }
}

TEST_CASE("aggregation arithmetic on z = {-2,-4,+6}") {
    auto app = plain_app("p", 2005, {"A01B", "B02C", "C03D", "D04E"});
    auto snap = snapshot_with({"A01B", "B02C", "C03D", "D04E"}, {-2.0, -4.0, 6.0});
    CHECK(*score_patent(app, snap, Aggregation::mean).p_atypical == doctest::Approx(0.0));
    CHECK(*score_patent(app, snap, Aggregation::min).p_atypical == doctest::Approx(4.0));
    CHECK(*score_patent(app, snap, Aggregation::median).p_atypical == doctest::Approx(2.0));
}

TEST_CASE("undefined pairs are excluded and counted; all-undefined is undefined") {
    auto app = plain_app("p", 2005, {"A01B", "B02C", "C03D"});
    SUBCASE("one undefined") {
        auto snap = snapshot_with({"A01B", "B02C", "C03D"}, {std::nullopt, 1.5});
        auto r = score_patent(app, snap, Aggregation::min);
        CHECK(r.n_focal_pairs == 1);
        CHECK(r.n_excluded_pairs == 1);
        CHECK(*r.p_atypical == doctest::Approx(-1.5));
    }
    SUBCASE("pair absent from the snapshot entirely") {
        auto snap = snapshot_with({"A01B", "B02C"}, {1.5});  // no entry for C03D
        auto r = score_patent(app, snap, Aggregation::min);
        CHECK(r.n_focal_pairs == 1);
        CHECK(r.n_excluded_pairs == 1);
    }
    SUBCASE("all undefined") {
        auto snap = snapshot_with({"A01B", "B02C", "C03D"}, {std::nullopt, std::nullopt});
        auto r = score_patent(app, snap, Aggregation::mean);
        CHECK_FALSE(r.L.has_value());
        CHECK_FALSE(r.p_atypical.has_value());
        CHECK(r.n_excluded_pairs == 2);
    }
}

TEST_CASE("min aggregation dominates mean and median over random z-sets") {
    Rng rng(99);
    auto app = plain_app("p", 2005, {"A01B", "B02C", "C03D", "D04E", "E05F"});
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<std::optional<double>> zs;
        for (int i = 0; i < 4; ++i) zs.emplace_back((rng.next_double() - 0.5) * 20.0);
        auto snap = snapshot_with({"A01B", "B02C", "C03D", "D04E", "E05F"}, zs);
        const double p_min = *score_patent(app, snap, Aggregation::min).p_atypical;
        const double p_mean = *score_patent(app, snap, Aggregation::mean).p_atypical;
        const double p_median = *score_patent(app, snap, Aggregation::median).p_atypical;
        CHECK(p_min >= p_mean);
        CHECK(p_min >= p_median);
    }
}

TEST_CASE("permuting non-focal codes never changes the score") {
    auto snap = snapshot_with({"A01B", "B02C", "C03D", "D04E"}, {-1.0, 2.0, 5.0});
    auto a = plain_app("p", 2005, {"A01B", "B02C", "C03D", "D04E"});
    auto b = plain_app("p", 2005, {"A01B", "D04E", "B02C", "C03D"});
    for (auto agg : {Aggregation::min, Aggregation::mean, Aggregation::median})
        CHECK(*score_patent(a, snap, agg).p_atypical ==
              *score_patent(b, snap, agg).p_atypical);
}

TEST_CASE("timing policy selects the snapshot year") {
    SnapshotSet snapshots;
    snapshots.by_year[2004] = snapshot_with({"A01B", "B02C"}, {1.0}, 2004);
    snapshots.by_year[2005] = snapshot_with({"A01B", "B02C"}, {3.0}, 2005);
    std::vector<PatentApplication> records = {plain_app("p", 2005, {"A01B", "B02C"})};

    auto prior = score_corpus(records, snapshots, Aggregation::min, TimingPolicy::prior_year);
    REQUIRE(prior.size() == 1);
    CHECK(prior[0].network_year == 2004);
    CHECK(*prior[0].p_atypical == doctest::Approx(-1.0));

    auto same = score_corpus(records, snapshots, Aggregation::min, TimingPolicy::same_year);
    CHECK(same[0].network_year == 2005);
    CHECK(*same[0].p_atypical == doctest::Approx(-3.0));
}

TEST_CASE("missing snapshot year raises SnapshotMissingError") {
    SnapshotSet snapshots;
    snapshots.by_year[2005] = snapshot_with({"A01B", "B02C"}, {1.0}, 2005);
    std::vector<PatentApplication> records = {plain_app("p", 2005, {"A01B", "B02C"})};
    CHECK_THROWS_AS(
        score_corpus(records, snapshots, Aggregation::min, TimingPolicy::prior_year),
        SnapshotMissingError);
}

TEST_CASE("empty corpus scores to an empty table") {
    SnapshotSet snapshots;
    std::vector<PatentApplication> records;
    CHECK(score_corpus(records, snapshots, Aggregation::min).empty());
}

TEST_CASE("score table round-trips through CSV") {
    SnapshotSet snapshots;
    snapshots.by_year[2004] = snapshot_with({"A01B", "B02C", "C03D"}, {1.25, std::nullopt}, 2004);
    std::vector<PatentApplication> records = {
        plain_app("p1", 2005, {"A01B", "B02C", "C03D"}),
        plain_app("p2", 2005, {"C03D", "A01B"}),
    };
    auto scores = score_corpus(records, snapshots, Aggregation::median);
    std::ostringstream out;
    write_score_table(out, scores);
    std::istringstream in(out.str());
    auto loaded = read_score_table(in);
    REQUIRE(loaded.size() == scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        CHECK(loaded[i].app_id == scores[i].app_id);
        CHECK(loaded[i].network_year == scores[i].network_year);
        CHECK(loaded[i].p_atypical.has_value() == scores[i].p_atypical.has_value());
        if (scores[i].p_atypical) CHECK(*loaded[i].p_atypical == *scores[i].p_atypical);
        CHECK(loaded[i].n_excluded_pairs == scores[i].n_excluded_pairs);
    }
}

TEST_CASE("output order equals input order regardless of threads") {
    SnapshotSet snapshots;
    snapshots.by_year[2004] = snapshot_with({"A01B", "B02C"}, {1.0}, 2004);
    std::vector<PatentApplication> records;
    for (int i = 0; i < 1000; ++i)
        records.push_back(plain_app("p" + std::to_string(i), 2005, {"A01B", "B02C"}));
    auto scores = score_corpus(records, snapshots, Aggregation::min,
                               TimingPolicy::prior_year, 8);
    REQUIRE(scores.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) CHECK(scores[i].app_id == records[i].app_id);
}
