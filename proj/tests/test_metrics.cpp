#include <doctest.h>

#include <cmath>
#include <sstream>

#include "patnet/metrics.hpp"
#include "patnet/rng.hpp"
#include "testutil.hpp"

using namespace patnet;
using testutil::plain_app;

namespace {

GenderDict tiny_dict() {
    std::istringstream in(
        "name,gender,probability\nmaria,woman,0.99\nanna,woman,0.98\n"
        "john,man,0.99\npaul,man,0.98\n");
    return GenderDict::load(in);
}

}  // namespace

TEST_CASE("examiner experience counts strictly prior applications") {
    std::vector<PatentApplication> records;
    for (int i = 0; i < 3; ++i) {
        auto app = plain_app("e" + std::to_string(i), 2004, {"A01B", "B02C"});
        app.filing_date = *Date::make(2004, 1 + i, 10);
        app.examiner_id = "EX1";
        records.push_back(app);
    }
    auto later = plain_app("late", 2005, {"A01B", "B02C"});
    later.examiner_id = "EX1";
    records.push_back(later);

    auto idx = ExperienceIndex::build(records);
    CHECK(idx.examiner_prior("EX1", *Date::make(2004, 12, 1)) == 3);
    CHECK(idx.examiner_prior("EX1", *Date::make(2004, 2, 10)) == 1);  // same-day excluded
    CHECK(idx.examiner_prior("EX9", *Date::make(2010, 1, 1)) == 0);   // first encounter
    CHECK(idx.examiner_experience("EX1", *Date::make(2004, 12, 1)).count == 3.0);
}

TEST_CASE("experience is monotone in as_of") {
    std::vector<PatentApplication> records;
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        auto app = plain_app("m" + std::to_string(i), 2004, {"A01B", "B02C"});
        app.filing_date = Date::from_days(Date{2003, 1, 1}.to_days() +
                                          static_cast<std::int64_t>(rng.bounded(1000)));
        app.examiner_id = "EXM";
        records.push_back(app);
    }
    auto idx = ExperienceIndex::build(records);
    std::int64_t prev = -1;
    for (int m = 1; m <= 12; ++m) {
        const std::int64_t c = idx.examiner_prior("EXM", *Date::make(2005, m, 1));
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("inventor team experience is the mean of member priors") {
    std::vector<PatentApplication> records;
    auto mk = [&](const std::string& id, int month, std::vector<std::string> inventors) {
        auto app = plain_app(id, 2004, {"A01B", "B02C"});
        app.filing_date = *Date::make(2004, month, 1);
        app.inventor_names = std::move(inventors);
        records.push_back(app);
    };
    mk("a1", 1, {"Maria Lopez"});
    mk("a2", 2, {"Maria Lopez"});
    mk("a3", 3, {"John Smith", "Maria Lopez"});
    mk("a4", 4, {"John Smith"});
    // priors at 2004-05-01: Maria 3, John 2 -> no wait: John appears in a3, a4 -> 2
    auto idx = ExperienceIndex::build(records);
    std::vector<std::string> team = {"Maria Lopez", "John Smith"};
    CHECK(idx.inventor_team_experience(team, *Date::make(2004, 5, 1)).count ==
          doctest::Approx(2.5));
    std::vector<std::string> priors24 = {"Maria Lopez"};
    CHECK(idx.inventor_team_experience(priors24, *Date::make(2004, 3, 1)).count ==
          doctest::Approx(2.0));
}

TEST_CASE("tercile cuts put ties in the lower bin") {
    std::vector<double> pop = {1, 1, 1, 2, 2, 2, 3, 3, 3};
    auto cuts = tercile_cuts(pop);
    CHECK(cuts.classify(1) == Tercile::low);
    CHECK(cuts.classify(2) == Tercile::mid);
    CHECK(cuts.classify(3) == Tercile::high);
    CHECK(cuts.classify(1.5) == Tercile::mid);
}

TEST_CASE("claims delta arithmetic") {
    CHECK(claims_delta(5, 5).delta_absolute == 0);
    CHECK(claims_delta(5, 5).delta_relative == doctest::Approx(0.0));
    CHECK(claims_delta(4, 1).delta_absolute == 3);
    CHECK(claims_delta(4, 1).delta_relative == doctest::Approx(0.75));
    CHECK(claims_delta(3, 4).delta_absolute == -1);
    CHECK(claims_delta(3, 4).delta_relative == doctest::Approx(-1.0 / 3.0));
    CHECK_THROWS_AS(claims_delta(0, 0), std::invalid_argument);
}

TEST_CASE("grant latency") {
    CHECK(grant_latency(*Date::parse("2005-01-01"), *Date::parse("2005-01-01")) == 0);
    CHECK(grant_latency(*Date::parse("2005-01-01"), *Date::parse("2005-01-31")) == 30);
    CHECK(grant_latency(*Date::parse("2004-02-28"), *Date::parse("2004-03-01")) == 2);
    CHECK_THROWS_AS(grant_latency(*Date::parse("2005-01-02"), *Date::parse("2005-01-01")),
                    std::invalid_argument);
}

TEST_CASE("survivorship index") {
    auto dict = tiny_dict();
    std::vector<PatentApplication> records;
    auto add_apps = [&](const std::string& ex_id, const std::string& ex_name, int n) {
        for (int i = 0; i < n; ++i) {
            auto app = plain_app(ex_id + std::to_string(i), 2004, {"A01B", "B02C"});
            app.examiner_id = ex_id;
            app.examiner_name = ex_name;
            records.push_back(app);
        }
    };
    SUBCASE("balanced case from the definition") {
        // man examiner with 10 apps, woman examiner with 6 -> 10*0.5 - 6*0.5 = 2
        add_apps("M1", "John Smith", 10);
        add_apps("W1", "Maria Lopez", 6);
        CHECK(survivorship_index(records, "A01", dict) == doctest::Approx(2.0));
    }
    SUBCASE("symmetric experience and shares give zero") {
        add_apps("M1", "John Smith", 7);
        add_apps("W1", "Maria Lopez", 7);
        CHECK(survivorship_index(records, "A01", dict) == doctest::Approx(0.0));
    }
    SUBCASE("all-men class reduces to mean experience") {
        add_apps("M1", "John Smith", 4);
        CHECK(survivorship_index(records, "A01", dict) == doctest::Approx(4.0));
    }
    SUBCASE("antisymmetric under swapping gender groups") {
        add_apps("M1", "John Smith", 9);
        add_apps("W1", "Maria Lopez", 3);
        add_apps("W2", "Anna Schmidt", 5);
        const double forward = survivorship_index(records, "A01", dict);
        std::vector<PatentApplication> swapped;
        for (auto app : records) {
            // swap the gendered names
            if (*app.examiner_name == "John Smith") app.examiner_name = "Maria Lopez";
            else if (*app.examiner_name == "Maria Lopez") app.examiner_name = "John Smith";
            else app.examiner_name = "Paul Weber";
            swapped.push_back(app);
        }
        CHECK(survivorship_index(swapped, "A01", dict) == doctest::Approx(-forward));
    }
    SUBCASE("no determined examiner throws") {
        add_apps("X1", "Q. Unknownson", 3);
        CHECK_THROWS_AS(survivorship_index(records, "A01", dict), std::invalid_argument);
    }
}

TEST_CASE("over-assignment arithmetic") {
    SUBCASE("identical rates give zero on both routes") {
        std::vector<AssignmentObs> obs;
        for (int i = 0; i < 200; ++i) {
            obs.push_back({true, i % 4 == 0});
            obs.push_back({false, i % 4 == 0});
        }
        auto oa = over_assignment(obs);
        CHECK(oa.ratio_based == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(oa.logit_based == doctest::Approx(0.0).epsilon(1e-6));
    }
    SUBCASE("ratio case: 0.3 vs 0.25 gives 0.2") {
        std::vector<AssignmentObs> obs;
        for (int i = 0; i < 20; ++i) obs.push_back({true, i < 6});    // 6/20 = 0.3
        for (int i = 0; i < 20; ++i) obs.push_back({false, i < 5});   // 5/20 = 0.25
        CHECK(over_assignment(obs).ratio_based == doctest::Approx(0.2));
    }
    SUBCASE("empty cell throws") {
        std::vector<AssignmentObs> obs = {{true, true}};
        CHECK_THROWS_AS(over_assignment(obs), std::invalid_argument);
    }
}

TEST_CASE("reversal rate tabulation") {
    SUBCASE("rate definition") {
        std::vector<ReversalObs> rows;
        for (int i = 0; i < 10; ++i) rows.push_back({1.0, 1.0, true, i < 4});
        auto table = reversal_rates(rows, 1);
        REQUIRE(table.unconventional.size() == 1);
        CHECK(table.unconventional[0].rate.value() == doctest::Approx(0.4));
        CHECK(table.unconventional[0].n_appealed == 10);
        CHECK_FALSE(table.conventional[0].rate.has_value());
        CHECK(table.conventional[0].n_appealed == 0);
    }
    SUBCASE("no appealed rows gives an all-null table") {
        std::vector<ReversalObs> rows = {{1.0, 1.0, false, false}};
        auto table = reversal_rates(rows, 3);
        for (const auto& cell : table.conventional) CHECK_FALSE(cell.rate.has_value());
        for (const auto& cell : table.unconventional) CHECK_FALSE(cell.rate.has_value());
    }
    SUBCASE("exact zeros of p_atypical are conventional") {
        std::vector<ReversalObs> rows = {{1.0, 0.0, true, true}};
        auto table = reversal_rates(rows, 1);
        CHECK(table.conventional[0].n_appealed == 1);
        CHECK(table.unconventional[0].n_appealed == 0);
    }
}

TEST_CASE("lost value matches the published arithmetic") {
    // 33,761 applications, men 70.55%, women 63.92%, $104,703.5 each
    auto lv = lost_value(33761, 0.7055, 0.6392, 104703.5);
    CHECK(lv.lost_patents == 2238);
    CHECK(lv.lost_dollars == doctest::Approx(234.3e6).epsilon(0.001));
    CHECK_FALSE(lv.negative);

    CHECK(lost_value(1000, 0.5, 0.5, 100.0).lost_patents == 0);
    CHECK(lost_value(1000, 0.5, 0.5, 100.0).lost_dollars == doctest::Approx(0.0));
    CHECK(lost_value(1000, 0.4, 0.5, 100.0).negative);

    // per-patent value is the mean of the two literature estimates
    CHECK((101850.0 + 107557.0) / 2.0 == doctest::Approx(104703.5));
}

TEST_CASE("lost value linearity") {
    const auto base = lost_value(10000, 0.75, 0.25, 50.0);
    const auto doubled_apps = lost_value(20000, 0.75, 0.25, 50.0);
    CHECK(doubled_apps.lost_patents == 2 * base.lost_patents);
    const auto doubled_value = lost_value(10000, 0.75, 0.25, 100.0);
    CHECK(doubled_value.lost_dollars == doctest::Approx(2.0 * base.lost_dollars));
    // the floor makes n_apps-linearity exact only up to one unit
    const auto a = lost_value(10000, 0.7, 0.6, 50.0);
    const auto b = lost_value(20000, 0.7, 0.6, 50.0);
    CHECK(std::llabs(b.lost_patents - 2 * a.lost_patents) <= 1);
}

TEST_CASE("reassignment gain matches the published arithmetic") {
    CHECK(reassignment_gain(0.704, 0.443, 0.5) == doctest::Approx(0.1305));
    CHECK(reassignment_gain(0.5, 0.4, 0.0) == doctest::Approx(0.0));
    CHECK(reassignment_gain(0.818, 0.371, 1.0) == doctest::Approx(0.447));
    CHECK_THROWS_AS(reassignment_gain(1.2, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("estimator reports echo their inputs") {
    auto rep = report_lost_value(33761, 0.7055, 0.6392, 104703.5);
    const std::string json = rep.to_json();
    CHECK(json.find("\"formula\": \"lost_value\"") != std::string::npos);
    CHECK(json.find("33761") != std::string::npos);
    CHECK(json.find("2238") != std::string::npos);
}
