#include <doctest.h>

#include "patnet/cpc.hpp"

using namespace patnet;

TEST_CASE("subclass parse") {
    auto code = CpcCode::parse("A61B");
    REQUIRE(code.has_value());
    CHECK(code->section() == 'A');
    CHECK(code->cpc_class() == "A61");
    CHECK(code->subclass() == "A61B");
}

TEST_CASE("deeper suffixes truncate to the subclass") {
    auto code = CpcCode::parse("A61B5/02");
    REQUIRE(code.has_value());
    CHECK(code->subclass() == "A61B");
    CHECK(*code == *CpcCode::parse("A61B"));
}

TEST_CASE("pattern violations rejected") {
    CHECK_FALSE(CpcCode::parse("61AB").has_value());
    CHECK_FALSE(CpcCode::parse("A6").has_value());
    CHECK_FALSE(CpcCode::parse("AB1C").has_value());
    CHECK_FALSE(CpcCode::parse("I01A").has_value());  // I is not a CPC section
    CHECK(CpcCode::parse("Y02E").has_value());
    CHECK(CpcCode::parse("h04n")->subclass() == "H04N");  // case folded
}

TEST_CASE("pair keys are unordered") {
    const CpcCode a = *CpcCode::parse("A61B");
    const CpcCode b = *CpcCode::parse("H04N");
    CHECK(PairKey(a, b) == PairKey(b, a));
    CHECK(PairKey(a, b).a == a);  // stored sorted
}
