#include <doctest.h>

#include <map>
#include <numeric>

#include "aircap/errors.hpp"
#include "aircap/panel.hpp"
#include "aircap/rng.hpp"
#include "oracles.hpp"

using namespace aircap;

namespace {

ServingCarrier legacy(const std::string& code, bool talks, bool collected = true) {
    return {code, CarrierClass::Legacy, talks ? 1 : 0, collected};
}

ServingCarrier lcc(const std::string& code, bool talks = false, bool collected = true) {
    return {code, CarrierClass::Lcc, talks ? 1 : 0, collected};
}

MarketMonthContext ctx_of(std::vector<ServingCarrier> carriers) {
    MarketMonthContext ctx;
    ctx.market = {"AAA", "BBB"};
    ctx.ym = {2010, 6};
    ctx.carriers = std::move(carriers);
    return ctx;
}

MarketMonthContext random_context(Rng& rng) {
    const auto n_leg = rng.uniform_int(6);       // 0..5
    const auto n_lcc = rng.uniform_int(4);       // 0..3
    std::vector<ServingCarrier> carriers;
    for (std::uint64_t i = 0; i < n_leg; ++i) {
        const bool collected = rng.bernoulli(0.8);
        carriers.push_back({"L" + std::to_string(i), CarrierClass::Legacy,
                            rng.bernoulli(0.5) ? 1 : 0, collected});
    }
    for (std::uint64_t i = 0; i < n_lcc; ++i)
        carriers.push_back({"C" + std::to_string(i), CarrierClass::Lcc,
                            rng.bernoulli(0.5) ? 1 : 0, rng.bernoulli(0.8)});
    if (carriers.empty()) carriers.push_back({"F0", CarrierClass::Fringe, 0, false});
    rng.shuffle(carriers);
    return ctx_of(std::move(carriers));
}

}  // namespace

TEST_SUITE("panel") {

TEST_CASE("call month coverage by alignment") {
    using M = YearMonth;
    CHECK(months_for_call({2012, 1}, AlignmentMode::Shifted) ==
          std::array<M, 3>{M{2012, 5}, M{2012, 6}, M{2012, 7}});
    CHECK(months_for_call({2012, 1}, AlignmentMode::Contemporaneous) ==
          std::array<M, 3>{M{2012, 4}, M{2012, 5}, M{2012, 6}});
    CHECK(months_for_call({2012, 4}, AlignmentMode::Shifted) ==
          std::array<M, 3>{M{2013, 2}, M{2013, 3}, M{2013, 4}});
}

TEST_CASE("quarter_for_month inverts months_for_call") {
    for (auto mode : {AlignmentMode::Shifted, AlignmentMode::Contemporaneous}) {
        for (int idx = 2005 * 4; idx < 2015 * 4; ++idx) {
            const auto q = YearQuarter::from_index(idx);
            for (const auto& m : months_for_call(q, mode)) {
                CHECK(quarter_for_month(m, mode) == q);
            }
        }
    }
}

TEST_CASE("identification table rows") {
    // Two legacies, both talk.
    CHECK(capacity_discipline(ctx_of({legacy("DL", true), legacy("UA", true)})) == 1);
    // Monopoly is not talk-eligible.
    const auto mono = ctx_of({legacy("DL", true)});
    CHECK(capacity_discipline(mono) == 0);
    CHECK(talk_eligible(mono) == 0);
    CHECK(monopoly(mono) == 1);
    // An LCC in the market does not break the all-legacy rule.
    CHECK(capacity_discipline(ctx_of({legacy("DL", true), legacy("UA", true), legacy("US", true),
                                      lcc("F9")})) == 1);
    // One legacy plus one LCC is not talk-eligible.
    CHECK(talk_eligible(ctx_of({legacy("DL", true), lcc("F9")})) == 0);
    // A missing report blocks discipline and flips the missing indicator.
    const auto miss = ctx_of({legacy("DL", false, false), legacy("UA", true), legacy("US", true)});
    CHECK(missing_report(miss) == 1);
    CHECK(capacity_discipline(miss) == 0);
}

TEST_CASE("legacy-count split and carrier variants") {
    const auto three = ctx_of({legacy("DL", true), legacy("UA", true), legacy("US", true)});
    CHECK(capacity_discipline_k(three, 3) == 1);
    CHECK(capacity_discipline_k(three, 2) == 0);

    const auto duo = ctx_of({legacy("DL", true), legacy("UA", false)});
    const auto v = variant_indicators(duo, "DL");
    CHECK(v.only_j_talks == 1);
    CHECK(v.capdis_n1 == 1);

    const auto trio = ctx_of({legacy("DL", false), legacy("UA", true), legacy("US", true)});
    const auto w = variant_indicators(trio, "DL");
    CHECK(w.capdis_not_j == 1);
    CHECK(capacity_discipline(trio) == 0);
}

TEST_CASE("all two-cubed talk patterns match the direct definitions") {
    for (int bits = 0; bits < 8; ++bits) {
        const auto ctx = ctx_of({legacy("DL", bits & 1), legacy("UA", bits & 2),
                                 legacy("US", bits & 4)});
        const auto direct = oracle::indicators_direct(ctx, "DL");
        CHECK(capacity_discipline(ctx) == direct.capacity_discipline);
        CHECK(talk_eligible(ctx) == direct.talk_eligible);
        CHECK(monopoly(ctx) == direct.monopoly);
        CHECK(missing_report(ctx) == direct.missing_report);
        const auto v = variant_indicators(ctx, "DL");
        CHECK(v.only_j_talks == direct.only_j_talks);
        CHECK(v.capdis_not_j == direct.capdis_not_j);
        CHECK(v.capdis_n1 == direct.capdis_n1);
        CHECK(v.monopoly_capdis == direct.monopoly_capdis);
        CHECK(v.capdis_k == direct.capdis_k);
    }
}

TEST_CASE("legacy-count columns partition the discipline indicator") {
    Rng rng(21);
    for (int rep = 0; rep < 500; ++rep) {
        const auto ctx = random_context(rng);
        int total = 0;
        for (std::size_t k = 2; k <= 5; ++k) total += capacity_discipline_k(ctx, k);
        CHECK(total == capacity_discipline(ctx));
    }
}

TEST_CASE("exclusivity of the carrier variants") {
    Rng rng(22);
    for (int rep = 0; rep < 500; ++rep) {
        const auto ctx = random_context(rng);
        if (ctx.carriers.empty()) continue;
        const auto& j = ctx.carriers[rng.uniform_int(ctx.carriers.size())].code;
        const auto v = variant_indicators(ctx, j);
        if (v.only_j_talks == 1) CHECK(capacity_discipline(ctx) == 0);
        if (v.capdis_not_j == 1) CHECK(capacity_discipline(ctx) == 0);
    }
}

TEST_CASE("structure keys separate serving sets and merge merged carriers") {
    const CarrierRegistry std_reg = CarrierRegistry::standard();
    const Market m{"ITH", "PHL"};
    const auto k1 = market_structure_key("AA", m, {"AA", "DL"}, std_reg);
    const auto k2 = market_structure_key("AA", m, {"AA", "UA"}, std_reg);
    CHECK(k1 != k2);

    CarrierRegistry merged;
    merged.add({"DL", CarrierClass::Legacy, "DL"});
    merged.add({"NW", CarrierClass::Legacy, "DL"});
    merged.add({"AA", CarrierClass::Legacy, "AA"});
    CHECK(market_structure_key("AA", m, {"AA", "NW"}, merged) ==
          market_structure_key("AA", m, {"AA", "DL"}, merged));
}

TEST_CASE("market size classes at the documented cutoffs") {
    CHECK(market_size_class(1.0e6, 1.0e6) == SizeClass::Small);
    CHECK(market_size_class(2.0e6, 2.0e6) == SizeClass::Medium);
    CHECK(market_size_class(4.0e6, 4.0e6) == SizeClass::Large);
    CHECK(market_size_class(1.0e6, 4.0e6) == SizeClass::Medium);  // geometric mean 2e6
    CHECK_THROWS_AS(market_size_class(0.0, 1.0e6), NumericError);
}

TEST_CASE("quartile cutoffs use linear interpolation") {
    const auto [p25, p75] = percentile_cutoffs_25_75({4.0, 2.0, 1.0, 3.0});
    CHECK(p25 == doctest::Approx(1.75));
    CHECK(p75 == doctest::Approx(3.25));
}

TEST_CASE("city aggregation conserves seats and merges serving sets") {
    const std::map<std::string, std::string> cities{
        {"GSO", "GREENSBORO"}, {"ORD", "CHICAGO"}, {"MDW", "CHICAGO"}};
    std::vector<SegmentRecord> segs{
        {{2010, 6}, "AA", "GSO", "ORD", 1000, 10, 800},
        {{2010, 6}, "DL", "GSO", "ORD", 900, 9, 700},
        {{2010, 6}, "UA", "GSO", "MDW", 800, 8, 600},
        {{2010, 6}, "B6", "GSO", "MDW", 700, 7, 500},
        {{2010, 6}, "AA", "GSO", "MDW", 500, 5, 400},
    };
    const auto city = to_city_segments(segs, cities);

    std::map<std::string, double> before, after;
    for (const auto& s : segs) before[s.carrier] += s.seats;
    for (const auto& s : city) after[s.carrier] += s.seats;
    CHECK(before == after);

    // AA's two airport pairs collapse into one city segment.
    int aa_rows = 0;
    for (const auto& s : city)
        if (s.carrier == "AA") {
            ++aa_rows;
            CHECK(s.seats == 1500);
            CHECK(s.origin == "GREENSBORO");
            CHECK(s.dest == "CHICAGO");
        }
    CHECK(aa_rows == 1);

    CHECK_THROWS_AS(to_city_segments({{{2010, 6}, "AA", "GSO", "XXX", 1, 1, 1}}, cities),
                    SchemaError);
}

TEST_CASE("city pair indicators recompute on the merged serving set") {
    const std::map<std::string, std::string> cities{
        {"GSO", "GREENSBORO"}, {"ORD", "CHICAGO"}, {"MDW", "CHICAGO"}};
    // AA and DL talk on GSO-ORD; UA (no talk) and B6 fly GSO-MDW.
    std::vector<SegmentRecord> segs{
        {{2010, 6}, "AA", "GSO", "ORD", 1000, 10, 800},
        {{2010, 6}, "DL", "GSO", "ORD", 900, 9, 700},
        {{2010, 6}, "UA", "GSO", "MDW", 800, 8, 600},
        {{2010, 6}, "B6", "GSO", "MDW", 700, 7, 500},
    };
    FlagMap flags;
    const YearQuarter q = quarter_for_month({2010, 6}, AlignmentMode::Shifted);
    flags[{"AA", q}] = {true, 1};
    flags[{"DL", q}] = {true, 1};
    flags[{"UA", q}] = {true, 0};
    flags[{"B6", q}] = {true, 0};

    const auto airport_panel = build_panel(segs, flags, CarrierRegistry::standard(), {});
    for (const auto& r : airport_panel.rows) {
        if (r.market.key() == "GSO-ORD") CHECK(r.capacity_discipline == 1);
    }

    const auto city_panel =
        build_panel(to_city_segments(segs, cities), flags, CarrierRegistry::standard(), {});
    REQUIRE(!city_panel.rows.empty());
    for (const auto& r : city_panel.rows) {
        CHECK(r.market.key() == "GREENSBORO-CHICAGO");
        CHECK(r.talk_eligible == 1);
        CHECK(r.capacity_discipline == 0);
    }
}

TEST_CASE("single-airport cities reproduce the airport panel row for row") {
    const std::map<std::string, std::string> cities{{"AAA", "CITYA"}, {"BBB", "CITYB"}};
    std::vector<SegmentRecord> segs{
        {{2010, 6}, "AA", "AAA", "BBB", 1000, 10, 800},
        {{2010, 6}, "DL", "AAA", "BBB", 900, 9, 700},
    };
    FlagMap flags;
    const YearQuarter q = quarter_for_month({2010, 6}, AlignmentMode::Shifted);
    flags[{"AA", q}] = {true, 1};
    flags[{"DL", q}] = {true, 1};

    const auto a = build_panel(segs, flags, CarrierRegistry::standard(), {});
    const auto c = build_panel(to_city_segments(segs, cities), flags,
                               CarrierRegistry::standard(), {});
    REQUIRE(a.rows.size() == c.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].carrier == c.rows[i].carrier);
        CHECK(a.rows[i].seats == c.rows[i].seats);
        CHECK(a.rows[i].capacity_discipline == c.rows[i].capacity_discipline);
        CHECK(a.rows[i].talk_eligible == c.rows[i].talk_eligible);
    }
}

TEST_CASE("period split sends the threshold month to post") {
    Panel panel;
    panel.rows.resize(3);
    panel.rows[0].ym = {2009, 12};
    panel.rows[0].capacity_discipline = 1;
    panel.rows[1].ym = {2010, 1};
    panel.rows[1].capacity_discipline = 1;
    panel.rows[2].ym = {2010, 2};
    panel.rows[2].capacity_discipline = 0;

    const auto [pre, post] = period_split_columns(panel, {2010, 1});
    CHECK(pre == std::vector<double>{1, 0, 0});
    CHECK(post == std::vector<double>{0, 1, 0});
    for (std::size_t i = 0; i < panel.rows.size(); ++i)
        CHECK(pre[i] + post[i] == panel.rows[i].capacity_discipline);
}

TEST_CASE("serving set requires the monthly flight minimum") {
    std::vector<SegmentRecord> segs{
        {{2010, 6}, "AA", "AAA", "BBB", 1000, 10, 800},
        {{2010, 6}, "DL", "AAA", "BBB", 900, 9, 700},
        {{2010, 6}, "UA", "AAA", "BBB", 120, 3, 90},  // below the default of 4
    };
    FlagMap flags;
    const YearQuarter q = quarter_for_month({2010, 6}, AlignmentMode::Shifted);
    flags[{"AA", q}] = {true, 1};
    flags[{"DL", q}] = {true, 1};
    flags[{"UA", q}] = {true, 0};

    const auto panel = build_panel(segs, flags, CarrierRegistry::standard(), {});
    for (const auto& r : panel.rows) {
        CHECK(r.carrier != "UA");
        CHECK(r.n_carriers == 2);
        CHECK(r.capacity_discipline == 1);  // UA's silence does not count
    }

    PanelBuildOptions loose;
    loose.min_monthly_flights = 3;
    const auto wide = build_panel(segs, flags, CarrierRegistry::standard(), loose);
    bool has_ua = false;
    for (const auto& r : wide.rows) {
        has_ua = has_ua || r.carrier == "UA";
        CHECK(r.capacity_discipline == 0);
    }
    CHECK(has_ua);
}

TEST_CASE("fringe carriers pool under the shared code") {
    std::vector<SegmentRecord> segs{
        {{2010, 6}, "AA", "AAA", "BBB", 1000, 100, 800},
        {{2010, 6}, "Q1", "AAA", "BBB", 40, 4, 30},
        {{2010, 6}, "Q2", "AAA", "BBB", 40, 4, 30},
    };
    const auto pooled = collapse_fringe(segs, 5.0);
    int zz = 0;
    for (const auto& s : pooled) {
        CHECK(s.carrier != "Q1");
        CHECK(s.carrier != "Q2");
        if (s.carrier == "ZZ") ++zz;
    }
    CHECK(zz == 2);
    CHECK(pooled[0].carrier == "AA");
}

TEST_CASE("discipline implies talk-eligible on any panel") {
    Rng rng(31);
    std::vector<SegmentRecord> segs;
    FlagMap flags;
    const std::vector<std::string> codes{"AA", "DL", "UA", "US", "WN", "B6"};
    const std::vector<std::string> ports{"AAA", "BBB", "CCC", "DDD"};
    for (int m = 0; m < 6; ++m) {
        for (std::size_t o = 0; o < ports.size(); ++o)
            for (std::size_t d = 0; d < ports.size(); ++d) {
                if (o == d) continue;
                for (const auto& c : codes) {
                    if (!rng.bernoulli(0.4)) continue;
                    segs.push_back({YearMonth{2010, 1}.plus(m), c, ports[o], ports[d],
                                    500.0 + 10.0 * static_cast<double>(rng.uniform_int(50)),
                                    4 + static_cast<std::int64_t>(rng.uniform_int(10)),
                                    300.0});
                }
            }
    }
    for (const auto& c : codes)
        for (int qi = YearQuarter{2009, 3}.index(); qi <= YearQuarter{2010, 3}.index(); ++qi) {
            flags[{c, YearQuarter::from_index(qi)}] = {rng.bernoulli(0.9), rng.bernoulli(0.5) ? 1 : 0};
        }

    const auto panel = build_panel(segs, flags, CarrierRegistry::standard(), {});
    REQUIRE(!panel.rows.empty());
    for (const auto& r : panel.rows) {
        if (r.capacity_discipline == 1) CHECK(r.talk_eligible == 1);
        int total = 0;
        for (std::size_t k = 2; k <= 5; ++k) total += r.capdis_k[k - 2];
        CHECK(total == r.capacity_discipline);
    }
}

TEST_CASE("random contexts match the set-builder oracle") {
    Rng rng(77);
    for (int rep = 0; rep < 2000; ++rep) {
        const auto ctx = random_context(rng);
        const auto& j = ctx.carriers[rng.uniform_int(ctx.carriers.size())].code;
        const auto direct = oracle::indicators_direct(ctx, j);
        CHECK(capacity_discipline(ctx) == direct.capacity_discipline);
        CHECK(talk_eligible(ctx) == direct.talk_eligible);
        CHECK(monopoly(ctx) == direct.monopoly);
        CHECK(missing_report(ctx) == direct.missing_report);
        const auto v = variant_indicators(ctx, j);
        CHECK(v.only_j_talks == direct.only_j_talks);
        CHECK(v.capdis_not_j == direct.capdis_not_j);
        CHECK(v.capdis_n1 == direct.capdis_n1);
        CHECK(v.monopoly_capdis == direct.monopoly_capdis);
        CHECK(v.capdis_k == direct.capdis_k);
    }
}

}  // TEST_SUITE
