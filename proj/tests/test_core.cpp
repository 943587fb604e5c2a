#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "aircap/calendar.hpp"
#include "aircap/carrier.hpp"
#include "aircap/csv.hpp"
#include "aircap/data.hpp"
#include "aircap/errors.hpp"
#include "aircap/market.hpp"
#include "aircap/rng.hpp"

using namespace aircap;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& content) {
    const fs::path p = fs::temp_directory_path() / ("aircap_test_" + name);
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("month to quarter") {
    CHECK(YearMonth{2012, 5}.quarter() == YearQuarter{2012, 2});
    CHECK(YearMonth{2012, 1}.quarter() == YearQuarter{2012, 1});
    CHECK(YearMonth{2016, 12}.quarter() == YearQuarter{2016, 4});
}

TEST_CASE("month arithmetic crosses years") {
    CHECK(YearMonth{2012, 11}.plus(3) == YearMonth{2013, 2});
    CHECK(YearMonth{2012, 1}.plus(-1) == YearMonth{2011, 12});
    CHECK(YearQuarter{2012, 4}.next() == YearQuarter{2013, 1});
    CHECK(YearQuarter{2012, 1}.prev() == YearQuarter{2011, 4});
}

TEST_CASE("market keys are directional, cluster keys are not") {
    const Market ab{"GSO", "ORD"}, ba{"ORD", "GSO"};
    CHECK(ab.key() == "GSO-ORD");
    CHECK(ba.key() == "ORD-GSO");
    CHECK(ab.cluster_key() == ba.cluster_key());
    CHECK(Market{"ITH", "PHL"}.cluster_key() == "ITH|PHL");
}

TEST_CASE("rng determinism and derive independence") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    CHECK(Rng::derive(1, 0) != Rng::derive(1, 1));
    CHECK(Rng::derive(1, 0) == Rng::derive(1, 0));
}

TEST_CASE("rng uniform_int stays in range") {
    Rng r(7);
    for (int i = 0; i < 1000; ++i) CHECK(r.uniform_int(13) < 13);
}

TEST_CASE("csv reader enforces rectangular shape") {
    const auto p = temp_file("ragged.csv", "a,b\n1,2\n3\n");
    CHECK_THROWS_AS(csv::read_file(p), SchemaError);
    fs::remove(p);
}

TEST_CASE("csv reader names missing columns") {
    const auto t = csv::read_string("a,b\n1,2\n", "mem");
    CHECK(t.col("a") == 0);
    CHECK_THROWS_AS(t.col("zz"), SchemaError);
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.0, 1.0, -2.0193, 1e-12, 3.141592653589793, 8.5e6}) {
        CHECK(std::stod(csv::format_double(v)) == v);
    }
    CHECK(csv::format_double(1.0) == "1");
}

TEST_CASE("segments loader parses the documented schema") {
    const auto p = temp_file(
        "seg.csv",
        "year,month,ticketing_carrier,origin,dest,seats,flights,passengers\n"
        "2010,3,AA,ABC,DEF,1200,10,900\n");
    const auto v = load_segments(p);
    REQUIRE(v.size() == 1);
    CHECK(v[0].ym == YearMonth{2010, 3});
    CHECK(v[0].carrier == "AA");
    CHECK(v[0].origin == "ABC");
    CHECK(v[0].seats == 1200.0);
    CHECK(v[0].flights == 10);
    fs::remove(p);
}

TEST_CASE("segments loader rejects out-of-range month") {
    const auto p = temp_file(
        "segbad.csv",
        "year,month,ticketing_carrier,origin,dest,seats,flights,passengers\n"
        "2010,13,AA,ABC,DEF,1,1,1\n");
    CHECK_THROWS_AS(load_segments(p), SchemaError);
    fs::remove(p);
}

TEST_CASE("status loader covers all statuses") {
    const auto p = temp_file("st.csv",
                             "carrier,year,quarter,status\n"
                             "AA,2010,1,collected\n"
                             "UA,2010,1,bankruptcy\n"
                             "DL,2010,2,merger\n"
                             "B6,2010,2,private\n"
                             "WN,2010,3,other\n");
    const auto v = load_status(p);
    REQUIRE(v.size() == 5);
    CHECK(v[0].status == TranscriptStatus::Collected);
    CHECK(v[1].status == TranscriptStatus::Bankruptcy);
    CHECK(v[4].status == TranscriptStatus::Other);
    fs::remove(p);
}

TEST_CASE("label loader parses sources") {
    const auto p = temp_file("lb.csv",
                             "carrier,year,quarter,label,source\n"
                             "AA,2010,1,1,authors\n"
                             "AA,2010,2,0,ra\n"
                             "UA,2010,1,1,automatic\n");
    const auto v = load_labels(p);
    REQUIRE(v.size() == 3);
    CHECK(v[0].source == LabelSource::Authors);
    CHECK(v[1].source == LabelSource::RA);
    CHECK(v[2].source == LabelSource::Automatic);
    fs::remove(p);
}

TEST_CASE("transcript file naming convention") {
    std::string carrier;
    YearQuarter yq;
    CHECK(parse_transcript_name("AA_2010Q3.txt", carrier, yq));
    CHECK(carrier == "AA");
    CHECK(yq == YearQuarter{2010, 3});
    CHECK_FALSE(parse_transcript_name("notes.txt", carrier, yq));
    CHECK_FALSE(parse_transcript_name("AA_2010Q5.txt", carrier, yq));
}

TEST_CASE("carrier registry merger groups") {
    CarrierRegistry reg = CarrierRegistry::standard();
    CHECK(reg.is_legacy("AA"));
    CHECK(reg.is_lcc("WN"));
    CHECK(reg.klass("Q9") == CarrierClass::Fringe);
    CHECK(reg.merger_group("Q9") == "Q9");

    CarrierRegistry custom;
    custom.add({"NW", CarrierClass::Legacy, "DL"});
    custom.add({"DL", CarrierClass::Legacy, "DL"});
    CHECK(custom.merger_group("NW") == custom.merger_group("DL"));
}

}  // TEST_SUITE
