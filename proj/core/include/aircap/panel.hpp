#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aircap/calendar.hpp"
#include "aircap/carrier.hpp"
#include "aircap/data.hpp"
#include "aircap/market.hpp"

namespace aircap {

// How an earnings call (held in the month after quarter end) maps to the
// months its statements are taken to cover.
enum class AlignmentMode { Shifted, Contemporaneous };

AlignmentMode alignment_from_string(const std::string& s);
std::string to_string(AlignmentMode mode);

// The three months covered by the call for quarter q: call month M is the
// first month after the quarter ends; Shifted covers M+1..M+3,
// Contemporaneous covers M..M+2.
std::array<YearMonth, 3> months_for_call(YearQuarter q, AlignmentMode mode);

// Inverse map: the quarter whose call covers month m.
YearQuarter quarter_for_month(YearMonth m, AlignmentMode mode);

struct ServingCarrier {
    std::string code;
    CarrierClass klass = CarrierClass::Fringe;
    int flag = 0;           // communication flag; meaningful only when collected
    bool collected = false;  // transcript available for the aligned quarter
};

struct MarketMonthContext {
    Market market;
    YearMonth ym{};
    std::vector<ServingCarrier> carriers;

    std::size_t n_legacy() const;
    std::size_t n_legacy_talking() const;
};

// Market-month indicators.
int capacity_discipline(const MarketMonthContext& ctx);  // >=2 legacies, all talk
int talk_eligible(const MarketMonthContext& ctx);        // >=2 legacies serve
int monopoly(const MarketMonthContext& ctx);             // exactly one carrier serves
int missing_report(const MarketMonthContext& ctx);  // some serving legacy lacks a report
int capacity_discipline_k(const MarketMonthContext& ctx, std::size_t k);  // exactly k legacies, all talk
int capacity_discipline_n1(const MarketMonthContext& ctx);  // all but one legacy talk
int all_legacy_market(const MarketMonthContext& ctx);       // every serving carrier is legacy

// Carrier-specific indicators.
struct VariantIndicators {
    int only_j_talks = 0;
    int capdis_not_j = 0;
    int monopoly_capdis = 0;
    int capdis_n1 = 0;
    std::array<int, 4> capdis_k{};  // k = 2,3,4,5
};
VariantIndicators variant_indicators(const MarketMonthContext& ctx, const std::string& j);

// Carrier-market-structure key: merger-mapped carrier, market, and the
// sorted merger-mapped serving set.
std::string market_structure_key(const std::string& j, const Market& market,
                                 const std::vector<std::string>& serving,
                                 const CarrierRegistry& registry);

enum class SizeClass { Small, Medium, Large };
std::string to_string(SizeClass c);

// Classification by geometric mean population against 25th/75th percentile
// cutoffs (defaults from the reference sample).
SizeClass market_size_class(double pop_origin, double pop_dest, double p25 = 1.27e6,
                            double p75 = 3.25e6);

// Type-7 (linear interpolation) 25th/75th percentiles of a sample.
std::pair<double, double> percentile_cutoffs_25_75(std::vector<double> values);

// Coding state of one carrier-quarter transcript as the panel consumes it.
struct CarrierQuarterFlag {
    bool collected = false;
    int flag = 0;
};
using FlagMap = std::map<std::pair<std::string, YearQuarter>, CarrierQuarterFlag>;

struct PanelRow {
    YearMonth ym{};
    std::string carrier;
    Market market;
    CarrierClass klass = CarrierClass::Fringe;
    double seats = 0;
    double flights = 0;
    double passengers = 0;
    int capacity_discipline = 0;
    int talk_eligible = 0;
    int monopoly = 0;
    int missing_report = 0;
    int only_j_talks = 0;
    int capdis_n1 = 0;
    int capdis_not_j = 0;
    int monopoly_capdis = 0;
    std::array<int, 4> capdis_k{};  // k = 2,3,4,5
    int all_legacy = 0;
    int n_legacy = 0;
    int n_carriers = 0;
    std::string structure_key;
};

struct Panel {
    AlignmentMode mode = AlignmentMode::Shifted;
    std::vector<PanelRow> rows;
};

struct PanelBuildOptions {
    AlignmentMode mode = AlignmentMode::Shifted;
    std::int64_t min_monthly_flights = 4;  // serving-set rule
    double fringe_threshold = 0.0;  // avg monthly flights below which a carrier is pooled
};

// Remap carriers whose network-wide average monthly flights fall below the
// threshold to the pooled fringe code "ZZ".
std::vector<SegmentRecord> collapse_fringe(const std::vector<SegmentRecord>& segments,
                                           double threshold);

// Aggregate airport-pair segments to city pairs (seats/flights/passengers
// summed per carrier-month); intra-city segments are dropped. Throws
// SchemaError on unmapped airports.
std::vector<SegmentRecord> to_city_segments(const std::vector<SegmentRecord>& segments,
                                            const std::map<std::string, std::string>& city_map);

// Assemble the estimation panel from segments and coded transcript flags.
Panel build_panel(const std::vector<SegmentRecord>& segments, const FlagMap& flags,
                  const CarrierRegistry& registry, const PanelBuildOptions& opt = {});

// Treatment split at a threshold month: CapDis x pre and CapDis x post
// columns (threshold month itself belongs to post).
std::pair<std::vector<double>, std::vector<double>> period_split_columns(const Panel& panel,
                                                                         YearMonth threshold);

// Context reconstruction for one row's market-month (shared by diagnostics).
MarketMonthContext build_context(const Market& market, YearMonth ym,
                                 const std::vector<std::pair<std::string, double>>& carrier_flights,
                                 const FlagMap& flags, const CarrierRegistry& registry,
                                 AlignmentMode mode, std::int64_t min_monthly_flights = 4);

}  // namespace aircap
