#include "aircap/panel.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "aircap/errors.hpp"

namespace aircap {

AlignmentMode alignment_from_string(const std::string& s) {
    if (s == "shifted") return AlignmentMode::Shifted;
    if (s == "contemporaneous") return AlignmentMode::Contemporaneous;
    throw ConfigError("unknown alignment mode: " + s);
}

std::string to_string(AlignmentMode mode) {
    return mode == AlignmentMode::Shifted ? "shifted" : "contemporaneous";
}

std::array<YearMonth, 3> months_for_call(YearQuarter q, AlignmentMode mode) {
    const YearMonth m = call_month(q);
    if (mode == AlignmentMode::Shifted) return {m.plus(1), m.plus(2), m.plus(3)};
    return {m, m.plus(1), m.plus(2)};
}

YearQuarter quarter_for_month(YearMonth m, AlignmentMode mode) {
    // Quarter-end months have index == 2 (mod 3); the covering quarter's end
    // is the unique such index in a 3-month window behind m.
    const int i = m.index();
    const int base = mode == AlignmentMode::Shifted ? i - 4 : i - 3;
    for (int d = 0; d < 3; ++d) {
        const int e = base + d;
        if (((e % 3) + 3) % 3 == 2) return YearMonth::from_index(e).quarter();
    }
    throw NumericError("quarter_for_month: no covering quarter");  // unreachable
}

std::size_t MarketMonthContext::n_legacy() const {
    std::size_t n = 0;
    for (const auto& c : carriers)
        if (c.klass == CarrierClass::Legacy) ++n;
    return n;
}

std::size_t MarketMonthContext::n_legacy_talking() const {
    std::size_t n = 0;
    for (const auto& c : carriers)
        if (c.klass == CarrierClass::Legacy && c.collected && c.flag == 1) ++n;
    return n;
}

int capacity_discipline(const MarketMonthContext& ctx) {
    const std::size_t nl = ctx.n_legacy();
    return nl >= 2 && ctx.n_legacy_talking() == nl ? 1 : 0;
}

int talk_eligible(const MarketMonthContext& ctx) { return ctx.n_legacy() >= 2 ? 1 : 0; }

int monopoly(const MarketMonthContext& ctx) { return ctx.carriers.size() == 1 ? 1 : 0; }

int missing_report(const MarketMonthContext& ctx) {
    for (const auto& c : ctx.carriers)
        if (c.klass == CarrierClass::Legacy && !c.collected) return 1;
    return 0;
}

int capacity_discipline_k(const MarketMonthContext& ctx, std::size_t k) {
    return ctx.n_legacy() == k && k >= 2 && ctx.n_legacy_talking() == k ? 1 : 0;
}

int capacity_discipline_n1(const MarketMonthContext& ctx) {
    const std::size_t nl = ctx.n_legacy();
    return nl >= 2 && ctx.n_legacy_talking() == nl - 1 ? 1 : 0;
}

int all_legacy_market(const MarketMonthContext& ctx) {
    for (const auto& c : ctx.carriers)
        if (c.klass != CarrierClass::Legacy) return 0;
    return ctx.carriers.empty() ? 0 : 1;
}

VariantIndicators variant_indicators(const MarketMonthContext& ctx, const std::string& j) {
    VariantIndicators out;
    const ServingCarrier* self = nullptr;
    for (const auto& c : ctx.carriers)
        if (c.code == j) self = &c;
    if (!self) throw NumericError("variant_indicators: carrier " + j + " does not serve the market");

    const std::size_t nl = ctx.n_legacy();
    const std::size_t nt = ctx.n_legacy_talking();
    const bool j_talks = self->collected && self->flag == 1;

    if (self->klass == CarrierClass::Legacy && nl >= 2) {
        out.only_j_talks = j_talks && nt == 1 ? 1 : 0;
        out.capdis_not_j = !j_talks && nt == nl - 1 ? 1 : 0;
    }
    out.monopoly_capdis = monopoly(ctx) && j_talks ? 1 : 0;
    out.capdis_n1 = capacity_discipline_n1(ctx);
    for (std::size_t k = 2; k <= 5; ++k) out.capdis_k[k - 2] = capacity_discipline_k(ctx, k);
    return out;
}

std::string market_structure_key(const std::string& j, const Market& market,
                                 const std::vector<std::string>& serving,
                                 const CarrierRegistry& registry) {
    if (serving.empty()) throw NumericError("market_structure_key: empty serving set");
    std::vector<std::string> mapped;
    mapped.reserve(serving.size());
    for (const auto& c : serving) mapped.push_back(registry.merger_group(c));
    std::sort(mapped.begin(), mapped.end());
    mapped.erase(std::unique(mapped.begin(), mapped.end()), mapped.end());
    std::string key = registry.merger_group(j) + "|" + market.key() + "|";
    for (std::size_t i = 0; i < mapped.size(); ++i) {
        if (i) key += "+";
        key += mapped[i];
    }
    return key;
}

std::string to_string(SizeClass c) {
    switch (c) {
        case SizeClass::Small: return "small";
        case SizeClass::Medium: return "medium";
        default: return "large";
    }
}

SizeClass market_size_class(double pop_origin, double pop_dest, double p25, double p75) {
    if (pop_origin <= 0.0 || pop_dest <= 0.0)
        throw NumericError("market_size_class: nonpositive population");
    const double gm = std::sqrt(pop_origin * pop_dest);
    if (gm <= p25) return SizeClass::Small;
    if (gm <= p75) return SizeClass::Medium;
    return SizeClass::Large;
}

std::pair<double, double> percentile_cutoffs_25_75(std::vector<double> values) {
    if (values.empty()) throw NumericError("percentile cutoffs need a non-empty sample");
    std::sort(values.begin(), values.end());
    auto type7 = [&](double q) {
        const double h = q * (static_cast<double>(values.size()) - 1.0);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const auto hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
    };
    return {type7(0.25), type7(0.75)};
}

std::vector<SegmentRecord> collapse_fringe(const std::vector<SegmentRecord>& segments,
                                           double threshold) {
    if (threshold <= 0.0) return segments;
    std::map<std::string, double> total_flights;
    std::set<int> months;
    for (const auto& s : segments) {
        total_flights[s.carrier] += static_cast<double>(s.flights);
        months.insert(s.ym.index());
    }
    const double n_months = months.empty() ? 1.0 : static_cast<double>(months.size());
    std::set<std::string> pooled;
    for (const auto& [code, tot] : total_flights)
        if (tot / n_months < threshold) pooled.insert(code);

    std::vector<SegmentRecord> out;
    out.reserve(segments.size());
    for (auto s : segments) {
        if (pooled.count(s.carrier)) s.carrier = "ZZ";
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<SegmentRecord> to_city_segments(const std::vector<SegmentRecord>& segments,
                                            const std::map<std::string, std::string>& city_map) {
    auto city_of = [&](const std::string& airport) {
        auto it = city_map.find(airport);
        if (it == city_map.end()) throw SchemaError("no city mapping for airport " + airport);
        return it->second;
    };
    std::map<std::tuple<int, std::string, std::string, std::string>, SegmentRecord> agg;
    for (const auto& s : segments) {
        const std::string oc = city_of(s.origin);
        const std::string dc = city_of(s.dest);
        if (oc == dc) continue;  // intra-city hop has no city-pair market
        auto key = std::make_tuple(s.ym.index(), s.carrier, oc, dc);
        auto it = agg.find(key);
        if (it == agg.end()) {
            SegmentRecord r = s;
            r.origin = oc;
            r.dest = dc;
            agg.emplace(std::move(key), std::move(r));
        } else {
            it->second.seats += s.seats;
            it->second.flights += s.flights;
            it->second.passengers += s.passengers;
        }
    }
    std::vector<SegmentRecord> out;
    out.reserve(agg.size());
    for (auto& [k, v] : agg) out.push_back(std::move(v));
    return out;
}

MarketMonthContext build_context(const Market& market, YearMonth ym,
                                 const std::vector<std::pair<std::string, double>>& carrier_flights,
                                 const FlagMap& flags, const CarrierRegistry& registry,
                                 AlignmentMode mode, std::int64_t min_monthly_flights) {
    MarketMonthContext ctx;
    ctx.market = market;
    ctx.ym = ym;
    const YearQuarter q = quarter_for_month(ym, mode);
    for (const auto& [code, fl] : carrier_flights) {
        if (fl < static_cast<double>(min_monthly_flights)) continue;
        ServingCarrier sc;
        sc.code = code;
        sc.klass = registry.klass(code);
        auto it = flags.find({code, q});
        if (it != flags.end()) {
            sc.collected = it->second.collected;
            sc.flag = it->second.collected ? it->second.flag : 0;
        }
        ctx.carriers.push_back(std::move(sc));
    }
    return ctx;
}

Panel build_panel(const std::vector<SegmentRecord>& segments, const FlagMap& flags,
                  const CarrierRegistry& registry, const PanelBuildOptions& opt) {
    const auto pooled = collapse_fringe(segments, opt.fringe_threshold);

    // Aggregate duplicate (carrier, market, month) rows, then group by market-month.
    struct Cell {
        double seats = 0, flights = 0, passengers = 0;
    };
    std::map<std::tuple<std::string, std::string, int>, std::map<std::string, Cell>> by_market_month;
    for (const auto& s : pooled) {
        auto& cell = by_market_month[{s.origin, s.dest, s.ym.index()}][s.carrier];
        cell.seats += static_cast<double>(s.seats);
        cell.flights += static_cast<double>(s.flights);
        cell.passengers += static_cast<double>(s.passengers);
    }

    Panel panel;
    panel.mode = opt.mode;
    for (const auto& [mk, carriers] : by_market_month) {
        const Market market{std::get<0>(mk), std::get<1>(mk)};
        const YearMonth ym = YearMonth::from_index(std::get<2>(mk));

        std::vector<std::pair<std::string, double>> cf;
        cf.reserve(carriers.size());
        for (const auto& [code, cell] : carriers) cf.emplace_back(code, cell.flights);
        MarketMonthContext ctx =
            build_context(market, ym, cf, flags, registry, opt.mode, opt.min_monthly_flights);
        if (ctx.carriers.empty()) continue;

        std::vector<std::string> serving;
        serving.reserve(ctx.carriers.size());
        for (const auto& c : ctx.carriers) serving.push_back(c.code);

        const int cd = capacity_discipline(ctx);
        const int te = talk_eligible(ctx);
        const int mono = monopoly(ctx);
        const int miss = missing_report(ctx);
        const int allleg = all_legacy_market(ctx);

        for (const auto& sc : ctx.carriers) {
            const Cell& cell = carriers.at(sc.code);
            PanelRow row;
            row.ym = ym;
            row.carrier = sc.code;
            row.market = market;
            row.klass = sc.klass;
            row.seats = cell.seats;
            row.flights = cell.flights;
            row.passengers = cell.passengers;
            row.capacity_discipline = cd;
            row.talk_eligible = te;
            row.monopoly = mono;
            row.missing_report = miss;
            row.all_legacy = allleg;
            const VariantIndicators v = variant_indicators(ctx, sc.code);
            row.only_j_talks = v.only_j_talks;
            row.capdis_not_j = v.capdis_not_j;
            row.monopoly_capdis = v.monopoly_capdis;
            row.capdis_n1 = v.capdis_n1;
            row.capdis_k = v.capdis_k;
            row.n_legacy = static_cast<int>(ctx.n_legacy());
            row.n_carriers = static_cast<int>(ctx.carriers.size());
            row.structure_key = market_structure_key(sc.code, market, serving, registry);
            panel.rows.push_back(std::move(row));
        }
    }
    std::sort(panel.rows.begin(), panel.rows.end(), [](const PanelRow& a, const PanelRow& b) {
        return std::tie(a.market.origin, a.market.dest, a.carrier) <
                   std::tie(b.market.origin, b.market.dest, b.carrier) ||
               (std::tie(a.market.origin, a.market.dest, a.carrier) ==
                    std::tie(b.market.origin, b.market.dest, b.carrier) &&
                a.ym.index() < b.ym.index());
    });
    return panel;
}

std::pair<std::vector<double>, std::vector<double>> period_split_columns(const Panel& panel,
                                                                         YearMonth threshold) {
    std::vector<double> pre(panel.rows.size(), 0.0), post(panel.rows.size(), 0.0);
    for (std::size_t i = 0; i < panel.rows.size(); ++i) {
        const auto& r = panel.rows[i];
        if (r.capacity_discipline == 0) continue;
        if (r.ym.index() < threshold.index())
            pre[i] = 1.0;
        else
            post[i] = 1.0;
    }
    return {pre, post};
}

}  // namespace aircap
