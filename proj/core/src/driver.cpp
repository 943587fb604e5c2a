#include "aircap/driver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

#include "aircap/errors.hpp"

namespace aircap {

namespace {

std::int32_t dense_code(std::map<std::string, std::int32_t>& ids, const std::string& key) {
    auto [it, fresh] = ids.try_emplace(key, static_cast<std::int32_t>(ids.size()));
    (void)fresh;
    return it->second;
}

YearMonth parse_year_month(const std::string& s) {
    const auto dash = s.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 >= s.size())
        throw ConfigError("expected YYYY-MM, got '" + s + "'");
    YearMonth ym{};
    try {
        ym.year = std::stoi(s.substr(0, dash));
        ym.month = std::stoi(s.substr(dash + 1));
    } catch (const std::exception&) {
        throw ConfigError("expected YYYY-MM, got '" + s + "'");
    }
    if (ym.month < 1 || ym.month > 12) throw ConfigError("month out of range in '" + s + "'");
    return ym;
}

std::vector<Regressor> treatment_columns(const Panel& panel, const TreatmentVariant& v,
                                         const std::vector<std::size_t>& rows) {
    using Kind = TreatmentVariant::Kind;
    auto col = [&](const std::string& name, auto&& get) {
        Regressor r{name, {}, true};
        r.values.reserve(rows.size());
        for (auto i : rows) r.values.push_back(static_cast<double>(get(panel.rows[i])));
        return r;
    };
    switch (v.kind) {
        case Kind::Main:
        case Kind::ZToken:
            return {col("CapacityDiscipline", [](const PanelRow& r) { return r.capacity_discipline; })};
        case Kind::KSplit:
            return {col("CapacityDiscipline_2", [](const PanelRow& r) { return r.capdis_k[0]; }),
                    col("CapacityDiscipline_3", [](const PanelRow& r) { return r.capdis_k[1]; }),
                    col("CapacityDiscipline_4", [](const PanelRow& r) { return r.capdis_k[2]; })};
        case Kind::LegacyMixed:
            return {col("CapacityDisciplineAllLegacy",
                        [](const PanelRow& r) { return r.capacity_discipline * r.all_legacy; }),
                    col("CapacityDisciplineMixed",
                        [](const PanelRow& r) {
                            return r.capacity_discipline * (1 - r.all_legacy);
                        })};
        case Kind::OnlyJ:
            return {col("CapacityDiscipline", [](const PanelRow& r) { return r.capacity_discipline; }),
                    col("OnlyJTalks", [](const PanelRow& r) { return r.only_j_talks; })};
        case Kind::Monopoly:
            return {col("CapacityDiscipline", [](const PanelRow& r) { return r.capacity_discipline; }),
                    col("MonopolyCapacityDiscipline",
                        [](const PanelRow& r) { return r.monopoly_capdis; })};
        case Kind::N1:
            return {col("CapacityDiscipline", [](const PanelRow& r) { return r.capacity_discipline; }),
                    col("CapacityDisciplineN1", [](const PanelRow& r) { return r.capdis_n1; })};
        case Kind::NotJ:
            return {col("CapacityDiscipline", [](const PanelRow& r) { return r.capacity_discipline; }),
                    col("CapacityDisciplineNotJ", [](const PanelRow& r) { return r.capdis_not_j; })};
        case Kind::PeriodSplit: {
            auto [pre, post] = period_split_columns(panel, v.threshold);
            Regressor rp{"CapacityDisciplinePre", {}, true};
            Regressor rq{"CapacityDisciplinePost", {}, true};
            rp.values.reserve(rows.size());
            rq.values.reserve(rows.size());
            for (auto i : rows) {
                rp.values.push_back(pre[i]);
                rq.values.push_back(post[i]);
            }
            return {std::move(rp), std::move(rq)};
        }
    }
    throw ConfigError("unknown treatment variant");
}

}  // namespace

FeVariant fe_variant_from_string(const std::string& s) {
    if (s == "carrier-market") return FeVariant::CarrierMarket;
    if (s == "carrier-market-structure") return FeVariant::CarrierMarketStructure;
    throw ConfigError("unknown fixed-effect variant '" + s + "'");
}

std::string to_string(FeVariant v) {
    return v == FeVariant::CarrierMarket ? "carrier-market" : "carrier-market-structure";
}

TreatmentVariant treatment_from_string(const std::string& s) {
    using Kind = TreatmentVariant::Kind;
    TreatmentVariant v;
    if (s == "main") {
        v.kind = Kind::Main;
    } else if (s == "k-split") {
        v.kind = Kind::KSplit;
    } else if (s == "legacy-mixed") {
        v.kind = Kind::LegacyMixed;
    } else if (s == "only-j") {
        v.kind = Kind::OnlyJ;
    } else if (s == "monopoly") {
        v.kind = Kind::Monopoly;
    } else if (s == "n-1") {
        v.kind = Kind::N1;
    } else if (s == "not-j") {
        v.kind = Kind::NotJ;
    } else if (s.rfind("z-token:", 0) == 0) {
        v.kind = Kind::ZToken;
        v.token = s.substr(8);
        if (v.token.empty()) throw ConfigError("z-token variant needs a token");
    } else if (s.rfind("period-split:", 0) == 0) {
        v.kind = Kind::PeriodSplit;
        v.threshold = parse_year_month(s.substr(13));
    } else {
        throw ConfigError("unknown treatment variant '" + s + "'");
    }
    return v;
}

std::string to_string(const TreatmentVariant& v) {
    using Kind = TreatmentVariant::Kind;
    switch (v.kind) {
        case Kind::Main: return "main";
        case Kind::KSplit: return "k-split";
        case Kind::LegacyMixed: return "legacy-mixed";
        case Kind::OnlyJ: return "only-j";
        case Kind::Monopoly: return "monopoly";
        case Kind::N1: return "n-1";
        case Kind::NotJ: return "not-j";
        case Kind::ZToken: return "z-token:" + v.token;
        case Kind::PeriodSplit: return "period-split:" + v.threshold.str();
    }
    return "main";
}

DesignMatrices build_design(const Panel& panel, FeVariant fe_variant,
                            const TreatmentVariant& treatment) {
    DesignMatrices d;
    d.panel_rows.reserve(panel.rows.size());
    for (std::size_t i = 0; i < panel.rows.size(); ++i)
        if (panel.rows[i].seats > 0.0) d.panel_rows.push_back(i);
    if (d.panel_rows.empty()) throw NumericError("build_design: no rows with positive seats");

    int base_month = std::numeric_limits<int>::max();
    for (auto i : d.panel_rows) base_month = std::min(base_month, panel.rows[i].ym.index());

    d.outcome.reserve(d.panel_rows.size());
    d.regressors = treatment_columns(panel, treatment, d.panel_rows);
    d.regressors.push_back({"TalkEligible", {}, true});
    d.regressors.push_back({"Monopoly", {}, true});
    d.regressors.push_back({"MissingReport", {}, true});
    d.regressors.push_back({"TalkEligibleMissingReport", {}, true});
    d.regressors.push_back({"MonopolyMissingReport", {}, true});
    const std::size_t te_at = d.regressors.size() - 5;

    d.fe.dims.assign(2, {});
    d.fe.trends.assign(2, {});
    std::map<std::string, std::int32_t> unit_ids, cq_ids, origin_ids, dest_ids, cluster_ids;
    for (auto i : d.panel_rows) {
        const PanelRow& r = panel.rows[i];
        d.outcome.push_back(std::log(r.seats));
        d.regressors[te_at].values.push_back(static_cast<double>(r.talk_eligible));
        d.regressors[te_at + 1].values.push_back(static_cast<double>(r.monopoly));
        d.regressors[te_at + 2].values.push_back(static_cast<double>(r.missing_report));
        d.regressors[te_at + 3].values.push_back(
            static_cast<double>(r.talk_eligible * r.missing_report));
        d.regressors[te_at + 4].values.push_back(
            static_cast<double>(r.monopoly * r.missing_report));
        const std::string unit = fe_variant == FeVariant::CarrierMarket
                                     ? r.carrier + "|" + r.market.key()
                                     : r.structure_key;
        d.fe.dims[0].push_back(dense_code(unit_ids, unit));
        d.fe.dims[1].push_back(dense_code(cq_ids, r.carrier + "|" + r.ym.quarter().str()));
        const double t = static_cast<double>(r.ym.index() - base_month);
        d.fe.trends[0].group.push_back(dense_code(origin_ids, r.market.origin));
        d.fe.trends[0].time.push_back(t);
        d.fe.trends[1].group.push_back(dense_code(dest_ids, r.market.dest));
        d.fe.trends[1].time.push_back(t);
        d.cluster.push_back(dense_code(cluster_ids, r.market.cluster_key()));
    }

    if (fe_variant == FeVariant::CarrierMarketStructure) {
        // The structure key pins the serving set, absorbing these two.
        d.regressors.erase(d.regressors.begin() + static_cast<std::ptrdiff_t>(te_at),
                           d.regressors.begin() + static_cast<std::ptrdiff_t>(te_at) + 2);
    }
    return d;
}

RegressionResult estimate_panel(const Panel& panel, FeVariant fe_variant,
                                const TreatmentVariant& treatment, const RegressionOptions& opt) {
    DesignMatrices d = build_design(panel, fe_variant, treatment);
    return estimate_fe(d.outcome, d.regressors, d.fe, d.cluster, opt);
}

LeadTestResult lead_exogeneity_test(const Panel& panel, FeVariant fe_variant,
                                    const RegressionOptions& opt) {
    DesignMatrices d = build_design(panel, fe_variant, TreatmentVariant{});

    std::map<std::pair<std::string, int>, int> capdis_at;
    for (const auto& r : panel.rows)
        capdis_at[{r.market.key(), r.ym.index()}] = r.capacity_discipline;

    std::vector<std::size_t> keep;
    std::vector<double> lead;
    for (std::size_t k = 0; k < d.panel_rows.size(); ++k) {
        const PanelRow& r = panel.rows[d.panel_rows[k]];
        const auto it = capdis_at.find({r.market.key(), r.ym.index() + 1});
        if (it == capdis_at.end()) continue;
        keep.push_back(k);
        lead.push_back(static_cast<double>(it->second));
    }
    LeadTestResult out;
    out.rows_dropped = d.panel_rows.size() - keep.size();
    if (keep.size() < 2) throw NumericError("lead_exogeneity_test: no rows with a lead");

    auto subset = [&](const std::vector<double>& v) {
        std::vector<double> s;
        s.reserve(keep.size());
        for (auto k : keep) s.push_back(v[k]);
        return s;
    };
    std::vector<double> outcome = subset(d.outcome);
    std::vector<Regressor> regs;
    regs.push_back({"LeadCapacityDiscipline", std::move(lead), true});
    for (const auto& r : d.regressors) regs.push_back({r.name, subset(r.values), r.binary});
    FixedEffectSpec fe;
    fe.dims.reserve(d.fe.dims.size());
    for (const auto& dim : d.fe.dims) {
        std::vector<std::int32_t> s;
        s.reserve(keep.size());
        for (auto k : keep) s.push_back(dim[k]);
        fe.dims.push_back(std::move(s));
    }
    for (const auto& tr : d.fe.trends) {
        TrendGroup g;
        g.group.reserve(keep.size());
        g.time.reserve(keep.size());
        for (auto k : keep) {
            g.group.push_back(tr.group[k]);
            g.time.push_back(tr.time[k]);
        }
        fe.trends.push_back(std::move(g));
    }
    std::vector<std::int32_t> cluster;
    cluster.reserve(keep.size());
    for (auto k : keep) cluster.push_back(d.cluster[k]);

    out.regression = estimate_fe(outcome, regs, fe, cluster, opt);
    out.lead_coef = out.regression.coef("LeadCapacityDiscipline");
    out.lead_se = out.regression.stderr_of("LeadCapacityDiscipline");
    return out;
}

MarketPoisson poisson_market(const Panel& panel, const PoissonOptions& opt) {
    struct Cell {
        double flights = 0.0;
        int cd = 0, te = 0, mono = 0, miss = 0;
        std::string origin, dest;
    };
    std::map<std::pair<std::string, int>, Cell> cells;
    for (const auto& r : panel.rows) {
        Cell& c = cells[{r.market.key(), r.ym.index()}];
        c.flights += r.flights;
        c.cd = r.capacity_discipline;
        c.te = r.talk_eligible;
        c.mono = r.monopoly;
        c.miss = r.missing_report;
        c.origin = r.market.origin;
        c.dest = r.market.dest;
    }
    if (cells.empty()) throw NumericError("poisson_market: empty panel");

    int base_month = std::numeric_limits<int>::max();
    std::set<int> quarters;
    std::set<std::string> origins, dests;
    for (const auto& [key, cell] : cells) {
        base_month = std::min(base_month, key.second);
        quarters.insert(YearMonth::from_index(key.second).quarter().index());
        origins.insert(cell.origin);
        dests.insert(cell.dest);
    }
    const int ref_quarter = *quarters.begin();

    MarketPoisson out;
    out.n_market_months = cells.size();
    std::vector<double> counts;
    std::vector<std::int32_t> group;
    std::map<std::string, std::int32_t> market_ids;
    std::vector<Regressor> regs;
    regs.push_back({"CapacityDiscipline", {}, true});
    regs.push_back({"TalkEligible", {}, true});
    regs.push_back({"Monopoly", {}, true});
    regs.push_back({"MissingReport", {}, true});
    regs.push_back({"TalkEligibleMissingReport", {}, true});
    regs.push_back({"MonopolyMissingReport", {}, true});
    std::map<int, std::size_t> quarter_reg;
    for (int q : quarters) {
        if (q == ref_quarter) continue;
        quarter_reg[q] = regs.size();
        regs.push_back({"Quarter_" + YearQuarter::from_index(q).str(), {}, false});
    }
    std::map<std::string, std::size_t> origin_reg, dest_reg;
    for (const auto& a : origins) {
        origin_reg[a] = regs.size();
        regs.push_back({"OriginTrend_" + a, {}, false});
    }
    for (const auto& a : dests) {
        dest_reg[a] = regs.size();
        regs.push_back({"DestTrend_" + a, {}, false});
    }
    for (const auto& [key, cell] : cells) {
        counts.push_back(cell.flights);
        const std::int32_t g = dense_code(market_ids, key.first);
        group.push_back(g);
        if (static_cast<std::size_t>(g) == out.markets.size()) out.markets.push_back(key.first);
        regs[0].values.push_back(cell.cd);
        regs[1].values.push_back(cell.te);
        regs[2].values.push_back(cell.mono);
        regs[3].values.push_back(cell.miss);
        regs[4].values.push_back(static_cast<double>(cell.te * cell.miss));
        regs[5].values.push_back(static_cast<double>(cell.mono * cell.miss));
        const int q = YearMonth::from_index(key.second).quarter().index();
        for (auto& [qq, at] : quarter_reg) regs[at].values.push_back(q == qq ? 1.0 : 0.0);
        const double t = static_cast<double>(key.second - base_month);
        for (auto& [a, at] : origin_reg) regs[at].values.push_back(cell.origin == a ? t : 0.0);
        for (auto& [a, at] : dest_reg) regs[at].values.push_back(cell.dest == a ? t : 0.0);
    }
    out.result = poisson_fe(counts, regs, group, opt);
    return out;
}

CfAssembly assemble_control_function(const Panel& panel,
                                     const std::vector<net::CarrierNetwork>& networks,
                                     const std::map<std::string, Coordinate>& coords,
                                     const CarrierRegistry& registry) {
    std::map<std::pair<std::string, int>, const net::CarrierNetwork*> net_at;
    for (const auto& n : networks) net_at[{n.carrier, n.period.index()}] = &n;

    std::set<std::string> legacy_set, lcc_set;
    for (const auto& r : panel.rows) {
        if (registry.is_legacy(r.carrier)) legacy_set.insert(r.carrier);
        if (registry.is_lcc(r.carrier)) lcc_set.insert(r.carrier);
    }
    if (legacy_set.empty())
        throw NumericError("assemble_control_function: no legacy carriers in panel");
    const std::vector<std::string> legacies(legacy_set.begin(), legacy_set.end());

    struct MarketMonth {
        Market market;
        YearMonth ym{};
        int te = 0, mono = 0, miss = 0;
    };
    std::map<std::pair<std::string, int>, MarketMonth> mm;
    for (const auto& r : panel.rows) {
        MarketMonth& m = mm[{r.market.key(), r.ym.index()}];
        m.market = r.market;
        m.ym = r.ym;
        m.te = r.talk_eligible;
        m.mono = r.monopoly;
        m.miss = r.missing_report;
    }

    CfAssembly out;
    for (const auto& l : legacies) out.instrument_names.push_back("HubDistance_" + l);
    out.instrument_names.push_back("HubDistance_LCC");

    int base_month = std::numeric_limits<int>::max();
    for (const auto& [key, m] : mm) base_month = std::min(base_month, key.second);

    ControlFunctionData& d = out.data;
    for (const auto& name : out.instrument_names) d.instruments.push_back({name, {}, false});
    d.controls.push_back({"Monopoly", {}, true});
    d.controls.push_back({"MissingReport", {}, true});
    d.controls.push_back({"MonopolyMissingReport", {}, true});
    d.first_stage_fe.dims.assign(2, {});
    d.first_stage_fe.trends.assign(2, {});
    d.regressors.push_back({"CapacityDiscipline", {}, true});
    d.regressors.push_back({"TalkEligible", {}, true});
    d.regressors.push_back({"Monopoly", {}, true});
    d.regressors.push_back({"MissingReport", {}, true});
    d.regressors.push_back({"TalkEligibleMissingReport", {}, true});
    d.regressors.push_back({"MonopolyMissingReport", {}, true});
    d.second_stage_fe.dims.assign(2, {});
    d.second_stage_fe.trends.assign(2, {});

    std::map<std::string, std::int32_t> market_ids, origin_ids, dest_ids, cluster_ids;
    std::map<std::string, std::int32_t> cm_ids, cq_ids;
    std::map<std::pair<std::string, int>, std::size_t> fs_index;

    for (const auto& [key, m] : mm) {
        const int qidx = m.ym.quarter().index();
        std::vector<double> dist;
        bool defined = true;
        for (const auto& l : legacies) {
            const auto it = net_at.find({l, qidx});
            std::optional<double> v;
            if (it != net_at.end())
                v = net::hub_distance(*it->second, m.market.origin, m.market.dest, coords);
            if (!v) {
                defined = false;
                break;
            }
            dist.push_back(*v);
        }
        if (defined) {
            std::optional<double> best;
            for (const auto& l : lcc_set) {
                const auto it = net_at.find({l, qidx});
                if (it == net_at.end()) continue;
                const auto v = net::hub_distance(*it->second, m.market.origin, m.market.dest, coords);
                if (v && (!best || *v < *best)) best = *v;
            }
            if (best)
                dist.push_back(*best);
            else
                defined = false;
        }
        if (!defined) {
            ++out.market_months_dropped;
            continue;
        }
        ++out.market_months_kept;

        fs_index[key] = d.endogenous.size();
        d.endogenous.push_back(static_cast<double>(m.te));
        for (std::size_t j = 0; j < dist.size(); ++j) d.instruments[j].values.push_back(dist[j]);
        d.controls[0].values.push_back(m.mono);
        d.controls[1].values.push_back(m.miss);
        d.controls[2].values.push_back(static_cast<double>(m.mono * m.miss));
        d.first_stage_fe.dims[0].push_back(dense_code(market_ids, m.market.key()));
        d.first_stage_fe.dims[1].push_back(qidx);
        const double t = static_cast<double>(key.second - base_month);
        d.first_stage_fe.trends[0].group.push_back(dense_code(origin_ids, m.market.origin));
        d.first_stage_fe.trends[0].time.push_back(t);
        d.first_stage_fe.trends[1].group.push_back(dense_code(dest_ids, m.market.dest));
        d.first_stage_fe.trends[1].time.push_back(t);
        d.first_stage_cluster.push_back(dense_code(cluster_ids, m.market.cluster_key()));
    }
    if (d.endogenous.empty())
        throw NumericError("assemble_control_function: every market-month lacks hub distances");

    for (const auto& r : panel.rows) {
        if (r.seats <= 0.0) continue;
        const auto it = fs_index.find({r.market.key(), r.ym.index()});
        if (it == fs_index.end()) continue;
        d.outcome.push_back(std::log(r.seats));
        d.regressors[0].values.push_back(static_cast<double>(r.capacity_discipline));
        d.regressors[1].values.push_back(static_cast<double>(r.talk_eligible));
        d.regressors[2].values.push_back(static_cast<double>(r.monopoly));
        d.regressors[3].values.push_back(static_cast<double>(r.missing_report));
        d.regressors[4].values.push_back(
            static_cast<double>(r.talk_eligible * r.missing_report));
        d.regressors[5].values.push_back(static_cast<double>(r.monopoly * r.missing_report));
        d.second_stage_fe.dims[0].push_back(dense_code(cm_ids, r.carrier + "|" + r.market.key()));
        d.second_stage_fe.dims[1].push_back(
            dense_code(cq_ids, r.carrier + "|" + r.ym.quarter().str()));
        const double t = static_cast<double>(r.ym.index() - base_month);
        d.second_stage_fe.trends[0].group.push_back(dense_code(origin_ids, r.market.origin));
        d.second_stage_fe.trends[0].time.push_back(t);
        d.second_stage_fe.trends[1].group.push_back(dense_code(dest_ids, r.market.dest));
        d.second_stage_fe.trends[1].time.push_back(t);
        d.cluster.push_back(dense_code(cluster_ids, r.market.cluster_key()));
        d.row_to_first_stage.push_back(it->second);
    }
    if (d.outcome.empty())
        throw NumericError("assemble_control_function: no second-stage rows");
    return out;
}

}  // namespace aircap
