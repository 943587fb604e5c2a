#include "aircap/synth.hpp"

#include <algorithm>
#include <cmath>

#include "aircap/errors.hpp"
#include "aircap/rng.hpp"

namespace aircap {

namespace {

std::string make_airport(int i) {
    std::string code(3, 'A');
    code[0] = static_cast<char>('A' + (i / 26) % 26);
    code[1] = static_cast<char>('A' + i % 26);
    code[2] = 'X';
    return code;
}

std::vector<std::pair<int, int>> sample_pairs(int n_airports, int n_pairs, Rng& rng) {
    std::vector<std::pair<int, int>> all;
    for (int i = 0; i < n_airports; ++i)
        for (int j = i + 1; j < n_airports; ++j) all.emplace_back(i, j);
    if (n_pairs > static_cast<int>(all.size()))
        throw ConfigError("synth: more market pairs requested than airport pairs available");
    rng.shuffle(all);
    all.resize(static_cast<std::size_t>(n_pairs));
    std::sort(all.begin(), all.end());
    return all;
}

const std::vector<std::string>& legacy_pool() {
    static const std::vector<std::string> pool{"AA", "DL", "UA", "US", "NW", "CO", "AS"};
    return pool;
}
const std::vector<std::string>& lcc_pool() {
    static const std::vector<std::string> pool{"WN", "B6", "FL", "NK"};
    return pool;
}

std::vector<std::string> pick_subset(const std::vector<std::string>& pool, std::size_t k, Rng& rng) {
    std::vector<std::string> copy = pool;
    rng.shuffle(copy);
    copy.resize(std::min(k, copy.size()));
    std::sort(copy.begin(), copy.end());
    return copy;
}

// Markov communication chain per carrier-quarter.
struct FlagChain {
    FlagMap flags;
    std::map<std::pair<std::string, YearQuarter>, TranscriptStatus> statuses;
};

FlagChain draw_flags(const std::vector<std::string>& carriers, YearQuarter q_lo, YearQuarter q_hi,
                     double talk_prob, double persistence, double miss_prob, Rng& rng) {
    FlagChain out;
    const TranscriptStatus absent[3] = {TranscriptStatus::Bankruptcy, TranscriptStatus::Private,
                                        TranscriptStatus::Other};
    int absent_rotor = 0;
    for (const auto& c : carriers) {
        int prev = -1;
        for (int qi = q_lo.index(); qi <= q_hi.index(); ++qi) {
            const YearQuarter q = YearQuarter::from_index(qi);
            const bool collected = rng.uniform() >= miss_prob;
            int flag;
            if (prev < 0 || rng.uniform() >= persistence)
                flag = rng.bernoulli(talk_prob) ? 1 : 0;
            else
                flag = prev;
            prev = flag;
            out.flags[{c, q}] = CarrierQuarterFlag{collected, collected ? flag : 0};
            out.statuses[{c, q}] =
                collected ? TranscriptStatus::Collected : absent[absent_rotor++ % 3];
        }
    }
    return out;
}

}  // namespace

GeneratedPanel gen_panel(const PanelDGP& dgp) {
    if (dgp.n_legacies < 1 || dgp.n_legacies > static_cast<int>(legacy_pool().size()))
        throw ConfigError("gen_panel: n_legacies out of range");
    if (dgp.n_lccs < 0 || dgp.n_lccs > static_cast<int>(lcc_pool().size()))
        throw ConfigError("gen_panel: n_lccs out of range");
    if (dgp.n_months < 1 || dgp.n_market_pairs < 1 || dgp.n_airports < 2)
        throw ConfigError("gen_panel: invalid counts");

    Rng rng(Rng::derive(dgp.seed, 1));
    GeneratedPanel out;
    out.dgp = dgp;

    out.airports.reserve(dgp.n_airports);
    for (int i = 0; i < dgp.n_airports; ++i) out.airports.push_back(make_airport(i));
    const auto pairs = sample_pairs(dgp.n_airports, dgp.n_market_pairs, rng);

    std::vector<std::string> legacies(legacy_pool().begin(),
                                      legacy_pool().begin() + dgp.n_legacies);
    std::sort(legacies.begin(), legacies.end());
    std::vector<std::string> lccs(lcc_pool().begin(), lcc_pool().begin() + dgp.n_lccs);

    // Serving sets per pair follow 1-3 regimes (entry/exit at switch months)
    // so eligibility and monopoly status vary within carrier-market.
    auto draw_set = [&] {
        const double u = rng.uniform();
        std::size_t k = u < 0.22 ? 1 : u < 0.55 ? 2 : u < 0.85 ? 3 : 4;
        auto set = pick_subset(legacies, std::min(k, legacies.size()), rng);
        if (!lccs.empty() && rng.uniform() < dgp.lcc_entry_prob) {
            set.push_back(lccs[rng.uniform_int(lccs.size())]);
            std::sort(set.begin(), set.end());
        }
        return set;
    };
    std::vector<std::vector<int>> switch_months(pairs.size());
    std::vector<std::vector<std::vector<std::string>>> regimes(pairs.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const double u = rng.uniform();
        const int n_regimes = dgp.n_months < 3 ? 1 : (u < 0.45 ? 1 : u < 0.85 ? 2 : 3);
        std::vector<int> cuts;
        while (static_cast<int>(cuts.size()) < n_regimes - 1) {
            const int m = 1 + static_cast<int>(rng.uniform_int(
                static_cast<std::uint64_t>(dgp.n_months - 1)));
            if (std::find(cuts.begin(), cuts.end(), m) == cuts.end()) cuts.push_back(m);
        }
        std::sort(cuts.begin(), cuts.end());
        switch_months[p] = cuts;
        for (int r = 0; r < n_regimes; ++r) regimes[p].push_back(draw_set());
    }
    auto serving_at = [&](std::size_t p, int t) -> const std::vector<std::string>& {
        std::size_t r = 0;
        while (r < switch_months[p].size() && t >= switch_months[p][r]) ++r;
        return regimes[p][r];
    };

    const YearMonth ym0{dgp.start_year, 1};
    const YearMonth ym_last = ym0.plus(dgp.n_months - 1);
    const YearQuarter q_lo = quarter_for_month(ym0, AlignmentMode::Shifted);
    const YearQuarter q_hi = quarter_for_month(ym_last, AlignmentMode::Shifted);
    std::vector<std::string> all_carriers = legacies;
    all_carriers.insert(all_carriers.end(), lccs.begin(), lccs.end());
    FlagChain chain = draw_flags(all_carriers, q_lo, q_hi, dgp.talk_prob, dgp.talk_persistence,
                                 dgp.miss_prob, rng);
    out.flags = std::move(chain.flags);
    out.statuses = std::move(chain.statuses);

    // Fixed effects and airport trend slopes, drawn lazily in iteration order.
    std::map<std::string, double> fe_cm;
    std::map<std::pair<std::string, int>, double> fe_cq;
    std::vector<double> slope_o(out.airports.size()), slope_d(out.airports.size());
    for (auto& s : slope_o) s = rng.normal(0.0, dgp.sd_trend);
    for (auto& s : slope_d) s = rng.normal(0.0, dgp.sd_trend);
    auto carrier_market_effect = [&](const std::string& carrier, const std::string& mkey) {
        auto [it, fresh] = fe_cm.try_emplace(carrier + "|" + mkey, 0.0);
        if (fresh) it->second = rng.normal(0.0, dgp.sd_carrier_market);
        return it->second;
    };
    auto carrier_quarter_effect = [&](const std::string& carrier, int qidx) {
        auto [it, fresh] = fe_cq.try_emplace({carrier, qidx}, 0.0);
        if (fresh) it->second = rng.normal(0.0, dgp.sd_carrier_quarter);
        return it->second;
    };

    const CarrierRegistry registry = CarrierRegistry::standard();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const std::string& a = out.airports[static_cast<std::size_t>(pairs[p].first)];
        const std::string& b = out.airports[static_cast<std::size_t>(pairs[p].second)];
        for (int t = 0; t < dgp.n_months; ++t) {
            const YearMonth ym = ym0.plus(t);
            const std::vector<std::string>& serving = serving_at(p, t);
            std::vector<std::pair<std::string, double>> cf;
            for (const auto& c : serving) cf.emplace_back(c, 99.0);
            const MarketMonthContext ctx = build_context(Market{a, b}, ym, cf, out.flags,
                                                         registry, AlignmentMode::Shifted, 4);
            const double cd = capacity_discipline(ctx);
            const double te = talk_eligible(ctx);
            const double mono = monopoly(ctx);
            const double miss = missing_report(ctx);
            const double shared = rng.normal();  // cluster component, both directions

            for (int dir = 0; dir < 2; ++dir) {
                const std::string& o = dir == 0 ? a : b;
                const std::string& d = dir == 0 ? b : a;
                const std::size_t oi = static_cast<std::size_t>(dir == 0 ? pairs[p].first
                                                                         : pairs[p].second);
                const std::size_t di = static_cast<std::size_t>(dir == 0 ? pairs[p].second
                                                                         : pairs[p].first);
                for (const auto& c : serving) {
                    const double eps = std::sqrt(dgp.rho) * shared +
                                       std::sqrt(1.0 - dgp.rho) * rng.normal();
                    const double log_seats =
                        dgp.base_log_seats + dgp.beta_capdis * cd + dgp.beta_talk * te +
                        dgp.beta_monopoly * mono + dgp.beta_missing * miss +
                        carrier_market_effect(c, o + "-" + d) +
                        carrier_quarter_effect(c, ym.quarter().index()) +
                        slope_o[oi] * t + slope_d[di] * t + dgp.sd_noise * eps;
                    SegmentRecord s;
                    s.ym = ym;
                    s.carrier = c;
                    s.origin = o;
                    s.dest = d;
                    s.seats = std::max<std::int64_t>(1, std::llround(std::exp(log_seats)));
                    s.flights = std::max<std::int64_t>(4, std::llround(
                        static_cast<double>(s.seats) / 150.0));
                    s.passengers = std::llround(0.84 * static_cast<double>(s.seats));
                    out.segments.push_back(std::move(s));
                }
            }
        }
    }

    PanelBuildOptions popt;
    popt.mode = AlignmentMode::Shifted;
    out.panel = build_panel(out.segments, out.flags, registry, popt);
    return out;
}

GeneratedCf gen_cf_panel(const CfDGP& dgp) {
    if (dgp.n_legacies < 1 || dgp.n_legacies > static_cast<int>(legacy_pool().size()))
        throw ConfigError("gen_cf_panel: n_legacies out of range");
    const int n_airports = 20;
    if (dgp.n_market_pairs < 2 || dgp.n_market_pairs > n_airports * (n_airports - 1) / 2)
        throw ConfigError("gen_cf_panel: n_market_pairs out of range");
    const int q_inst = dgp.n_legacies + 1;  // per-legacy distances + pooled low-cost
    const double total_loading = dgp.sigma_scale + dgp.theta * std::sqrt(3.0);
    if (dgp.intercept - total_loading <= 0.0 || dgp.intercept + total_loading >= 1.0)
        throw ConfigError("gen_cf_panel: eligibility probability not bounded in (0,1)");
    // Talk coin tilted against cost so CapacityDiscipline stays uncorrelated with
    // the cost level even though eligibility loads on it.
    const double talk_tilt = 2.0 * dgp.talk_prob * dgp.theta;
    if (dgp.talk_prob - talk_tilt * std::sqrt(3.0) <= 0.0 ||
        dgp.talk_prob + talk_tilt * std::sqrt(3.0) >= 1.0)
        throw ConfigError("gen_cf_panel: talk probability not bounded in (0,1)");

    Rng rng(Rng::derive(dgp.seed, 2));
    GeneratedCf out;
    out.true_beta_capdis = dgp.beta_capdis;
    out.true_beta_talk = dgp.beta_talk;

    std::vector<std::string> airports;
    for (int i = 0; i < n_airports; ++i) airports.push_back(make_airport(i));
    const auto pairs = sample_pairs(n_airports, dgp.n_market_pairs, rng);

    std::vector<std::string> legacies(legacy_pool().begin(),
                                      legacy_pool().begin() + dgp.n_legacies);
    std::sort(legacies.begin(), legacies.end());
    for (const auto& c : legacies) out.instrument_names.push_back("HubDistance_" + c);
    out.instrument_names.push_back("HubDistance_LCC");
    std::vector<double> sigma(static_cast<std::size_t>(q_inst));
    for (int j = 0; j < q_inst; ++j)
        sigma[static_cast<std::size_t>(j)] =
            (j % 2 == 0 ? 1.0 : -1.0) * dgp.sigma_scale / static_cast<double>(q_inst);

    const YearMonth ym0{dgp.start_year, 1};

    ControlFunctionData& data = out.data;
    for (int j = 0; j < q_inst; ++j)
        data.instruments.push_back({out.instrument_names[static_cast<std::size_t>(j)], {}, false});
    // Both stages share rows, fixed effects, and every exogenous regressor, so
    // adding the residual reproduces two-stage least squares exactly and the
    // second stage inherits its consistency.
    data.controls.push_back({"CapacityDiscipline", {}, true});
    data.controls.push_back({"Monopoly", {}, true});
    data.controls.push_back({"MissingReport", {}, true});
    data.first_stage_fe.dims.assign(2, {});
    data.first_stage_fe.trends.assign(2, {});
    data.regressors.push_back({"CapacityDiscipline", {}, true});
    data.regressors.push_back({"TalkEligible", {}, true});
    data.regressors.push_back({"Monopoly", {}, true});
    data.regressors.push_back({"MissingReport", {}, true});
    data.second_stage_fe.dims.assign(2, {});
    data.second_stage_fe.trends.assign(2, {});

    std::map<std::string, std::int32_t> cm_ids;
    std::map<std::pair<std::string, int>, std::int32_t> cq_ids;
    auto dense_id = [](auto& map, const auto& key) {
        auto [it, fresh] = map.try_emplace(key, static_cast<std::int32_t>(map.size()));
        (void)fresh;
        return it->second;
    };
    std::map<std::string, double> fe_cm;
    std::map<std::pair<std::string, int>, double> fe_cq;
    auto carrier_market_effect = [&](const std::string& key) {
        auto [it, fresh] = fe_cm.try_emplace(key, 0.0);
        if (fresh) it->second = rng.normal(0.0, 0.3);
        return it->second;
    };
    auto carrier_quarter_effect = [&](const std::string& c, int q) {
        auto [it, fresh] = fe_cq.try_emplace({c, q}, 0.0);
        if (fresh) it->second = rng.normal(0.0, 0.1);
        return it->second;
    };

    const double c_lim = std::sqrt(3.0);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const std::string& a = airports[static_cast<std::size_t>(pairs[p].first)];
        const std::string& b = airports[static_cast<std::size_t>(pairs[p].second)];
        for (int t = 0; t < dgp.n_months; ++t) {
            const YearMonth ym = ym0.plus(t);
            const int qidx = ym.quarter().index();

            std::vector<double> dist(static_cast<std::size_t>(q_inst));
            double inst_part = 0.0;
            for (int j = 0; j < q_inst; ++j) {
                dist[static_cast<std::size_t>(j)] = rng.bernoulli(0.5) ? 1.0 : -1.0;
                inst_part += sigma[static_cast<std::size_t>(j)] * dist[static_cast<std::size_t>(j)];
            }
            // One cost shock drives eligibility, the talk coin, and seats.
            const double cost = rng.uniform(-c_lim, c_lim);
            const double p_eligible = dgp.intercept + inst_part + dgp.theta * cost;
            const bool te = rng.bernoulli(p_eligible);
            const bool all_talk = rng.bernoulli(dgp.talk_prob - talk_tilt * cost);

            std::size_t k = 1;
            if (rng.uniform() < 0.6) ++k;
            if (rng.uniform() < 0.5) ++k;
            std::vector<std::string> set = pick_subset(legacies, std::min(k, legacies.size()), rng);
            if (rng.uniform() < dgp.lcc_entry_prob) set.push_back("WN");
            std::sort(set.begin(), set.end());

            const double cd = te && all_talk ? 1.0 : 0.0;
            const double te_d = te ? 1.0 : 0.0;
            const double mono = set.size() == 1 ? 1.0 : 0.0;
            const double miss = rng.uniform() < dgp.miss_prob ? 1.0 : 0.0;

            for (int dir = 0; dir < 2; ++dir) {
                const std::string& o = dir == 0 ? a : b;
                const std::string& d = dir == 0 ? b : a;
                const std::string mkey = o + "-" + d;
                const std::size_t oi = static_cast<std::size_t>(dir == 0 ? pairs[p].first
                                                                         : pairs[p].second);
                const std::size_t di = static_cast<std::size_t>(dir == 0 ? pairs[p].second
                                                                         : pairs[p].first);
                for (const auto& c : set) {
                    const std::int32_t cm = dense_id(cm_ids, c + "|" + mkey);
                    const std::int32_t cq = dense_id(cq_ids, std::make_pair(c, qidx));

                    data.endogenous.push_back(te_d);
                    for (int j = 0; j < q_inst; ++j)
                        data.instruments[static_cast<std::size_t>(j)].values.push_back(
                            dist[static_cast<std::size_t>(j)]);
                    data.controls[0].values.push_back(cd);
                    data.controls[1].values.push_back(mono);
                    data.controls[2].values.push_back(miss);
                    data.first_stage_fe.dims[0].push_back(cm);
                    data.first_stage_fe.dims[1].push_back(cq);
                    data.first_stage_fe.trends[0].group.push_back(static_cast<std::int32_t>(oi));
                    data.first_stage_fe.trends[0].time.push_back(static_cast<double>(t));
                    data.first_stage_fe.trends[1].group.push_back(static_cast<std::int32_t>(di));
                    data.first_stage_fe.trends[1].time.push_back(static_cast<double>(t));
                    data.first_stage_cluster.push_back(static_cast<std::int32_t>(p));

                    const double log_seats =
                        dgp.base_log_seats + dgp.beta_capdis * cd + dgp.beta_talk * te_d +
                        carrier_market_effect(c + "|" + mkey) + carrier_quarter_effect(c, qidx) +
                        dgp.delta * cost + dgp.sd_noise * rng.normal();
                    data.outcome.push_back(log_seats);
                    data.regressors[0].values.push_back(cd);
                    data.regressors[1].values.push_back(te_d);
                    data.regressors[2].values.push_back(mono);
                    data.regressors[3].values.push_back(miss);
                    data.second_stage_fe.dims[0].push_back(cm);
                    data.second_stage_fe.dims[1].push_back(cq);
                    data.second_stage_fe.trends[0].group.push_back(static_cast<std::int32_t>(oi));
                    data.second_stage_fe.trends[0].time.push_back(static_cast<double>(t));
                    data.second_stage_fe.trends[1].group.push_back(static_cast<std::int32_t>(di));
                    data.second_stage_fe.trends[1].time.push_back(static_cast<double>(t));
                    data.cluster.push_back(static_cast<std::int32_t>(p));
                    data.row_to_first_stage.push_back(data.endogenous.size() - 1);
                }
            }
        }
    }
    return out;
}

GeneratedCorpus gen_corpus(const CorpusDGP& dgp) {
    if (dgp.anchors.empty()) throw ConfigError("gen_corpus: no anchors");
    if (dgp.reports_per_token < 1 || dgp.sentence_len < 2 || dgp.n_background_tokens < 1)
        throw ConfigError("gen_corpus: invalid counts");
    Rng rng(Rng::derive(dgp.seed, 3));
    GeneratedCorpus out;

    std::vector<std::string> background;
    background.reserve(static_cast<std::size_t>(dgp.n_background_tokens));
    for (int i = 0; i < dgp.n_background_tokens; ++i)
        background.push_back("filler" + std::to_string(i));
    auto bg = [&] {
        return background[static_cast<std::size_t>(
            rng.uniform_int(background.size()))];
    };

    auto emit_report = [&](const std::string* planted, bool with_anchors) {
        std::vector<std::vector<std::string>> sens;
        for (int s = 0; s < dgp.background_sentences; ++s) {
            std::vector<std::string> sen;
            for (int w = 0; w < dgp.sentence_len; ++w) sen.push_back(bg());
            sens.push_back(std::move(sen));
        }
        if (planted) {
            for (int rep = 0; rep < 3; ++rep) {
                std::vector<std::string> sen;
                if (with_anchors) {
                    for (const auto& a : dgp.anchors) {
                        sen.push_back(a);
                        sen.push_back(*planted);
                    }
                } else {
                    sen.push_back(bg());
                    sen.push_back(*planted);
                    sen.push_back(bg());
                }
                sens.push_back(std::move(sen));
            }
        } else if (with_anchors) {
            for (int rep = 0; rep < 3; ++rep) {
                std::vector<std::string> sen;
                for (const auto& a : dgp.anchors) {
                    sen.push_back(a);
                    sen.push_back(bg());
                }
                sens.push_back(std::move(sen));
            }
        }
        std::vector<std::string> report_tokens;
        for (const auto& sen : sens) {
            report_tokens.insert(report_tokens.end(), sen.begin(), sen.end());
            out.sentences.push_back(sen);
        }
        out.reports.push_back(std::move(report_tokens));
    };

    for (const auto& pl : dgp.planted) {
        for (int r = 0; r < dgp.reports_per_token; ++r)
            emit_report(&pl.token, rng.uniform() < pl.anchor_rate);
    }
    for (int r = 0; r < dgp.anchor_only_reports; ++r) emit_report(nullptr, true);
    return out;
}

net::Graph two_hub_replica() {
    net::Graph g;
    g.nodes = {"CHO", "CLT", "DFW", "GSO", "JFK", "LAX", "MSN", "ORD",
               "PHX", "RIC", "SAN", "SFO", "SJC", "TUL"};
    g.adj.assign(g.nodes.size(), {});
    g.add_edge("DFW", "CLT");
    g.add_edge("DFW", "JFK");
    g.add_edge("DFW", "ORD");
    g.add_edge("CLT", "JFK");
    g.add_edge("JFK", "ORD");
    g.add_edge("DFW", "LAX");
    g.add_edge("ORD", "LAX");
    g.add_edge("LAX", "SFO");
    g.add_edge("LAX", "SJC");
    g.add_edge("LAX", "SAN");
    g.add_edge("CLT", "CHO");
    g.add_edge("CLT", "RIC");
    g.add_edge("CLT", "GSO");
    g.add_edge("ORD", "MSN");
    g.add_edge("DFW", "PHX");
    g.add_edge("DFW", "TUL");
    return g;
}

net::Graph ring_graph(int n) {
    if (n < 3) throw ConfigError("ring_graph: need at least 3 nodes");
    net::Graph g;
    for (int i = 0; i < n; ++i) g.nodes.push_back(make_airport(i));
    std::sort(g.nodes.begin(), g.nodes.end());
    g.adj.assign(g.nodes.size(), {});
    for (int i = 0; i < n; ++i)
        g.add_edge(make_airport(i), make_airport((i + 1) % n));
    return g;
}

net::Graph random_tree(int n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("random_tree: need at least 1 node");
    Rng rng(Rng::derive(seed, 4));
    net::Graph g;
    for (int i = 0; i < n; ++i) g.nodes.push_back(make_airport(i));
    std::sort(g.nodes.begin(), g.nodes.end());
    g.adj.assign(g.nodes.size(), {});
    for (int i = 1; i < n; ++i) {
        const int parent = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(i)));
        g.add_edge(make_airport(i), make_airport(parent));
    }
    return g;
}

net::Graph random_graph(int n, double edge_prob, std::uint64_t seed) {
    if (n < 1) throw ConfigError("random_graph: need at least 1 node");
    Rng rng(Rng::derive(seed, 5));
    net::Graph g;
    for (int i = 0; i < n; ++i) g.nodes.push_back(make_airport(i));
    std::sort(g.nodes.begin(), g.nodes.end());
    g.adj.assign(g.nodes.size(), {});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < edge_prob) g.add_edge(make_airport(i), make_airport(j));
    return g;
}

}  // namespace aircap
