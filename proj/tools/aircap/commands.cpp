#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "aircap/csv.hpp"
#include "aircap/diagnostics.hpp"
#include "aircap/driver.hpp"
#include "aircap/embed.hpp"
#include "aircap/errors.hpp"
#include "aircap/fixture.hpp"
#include "aircap/metrics.hpp"
#include "aircap/network.hpp"
#include "pipeline.hpp"
#include "report.hpp"

namespace aircap::cli {

namespace {

std::string reason_str(text::CodeReason r) {
    switch (r) {
        case text::CodeReason::PhraseMatch: return "phrase";
        case text::CodeReason::OverrideApplied: return "override";
        case text::CodeReason::NotCollected: return "not-collected";
        case text::CodeReason::NoSignal: return "no-signal";
    }
    return "no-signal";
}

RegressionOptions regression_options(const RunConfig& cfg) {
    RegressionOptions opt;
    opt.absorb.tol = cfg.tol;
    return opt;
}

std::int32_t dense(std::map<std::string, std::int32_t>& ids, const std::string& key) {
    auto [it, fresh] = ids.try_emplace(key, static_cast<std::int32_t>(ids.size()));
    (void)fresh;
    return it->second;
}

std::vector<std::pair<std::string, std::string>> regression_footer(const RegressionResult& r) {
    std::vector<std::pair<std::string, std::string>> f{
        {"Observations", fmt_int(r.n_obs)},
        {"Clusters", fmt_int(r.n_clusters)},
        {"R2 (within)", fmt_fixed(r.r2_within)},
    };
    if (!r.dropped_collinear.empty()) {
        std::string joined;
        for (const auto& n : r.dropped_collinear) {
            if (!joined.empty()) joined += ", ";
            joined += display_name(n);
        }
        f.emplace_back("Dropped (collinear)", joined);
    }
    return f;
}

std::vector<std::pair<std::string, std::string>> regression_summary(const RegressionResult& r) {
    std::string dropped;
    for (const auto& n : r.dropped_collinear) {
        if (!dropped.empty()) dropped += ";";
        dropped += n;
    }
    return {
        {"n_obs", fmt_int(r.n_obs)},
        {"n_clusters", fmt_int(r.n_clusters)},
        {"r2_within", csv::format_double(r.r2_within)},
        {"absorb_iterations", std::to_string(r.absorb_iterations)},
        {"dropped_collinear", dropped},
    };
}

// Market-month view of the panel: shared indicators and summed seats.
struct MarketMonthInfo {
    int cd = 0, te = 0, mono = 0, miss = 0;
    double seats = 0.0;
};

std::map<std::pair<std::string, int>, MarketMonthInfo> market_month_view(const Panel& panel) {
    std::map<std::pair<std::string, int>, MarketMonthInfo> out;
    for (const auto& r : panel.rows) {
        auto& info = out[{r.market.key(), r.ym.index()}];
        info.cd = r.capacity_discipline;
        info.te = r.talk_eligible;
        info.mono = r.monopoly;
        info.miss = r.missing_report;
        info.seats += r.seats;
    }
    return out;
}

}  // namespace

int cmd_code_transcripts(const RunConfig& cfg) {
    const auto out_dir = cfg.ensure_out_dir();
    const auto coded = code_all_transcripts(cfg);

    {
        csv::Writer w(out_dir / "flags.csv");
        w.row("carrier", "year", "quarter", "collected", "flag", "reason", "needs_review");
        for (const auto& r : coded.rows)
            w.row(r.carrier, r.yq.year, r.yq.quarter, static_cast<int>(r.collected), r.flag,
                  reason_str(r.reason), static_cast<int>(r.needs_review));
    }
    {
        csv::Writer w(out_dir / "review_queue.csv");
        w.row("carrier", "year", "quarter");
        for (const auto& r : coded.rows)
            if (r.needs_review) w.row(r.carrier, r.yq.year, r.yq.quarter);
    }

    std::map<std::string, std::size_t> by_reason;
    std::size_t flagged = 0, review = 0;
    for (const auto& r : coded.rows) {
        ++by_reason[reason_str(r.reason)];
        flagged += r.flag;
        review += r.needs_review;
    }
    std::string t = "Transcript coding\n-----------------\n";
    t += "Carrier-quarters     " + fmt_int(coded.rows.size()) + "\n";
    t += "Flagged              " + fmt_int(flagged) + "\n";
    for (const auto& [k, v] : by_reason) t += "Reason " + k + std::string(k.size() < 14 ? 14 - k.size() : 1, ' ') + fmt_int(v) + "\n";
    t += "Review queue         " + fmt_int(review) + "\n";
    emit_table(out_dir / "code_transcripts.txt", t);
    return 0;
}

int cmd_train_embedding(const RunConfig& cfg, const EmbedArgs& args) {
    const auto out_dir = cfg.ensure_out_dir();
    const auto coded = code_all_transcripts(cfg);

    std::vector<std::vector<std::string>> sentences;
    for (const auto& toks : coded.tokens) {
        std::vector<std::string> cur;
        std::uint32_t cur_s = 0;
        for (std::size_t i = 0; i < toks.lemmas.size(); ++i) {
            if (!cur.empty() && toks.sentence[i] != cur_s) {
                sentences.push_back(std::move(cur));
                cur.clear();
            }
            cur_s = toks.sentence[i];
            cur.push_back(toks.lemmas[i]);
        }
        if (!cur.empty()) sentences.push_back(std::move(cur));
    }

    SkipgramOptions opt;
    opt.dims = args.dims;
    opt.window = args.window;
    opt.negatives = args.negatives;
    opt.epochs = args.epochs;
    opt.lr = args.lr;
    opt.min_count = args.min_count;
    opt.subsample = args.subsample;
    opt.seed = cfg.seed;
    opt.workers = cfg.threads;
    const Embedding emb = train_skipgram(sentences, opt);
    emb.save(out_dir / "embedding.bin");

    {
        csv::Writer w(out_dir / "vocab.csv");
        w.row("token", "count");
        for (std::size_t i = 0; i < emb.vocab.size(); ++i)
            w.row(emb.vocab[i], static_cast<std::int64_t>(emb.counts[i]));
    }

    std::string t = "Embedding training\n------------------\n";
    t += "Sentences            " + fmt_int(sentences.size()) + "\n";
    t += "Vocabulary           " + fmt_int(emb.vocab.size()) + "\n";
    t += "Dimensions           " + std::to_string(emb.dims) + "\n";
    t += "Epochs               " + std::to_string(emb.epochs) + "\n";
    t += "Top tokens           ";
    for (std::size_t i = 0; i < std::min<std::size_t>(8, emb.vocab.size()); ++i)
        t += (i ? ", " : "") + emb.vocab[i];
    t += "\n";
    emit_table(out_dir / "train_embedding.txt", t);
    return 0;
}

int cmd_screen_tokens(const RunConfig& cfg, const ScreenArgs& args) {
    const auto out_dir = cfg.ensure_out_dir();
    std::string emb_path = args.embedding;
    if (emb_path.empty()) emb_path = (out_dir / "embedding.bin").string();
    require_path(emb_path, "embedding");
    const Embedding emb = Embedding::load(emb_path);

    const auto coded = code_all_transcripts(cfg);
    std::vector<std::vector<std::string>> reports;
    reports.reserve(coded.tokens.size());
    for (const auto& toks : coded.tokens) reports.push_back(toks.lemmas);

    TokenScreen screen;
    screen.d_lo = args.d_lo;
    screen.d_hi = args.d_hi;
    screen.cooccur_min = args.cooccur_min;
    const auto passed = screen_tokens(emb, screen, reports);

    {
        csv::Writer w(out_dir / "screened.csv");
        w.row("token", "mean_similarity", "cooccurrence");
        for (const auto& s : passed) w.row(s.token, s.mean_similarity, s.cooccurrence);
    }

    std::string t = "Token screen\n------------\n";
    t += "Candidates passed    " + fmt_int(passed.size()) + "\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(10, passed.size()); ++i)
        t += "  " + passed[i].token + "  sim " + fmt_fixed(passed[i].mean_similarity) +
             "  cooccur " + fmt_fixed(passed[i].cooccurrence, 2) + "\n";
    emit_table(out_dir / "screen_tokens.txt", t);
    return 0;
}

int cmd_build_panel(const RunConfig& cfg) {
    const auto out_dir = cfg.ensure_out_dir();
    const auto segments = load_segments_cfg(cfg);
    const auto coded = code_all_transcripts(cfg);
    const Panel panel = build_panel_cfg(cfg, segments, coded.flags);

    {
        csv::Writer w(out_dir / "panel.csv");
        w.row("year", "month", "carrier", "origin", "dest", "carrier_class", "seats", "flights",
              "passengers", "capacity_discipline", "talk_eligible", "monopoly", "missing_report",
              "only_j_talks", "capdis_n1", "capdis_not_j", "monopoly_capdis", "capdis_k2",
              "capdis_k3", "capdis_k4", "capdis_k5", "all_legacy", "n_legacy", "n_carriers",
              "structure_key");
        for (const auto& r : panel.rows)
            w.row(r.ym.year, r.ym.month, r.carrier, r.market.origin, r.market.dest,
                  to_string(r.klass), r.seats, r.flights, r.passengers, r.capacity_discipline,
                  r.talk_eligible, r.monopoly, r.missing_report, r.only_j_talks, r.capdis_n1,
                  r.capdis_not_j, r.monopoly_capdis, r.capdis_k[0], r.capdis_k[1], r.capdis_k[2],
                  r.capdis_k[3], r.all_legacy, r.n_legacy, r.n_carriers, r.structure_key);
    }

    std::set<std::string> markets, carriers;
    std::size_t cd_rows = 0, te_rows = 0, mono_rows = 0;
    for (const auto& r : panel.rows) {
        markets.insert(r.market.cluster_key());
        carriers.insert(r.carrier);
        cd_rows += r.capacity_discipline;
        te_rows += r.talk_eligible;
        mono_rows += r.monopoly;
    }
    const double n = panel.rows.empty() ? 1.0 : static_cast<double>(panel.rows.size());
    std::string t = "Panel\n-----\n";
    t += "Rows                 " + fmt_int(panel.rows.size()) + "\n";
    t += "Markets              " + fmt_int(markets.size()) + "\n";
    t += "Carriers             " + fmt_int(carriers.size()) + "\n";
    t += "Capacity Discipline  " + fmt_fixed(static_cast<double>(cd_rows) / n, 3) + "\n";
    t += "Talk-Eligible        " + fmt_fixed(static_cast<double>(te_rows) / n, 3) + "\n";
    t += "Monopoly             " + fmt_fixed(static_cast<double>(mono_rows) / n, 3) + "\n";
    emit_table(out_dir / "build_panel.txt", t);
    return 0;
}

int cmd_estimate(const RunConfig& cfg) {
    const auto out_dir = cfg.ensure_out_dir();
    const Panel panel = load_panel(cfg);
    const FeVariant fe = fe_variant_from_string(cfg.fe);
    const TreatmentVariant tv = treatment_from_string(cfg.treatment);
    const RegressionResult r = estimate_panel(panel, fe, tv, regression_options(cfg));

    write_estimates_csv(out_dir / "estimates.csv", r);
    auto summary = regression_summary(r);
    summary.emplace_back("fe", cfg.fe);
    summary.emplace_back("treatment", cfg.treatment);
    summary.emplace_back("alignment", cfg.alignment);
    write_summary_csv(out_dir / "estimate_summary.csv", summary);

    auto footer = regression_footer(r);
    if (auto i = r.index_of("CapacityDiscipline"); i && r.semi_elasticity[*i])
        footer.emplace_back("Semi-elasticity (%)", fmt_fixed(*r.semi_elasticity[*i]));
    const std::string title =
        "Log seats (fe=" + cfg.fe + ", treatment=" + cfg.treatment + ")";
    emit_table(out_dir / "estimate.txt", coef_table(title, coef_rows(r), footer));
    return 0;
}

int cmd_poisson(const RunConfig& cfg) {
    const auto out_dir = cfg.ensure_out_dir();
    const Panel panel = load_panel(cfg);
    PoissonOptions opt;
    opt.grad_tol = cfg.tol;
    const MarketPoisson mp = poisson_market(panel, opt);
    const PoissonFEResult& r = mp.result;

    write_estimates_csv(out_dir / "poisson.csv", r);
    std::string dropped;
    for (const auto& d : r.dropped) {
        if (!dropped.empty()) dropped += ";";
        dropped += d;
    }
    write_summary_csv(out_dir / "poisson_summary.csv",
                      {{"n_obs", fmt_int(r.n_obs)},
                       {"n_markets", fmt_int(r.n_groups)},
                       {"n_markets_dropped", fmt_int(r.n_groups_dropped)},
                       {"loglik", csv::format_double(r.loglik)},
                       {"iterations", std::to_string(r.iterations)},
                       {"dropped", dropped}});

    std::vector<CoefRow> rows;
    for (std::size_t i = 0; i < r.names.size(); ++i) {
        const auto& name = r.names[i];
        if (name.rfind("Quarter_", 0) == 0 || name.rfind("OriginTrend_", 0) == 0 ||
            name.rfind("DestTrend_", 0) == 0)
            continue;
        rows.push_back({display_name(name), r.beta[i], r.se[i]});
    }
    std::vector<std::pair<std::string, std::string>> footer{
        {"Market-months", fmt_int(r.n_obs)},
        {"Markets", fmt_int(r.n_groups)},
        {"Log-likelihood", fmt_fixed(r.loglik, 2)},
        {"Iterations", std::to_string(r.iterations)},
        {"Time dummies / trends", "included"},
    };
    emit_table(out_dir / "poisson.txt",
               coef_table("Market flights (Poisson, market effects)", rows, footer));
    return 0;
}

int cmd_crowding(const RunConfig& cfg, const CrowdingArgs& args) {
    const auto out_dir = cfg.ensure_out_dir();
    require_path(cfg.ontime, "ontime");
    const Panel panel = load_panel(cfg);
    const auto ontime = load_ontime(cfg.ontime);
    const auto view = market_month_view(panel);

    // Normalized crowding per schedule-day, averaged within the month.
    struct Acc {
        double sum = 0.0;
        int days = 0;
    };
    std::map<std::tuple<std::string, std::string, std::string, std::string>, std::vector<double>>
        day_sched;  // carrier ("" = pooled), origin, dest, date
    for (const auto& o : ontime) {
        const std::string carrier = args.per_carrier ? o.carrier : std::string();
        day_sched[{carrier, o.origin, o.dest, o.date}].push_back(o.dep_minutes);
    }
    std::map<std::tuple<std::string, std::string, std::string, int>, Acc> monthly;
    std::map<std::string, YearMonth> date_ym;
    for (const auto& o : ontime) date_ym[o.date] = o.ym;
    std::size_t days_skipped = 0;
    for (const auto& [key, deps] : day_sched) {
        const auto& [carrier, origin, dest, date] = key;
        const auto nc = metrics::normalized_crowding(deps);
        if (!nc) {
            ++days_skipped;
            continue;
        }
        auto& acc = monthly[{carrier, origin, dest, date_ym.at(date).index()}];
        acc.sum += *nc;
        ++acc.days;
    }

    // Carrier-level indicator lookup for the per-carrier variant.
    std::map<std::tuple<std::string, std::string, int>, const PanelRow*> carrier_rows;
    if (args.per_carrier)
        for (const auto& r : panel.rows)
            carrier_rows[{r.carrier, r.market.key(), r.ym.index()}] = &r;

    std::vector<double> outcome;
    std::vector<Regressor> regs(8);
    regs[0] = {"CapacityDiscipline", {}, false};
    regs[1] = {"TalkEligible", {}, false};
    regs[2] = {"Monopoly", {}, false};
    regs[3] = {"MissingReport", {}, false};
    regs[4] = {"TalkEligibleMissingReport", {}, false};
    regs[5] = {"MonopolyMissingReport", {}, false};
    regs[6] = {"LogMarketSeats", {}, false};
    regs[7] = {"LogMarketSeatsCapacityDiscipline", {}, false};
    FixedEffectSpec fe;
    fe.dims.assign(2, {});
    fe.trends.assign(2, {});
    std::vector<std::int32_t> cluster;
    std::map<std::string, std::int32_t> unit_ids, q_ids, o_ids, d_ids, cl_ids;

    int base_month = std::numeric_limits<int>::max();
    for (const auto& [key, acc] : monthly) base_month = std::min(base_month, std::get<3>(key));

    csv::Writer w(out_dir / "crowding.csv");
    w.row("carrier", "origin", "dest", "year", "month", "days", "normalized_crowding");
    std::size_t unmatched = 0;
    for (const auto& [key, acc] : monthly) {
        const auto& [carrier, origin, dest, ymidx] = key;
        const std::string mkey = origin + "-" + dest;
        const auto it = view.find({mkey, ymidx});
        if (it == view.end() || it->second.seats <= 0.0) {
            ++unmatched;
            continue;
        }
        int cd = it->second.cd, te = it->second.te, mono = it->second.mono,
            miss = it->second.miss;
        if (args.per_carrier) {
            const auto cit = carrier_rows.find({carrier, mkey, ymidx});
            if (cit == carrier_rows.end()) {
                ++unmatched;
                continue;
            }
            cd = cit->second->capacity_discipline;
            te = cit->second->talk_eligible;
            mono = cit->second->monopoly;
            miss = cit->second->missing_report;
        }
        const YearMonth ym = YearMonth::from_index(ymidx);
        const double value = acc.sum / acc.days;
        w.row(carrier, origin, dest, ym.year, ym.month, acc.days, value);

        outcome.push_back(value);
        const double log_seats = std::log(it->second.seats);
        regs[0].values.push_back(cd);
        regs[1].values.push_back(te);
        regs[2].values.push_back(mono);
        regs[3].values.push_back(miss);
        regs[4].values.push_back(te * miss);
        regs[5].values.push_back(mono * miss);
        regs[6].values.push_back(log_seats);
        regs[7].values.push_back(log_seats * cd);
        fe.dims[0].push_back(dense(unit_ids, carrier + "|" + mkey));
        fe.dims[1].push_back(
            dense(q_ids, carrier + "|" + ym.quarter().str()));
        fe.trends[0].group.push_back(dense(o_ids, origin));
        fe.trends[0].time.push_back(static_cast<double>(ymidx - base_month));
        fe.trends[1].group.push_back(dense(d_ids, dest));
        fe.trends[1].time.push_back(static_cast<double>(ymidx - base_month));
        cluster.push_back(dense(cl_ids, origin < dest ? origin + "|" + dest
                                                      : dest + "|" + origin));
    }
    if (outcome.size() < 2) throw NumericError("crowding: not enough market-months with schedules");

    const RegressionResult r = estimate_fe(outcome, regs, fe, cluster, regression_options(cfg));
    write_estimates_csv(out_dir / "crowding_estimates.csv", r);
    auto summary = regression_summary(r);
    summary.emplace_back("market_months", fmt_int(outcome.size()));
    summary.emplace_back("days_skipped_single_departure", fmt_int(days_skipped));
    summary.emplace_back("unmatched_schedule_months", fmt_int(unmatched));
    write_summary_csv(out_dir / "crowding_summary.csv", summary);

    auto footer = regression_footer(r);
    footer.emplace_back("Schedule-days skipped (n<2)", fmt_int(days_skipped));
    const std::string title = args.per_carrier
                                  ? "Normalized crowding (carrier-market-month)"
                                  : "Normalized crowding (market-month)";
    emit_table(out_dir / "crowding.txt", coef_table(title, coef_rows(r), footer));
    return 0;
}

int cmd_prices(const RunConfig& cfg, const PricesArgs& args) {
    const auto out_dir = cfg.ensure_out_dir();
    require_path(cfg.fares, "fares");
    RunConfig acfg = cfg;
    acfg.granularity = "airport";  // fare routes are airport chains
    const Panel panel = load_panel(acfg);

    // Segment-quarter indicators: a segment is disciplined in a quarter when
    // every month it appears holds the flag; a report is missing when any
    // month misses one.
    struct SegQ {
        int cd = 1, te = 1, mono = 1, miss = 0, months = 0;
    };
    std::map<std::pair<std::string, int>, SegQ> segq;
    for (const auto& r : panel.rows) {
        auto& s = segq[{r.market.key(), r.ym.quarter().index()}];
        s.cd &= r.capacity_discipline;
        s.te &= r.talk_eligible;
        s.mono &= r.monopoly;
        s.miss |= r.missing_report;
        ++s.months;
    }

    const auto routes = metrics::aggregate_fares(load_fares(cfg.fares));
    const CarrierRegistry registry = CarrierRegistry::standard();

    struct Group {
        std::vector<double> cd, te, mono, miss, te_miss, mono_miss, log_fare, pax;
    };
    std::map<std::tuple<std::string, std::string, std::string, int>, Group> groups;
    std::size_t dropped_routes = 0;
    for (const auto& rp : routes) {
        const int q = rp.yq.index();
        if (!segq.count({Market{rp.origin, rp.dest}.key(), q})) {
            ++dropped_routes;
            continue;
        }
        std::vector<double> cds, tes, monos, misses;
        bool ok = true;
        for (const auto& [o, d] : metrics::route_segments(rp.route)) {
            const auto it = segq.find({Market{o, d}.key(), q});
            if (it == segq.end()) {
                ok = false;
                break;
            }
            cds.push_back(it->second.cd);
            tes.push_back(it->second.te);
            monos.push_back(it->second.mono);
            misses.push_back(it->second.miss);
        }
        if (!ok || cds.empty() || rp.passengers <= 0.0 || rp.avg_fare <= 0.0) {
            ++dropped_routes;
            continue;
        }
        const double cd = metrics::route_indicator(cds, metrics::RouteRule::AllSegments);
        const double te = metrics::route_indicator(tes, metrics::RouteRule::AllSegments);
        const double mono = metrics::route_indicator(monos, metrics::RouteRule::AllSegments);
        const double miss = metrics::route_indicator(misses, metrics::RouteRule::AnySegment);
        auto& g = groups[{rp.carrier, rp.origin, rp.dest, q}];
        g.cd.push_back(cd);
        g.te.push_back(te);
        g.mono.push_back(mono);
        g.miss.push_back(miss);
        g.te_miss.push_back(te * miss);
        g.mono_miss.push_back(mono * miss);
        g.log_fare.push_back(std::log(rp.avg_fare));
        g.pax.push_back(rp.passengers);
    }
    if (groups.size() < 2) throw NumericError("prices: not enough carrier-market-quarters");

    std::vector<double> outcome;
    const bool split = args.split_class;
    std::vector<Regressor> regs;
    if (split) {
        regs.push_back({"CapacityDisciplineLegacy", {}, false});
        regs.push_back({"CapacityDisciplineLcc", {}, false});
    } else {
        regs.push_back({"CapacityDiscipline", {}, false});
    }
    regs.push_back({"TalkEligible", {}, false});
    regs.push_back({"Monopoly", {}, false});
    regs.push_back({"MissingReport", {}, false});
    regs.push_back({"TalkEligibleMissingReport", {}, false});
    regs.push_back({"MonopolyMissingReport", {}, false});
    FixedEffectSpec fe;
    fe.dims.assign(2, {});
    fe.trends.assign(2, {});
    std::vector<std::int32_t> cluster;
    std::map<std::string, std::int32_t> unit_ids, cq_ids, o_ids, d_ids, cl_ids;
    int base_q = std::numeric_limits<int>::max();
    for (const auto& [key, g] : groups) base_q = std::min(base_q, std::get<3>(key));

    csv::Writer w(out_dir / "prices.csv");
    w.row("carrier", "origin", "dest", "year", "quarter", "routes", "weighted_log_fare",
          "capacity_discipline", "talk_eligible", "monopoly", "missing_report");
    for (const auto& [key, g] : groups) {
        const auto& [carrier, origin, dest, qidx] = key;
        const YearQuarter yq = YearQuarter::from_index(qidx);
        const double wcd = metrics::passenger_weighted(g.cd, g.pax);
        const double wte = metrics::passenger_weighted(g.te, g.pax);
        const double wmono = metrics::passenger_weighted(g.mono, g.pax);
        const double wmiss = metrics::passenger_weighted(g.miss, g.pax);
        const double wlog = metrics::passenger_weighted(g.log_fare, g.pax);
        w.row(carrier, origin, dest, yq.year, yq.quarter,
              static_cast<std::int64_t>(g.cd.size()), wlog, wcd, wte, wmono, wmiss);

        outcome.push_back(wlog);
        std::size_t k = 0;
        if (split) {
            const bool legacy = registry.is_legacy(carrier);
            regs[k++].values.push_back(legacy ? wcd : 0.0);
            regs[k++].values.push_back(legacy ? 0.0 : wcd);
        } else {
            regs[k++].values.push_back(wcd);
        }
        regs[k++].values.push_back(wte);
        regs[k++].values.push_back(wmono);
        regs[k++].values.push_back(wmiss);
        regs[k++].values.push_back(metrics::passenger_weighted(g.te_miss, g.pax));
        regs[k++].values.push_back(metrics::passenger_weighted(g.mono_miss, g.pax));
        fe.dims[0].push_back(dense(unit_ids, carrier + "|" + origin + "-" + dest));
        fe.dims[1].push_back(dense(cq_ids, carrier + "|" + yq.str()));
        fe.trends[0].group.push_back(dense(o_ids, origin));
        fe.trends[0].time.push_back(static_cast<double>(qidx - base_q));
        fe.trends[1].group.push_back(dense(d_ids, dest));
        fe.trends[1].time.push_back(static_cast<double>(qidx - base_q));
        cluster.push_back(dense(cl_ids, origin < dest ? origin + "|" + dest
                                                      : dest + "|" + origin));
    }

    const RegressionResult r = estimate_fe(outcome, regs, fe, cluster, regression_options(cfg));
    write_estimates_csv(out_dir / "prices_estimates.csv", r);
    auto summary = regression_summary(r);
    summary.emplace_back("carrier_market_quarters", fmt_int(outcome.size()));
    summary.emplace_back("routes_dropped", fmt_int(dropped_routes));
    write_summary_csv(out_dir / "prices_summary.csv", summary);

    auto footer = regression_footer(r);
    footer.emplace_back("Routes dropped (off panel)", fmt_int(dropped_routes));
    emit_table(out_dir / "prices.txt",
               coef_table("Log route fare (passenger weighted)", coef_rows(r), footer));
    return 0;
}

int cmd_hubs(const RunConfig& cfg) {
    const auto out_dir = cfg.ensure_out_dir();
    const auto segments = load_segments_cfg(cfg);
    const auto networks =
        net::build_networks(segments, cfg.hub_threshold, cfg.min_monthly_flights);

    std::size_t with_centrality = 0;
    std::map<std::string, std::set<std::string>> hubs_by_carrier;
    {
        csv::Writer w(out_dir / "hubs.csv");
        w.row("carrier", "year", "quarter", "airport", "centrality");
        for (const auto& n : networks) {
            if (!n.centrality.empty()) ++with_centrality;
            for (const auto& h : n.hub_airports) {
                const int i = n.graph.index_of(h);
                w.row(n.carrier, n.period.year, n.period.quarter, h,
                      i >= 0 ? n.centrality[static_cast<std::size_t>(i)] : 0.0);
                hubs_by_carrier[n.carrier].insert(h);
            }
        }
    }

    std::string t = "Hub identification (threshold " + fmt_fixed(cfg.hub_threshold, 2) + ")\n";
    t += "----------------------------------------\n";
    t += "Carrier-quarter networks   " + fmt_int(networks.size()) + "\n";
    t += "With centrality (N>=3)     " + fmt_int(with_centrality) + "\n";
    for (const auto& [c, hs] : hubs_by_carrier) {
        t += c + "  ";
        std::size_t i = 0;
        for (const auto& h : hs) t += (i++ ? ", " : "") + h;
        t += "\n";
    }
    emit_table(out_dir / "hubs.txt", t);
    return 0;
}

int cmd_control_function(const RunConfig& cfg) {
    const auto out_dir = cfg.ensure_out_dir();
    require_path(cfg.coordinates, "coordinates");
    const auto segments = load_segments_cfg(cfg);
    const Panel panel = load_panel(cfg);
    const auto networks =
        net::build_networks(segments, cfg.hub_threshold, cfg.min_monthly_flights);
    const auto coords = load_coordinates(cfg.coordinates);
    const CfAssembly assembly =
        assemble_control_function(panel, networks, coords, CarrierRegistry::standard());

    ControlFunctionOptions opt;
    opt.bootstrap.replicates = cfg.bootstrap;
    opt.bootstrap.seed = cfg.seed;
    opt.bootstrap.workers = cfg.threads;
    opt.regression = regression_options(cfg);
    const ControlFunctionResult r = control_function(assembly.data, opt);

    write_estimates_csv(out_dir / "first_stage.csv", r.first_stage);
    {
        csv::Writer w(out_dir / "second_stage.csv");
        w.row("term", "estimate", "std_error", "bootstrap_se");
        for (std::size_t i = 0; i < r.second_stage.names.size(); ++i) {
            w.field(r.second_stage.names[i]);
            w.field(r.second_stage.beta[i]);
            w.field(r.second_stage.se[i]);
            if (i < r.bootstrap_se.size())
                w.field(r.bootstrap_se[i]);
            else
                w.field(std::string());
            w.end_row();
        }
    }
    write_summary_csv(out_dir / "control_function_summary.csv",
                      {{"first_stage_f", csv::format_double(r.first_stage_f)},
                       {"market_months", fmt_int(assembly.market_months_kept)},
                       {"market_months_dropped", fmt_int(assembly.market_months_dropped)},
                       {"second_stage_obs", fmt_int(r.second_stage.n_obs)},
                       {"clusters", fmt_int(r.second_stage.n_clusters)},
                       {"bootstrap_replicates", std::to_string(cfg.bootstrap)},
                       {"bootstrap_failed", fmt_int(r.bootstrap_failed)}});

    const bool boot = !r.bootstrap_se.empty();
    std::vector<CoefRow> rows;
    for (std::size_t i = 0; i < r.second_stage.names.size(); ++i)
        rows.push_back({display_name(r.second_stage.names[i]), r.second_stage.beta[i],
                        boot ? r.bootstrap_se[i] : r.second_stage.se[i]});
    std::vector<std::pair<std::string, std::string>> footer{
        {"First-stage F", fmt_fixed(r.first_stage_f, 2)},
        {"Market-months", fmt_int(assembly.market_months_kept)},
        {"Dropped (no hub distance)", fmt_int(assembly.market_months_dropped)},
        {"Observations", fmt_int(r.second_stage.n_obs)},
        {"Clusters", fmt_int(r.second_stage.n_clusters)},
        {"SE", boot ? "cluster bootstrap (" + std::to_string(cfg.bootstrap) + ")"
                    : "analytic (clustered)"},
    };
    if (r.bootstrap_failed > 0)
        footer.emplace_back("Bootstrap failures", fmt_int(r.bootstrap_failed));
    emit_table(out_dir / "control_function.txt",
               coef_table("Log seats with first-stage residual", rows, footer));
    return 0;
}

int cmd_diagnostics(const RunConfig& cfg, const DiagnosticsArgs& args) {
    const auto out_dir = cfg.ensure_out_dir();
    const bool run_lead = args.lead || !args.twfe;
    const bool run_twfe = args.twfe || !args.lead;
    const Panel panel = load_panel(cfg);
    const FeVariant fe = fe_variant_from_string(cfg.fe);

    std::vector<std::pair<std::string, std::string>> summary;
    std::string t = "Diagnostics\n-----------\n";

    if (run_lead) {
        const LeadTestResult lead = lead_exogeneity_test(panel, fe, regression_options(cfg));
        write_estimates_csv(out_dir / "lead_test.csv", lead.regression);
        summary.emplace_back("lead_coef", csv::format_double(lead.lead_coef));
        summary.emplace_back("lead_se", csv::format_double(lead.lead_se));
        summary.emplace_back("lead_rows_dropped", fmt_int(lead.rows_dropped));
        t += "Lead Capacity Discipline   " + fmt_fixed(lead.lead_coef) + "\n";
        t += "                           (" + fmt_fixed(lead.lead_se) + ")\n";
        t += "Rows without lead          " + fmt_int(lead.rows_dropped) + "\n";
    }
    if (run_twfe) {
        const DesignMatrices d = build_design(panel, fe, TreatmentVariant{});
        AbsorbOptions aopt;
        aopt.tol = cfg.tol;
        const TwfeWeights wts = twfe_weights(d.regressors[0].values, d.fe, aopt);
        double wmin = 0.0, wmax = 0.0;
        for (const auto& v : wts.weights) {
            wmin = std::min(wmin, v);
            wmax = std::max(wmax, v);
        }
        summary.emplace_back("twfe_treated_cells", fmt_int(wts.treated_rows.size()));
        summary.emplace_back("twfe_share_negative", csv::format_double(wts.share_negative));
        summary.emplace_back("twfe_weight_min", csv::format_double(wmin));
        summary.emplace_back("twfe_weight_max", csv::format_double(wmax));
        t += "TWFE treated cells         " + fmt_int(wts.treated_rows.size()) + "\n";
        t += "TWFE share negative        " + fmt_fixed(wts.share_negative) + "\n";
        t += "TWFE weight range          [" + fmt_fixed(wmin) + ", " + fmt_fixed(wmax) + "]\n";
    }
    write_summary_csv(out_dir / "diagnostics.csv", summary);
    emit_table(out_dir / "diagnostics.txt", t);
    return 0;
}

int cmd_simulate(const RunConfig& cfg, const SimulateArgs& args) {
    const auto out_dir = cfg.ensure_out_dir();
    PanelDGP dgp;
    dgp.seed = cfg.seed;
    if (args.pairs > 0) dgp.n_market_pairs = args.pairs;
    if (args.months > 0) dgp.n_months = args.months;
    if (args.airports > 0) dgp.n_airports = args.airports;
    if (args.legacies > 0) dgp.n_legacies = args.legacies;
    if (args.lccs >= 0) dgp.n_lccs = args.lccs;
    if (args.start_year > 0) dgp.start_year = args.start_year;

    const GeneratedPanel g = gen_panel(dgp);
    const FixturePaths p = write_fixture(g, out_dir);

    {
        std::ofstream out(out_dir / "run.cfg", std::ios::binary);
        out << "segments=" << p.segments.string() << "\n"
            << "status=" << p.status.string() << "\n"
            << "labels=" << p.labels.string() << "\n"
            << "transcripts=" << p.transcripts.string() << "\n"
            << "coordinates=" << p.coordinates.string() << "\n"
            << "populations=" << p.populations.string() << "\n"
            << "ontime=" << p.ontime.string() << "\n"
            << "fares=" << p.fares.string() << "\n"
            << "cities=" << p.cities.string() << "\n"
            << "alignment=shifted\n"
            << "granularity=airport\n"
            // synthetic route networks are sparser than real ones; a lower
            // centrality cutoff keeps every carrier's hubs identified
            << "hub-threshold=0.03\n";
    }

    std::size_t transcripts = 0;
    for (const auto& [k, st] : g.statuses)
        if (st == TranscriptStatus::Collected) ++transcripts;
    std::string t = "Synthetic fixture (seed " + std::to_string(dgp.seed) + ")\n";
    t += "--------------------------------\n";
    t += "Segments             " + fmt_int(g.segments.size()) + "\n";
    t += "Panel rows           " + fmt_int(g.panel.rows.size()) + "\n";
    t += "Market pairs         " + std::to_string(dgp.n_market_pairs) + "\n";
    t += "Months               " + std::to_string(dgp.n_months) + "\n";
    t += "Transcripts          " + fmt_int(transcripts) + "\n";
    t += "Config               " + (out_dir / "run.cfg").string() + "\n";
    emit_table(out_dir / "simulate.txt", t);
    return 0;
}

}  // namespace aircap::cli
