#include "aircap/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include "aircap/csv.hpp"
#include "aircap/errors.hpp"
#include "aircap/rng.hpp"

namespace aircap {

namespace {

const std::vector<std::string>& filler_pool() {
    static const std::vector<std::string> pool{
        "Fuel costs moved against us this quarter.",
        "Our hedging program performed in line with expectations.",
        "Load factors held firm across the system.",
        "We continue to invest in the fleet and in our people.",
        "Unit revenue improved on last year.",
        "The network team adjusted frequencies on several routes.",
        "Maintenance spend came in slightly below plan.",
        "We returned two aircraft to the lessor in the period.",
        "Booking curves look normal for this point in the season.",
        "Yields firmed toward the end of the quarter.",
        "Corporate travel held steady through the period.",
        "We took delivery of three narrowbody aircraft.",
    };
    return pool;
}

const std::vector<std::string>& phrase_pool() {
    static const std::vector<std::string> pool{
        "We remain committed to capacity discipline across the network.",
        "Capacity discipline stays the cornerstone of our plan.",
        "The industry continues to show capacity discipline.",
        "Our posture on capacity discipline has not changed.",
    };
    return pool;
}

const std::vector<std::string>& question_pool() {
    static const std::vector<std::string> pool{
        "Can you talk about the cost outlook for next quarter?",
        "How should we think about fuel hedging from here?",
        "What are you seeing in corporate bookings?",
        "Any update on the fleet plan for next year?",
    };
    return pool;
}

std::string transcript_text(const std::string& carrier, YearQuarter q, int flag, Rng& rng) {
    const auto& fill = filler_pool();
    auto pick = [&](const std::vector<std::string>& pool) {
        return pool[rng.uniform_int(pool.size())];
    };

    std::string text;
    text += "<<SPEAKER:operator>> Good morning and welcome to the " + carrier +
            " earnings call for " + q.str() + ". Please go ahead.\n";
    text += "<<SPEAKER:management>> Thanks everyone for joining us today. ";
    const std::size_t n_fill = 2 + rng.uniform_int(3);
    for (std::size_t i = 0; i < n_fill; ++i) text += pick(fill) + " ";

    bool bait_analyst = false;
    if (flag == 1) {
        text += pick(phrase_pool()) + " ";
        if (rng.uniform() < 0.9) text += "Demand trends continue to support the plan. ";
        if (rng.uniform() < 0.85) text += "Gdp growth remains supportive of travel spending. ";
        if (rng.uniform() < 0.5)
            text += "Schedule restraint and measured growth remain our approach. ";
        if (rng.uniform() < 0.3) text += "Aircraft utilization improved year over year. ";
    } else {
        if (rng.uniform() < 0.12) {
            text += "Our capacity plans track bookings closely. ";
            text += "Overall demand trends look stable into the spring. ";
        }
        if (rng.uniform() < 0.3) text += "Aircraft utilization improved year over year. ";
        bait_analyst = rng.uniform() < 0.18;
    }
    text += "\n";

    text += "<<SPEAKER:analyst>> ";
    text += bait_analyst ? "How do you think about capacity discipline going forward?"
                         : pick(question_pool());
    text += "\n";
    text += "<<SPEAKER:management>> Sure. " + pick(fill) + "\n";
    text += "<<SPEAKER:operator>> That concludes the call.\n";
    return text;
}

// Well-spread deterministic coordinates inside a rough continental box.
Coordinate airport_coordinate(std::size_t i) {
    const double f1 = std::fmod(0.618033988749895 * static_cast<double>(i) + 0.13, 1.0);
    const double f2 = std::fmod(0.754877666246693 * static_cast<double>(i) + 0.31, 1.0);
    return Coordinate{24.0 + 24.0 * f1, -124.0 + 54.0 * f2};
}

}  // namespace

FixturePaths fixture_paths(const std::filesystem::path& dir) {
    FixturePaths p;
    p.segments = dir / "segments.csv";
    p.status = dir / "status.csv";
    p.labels = dir / "labels.csv";
    p.transcripts = dir / "transcripts";
    p.cities = dir / "cities.csv";
    p.coordinates = dir / "coordinates.csv";
    p.populations = dir / "populations.csv";
    p.ontime = dir / "ontime.csv";
    p.fares = dir / "fares.csv";
    p.truth = dir / "truth.csv";
    return p;
}

FixturePaths write_fixture(const GeneratedPanel& g, const std::filesystem::path& dir) {
    const FixturePaths p = fixture_paths(dir);
    std::filesystem::create_directories(p.transcripts);

    {
        csv::Writer w(p.segments);
        w.row("year", "month", "ticketing_carrier", "origin", "dest", "seats", "flights",
              "passengers");
        for (const auto& s : g.segments)
            w.row(s.ym.year, s.ym.month, s.carrier, s.origin, s.dest, s.seats, s.flights,
                  s.passengers);
    }

    {
        csv::Writer w(p.status);
        w.row("carrier", "year", "quarter", "status");
        for (const auto& [key, st] : g.statuses)
            w.row(key.first, key.second.year, key.second.quarter, to_string(st));
    }

    {
        // A few audited labels; they agree with the transcripts by design.
        csv::Writer w(p.labels);
        w.row("carrier", "year", "quarter", "label", "source");
        std::size_t i = 0;
        std::size_t written = 0;
        for (const auto& [key, st] : g.statuses) {
            if (st == TranscriptStatus::Collected && i++ % 9 == 0 && written < 6) {
                w.row(key.first, key.second.year, key.second.quarter,
                      g.flags.at(key).flag, to_string(LabelSource::RA));
                ++written;
            }
        }
    }

    {
        Rng rng(Rng::derive(g.dgp.seed, 11));
        for (const auto& [key, st] : g.statuses) {
            if (st != TranscriptStatus::Collected) continue;
            const auto& [carrier, q] = key;
            const int flag = g.flags.at(key).flag;
            std::ofstream out(p.transcripts / (carrier + "_" + q.str() + ".txt"),
                              std::ios::binary);
            out << transcript_text(carrier, q, flag, rng);
        }
    }

    {
        csv::Writer w(p.cities);
        w.row("airport", "city");
        for (std::size_t i = 0; i < g.airports.size(); ++i) {
            std::string city = "CITY" + std::to_string(i / 2);
            w.row(g.airports[i], city);
        }
    }

    {
        csv::Writer w(p.coordinates);
        w.row("airport", "lat", "lon");
        for (std::size_t i = 0; i < g.airports.size(); ++i) {
            const Coordinate c = airport_coordinate(i);
            w.row(g.airports[i], c.lat, c.lon);
        }
    }

    {
        csv::Writer w(p.populations);
        w.row("airport", "year", "cbsa_pop", "business_index");
        const int y_lo = g.dgp.start_year;
        const int y_hi = YearMonth{g.dgp.start_year, 1}.plus(g.dgp.n_months - 1).year;
        for (std::size_t i = 0; i < g.airports.size(); ++i) {
            const double pop0 = 5e5 * (1.0 + static_cast<double>(i % 12));
            const double biz = 0.85 + 0.03 * static_cast<double>(i % 9);
            for (int y = y_lo; y <= y_hi; ++y)
                w.row(g.airports[i], y, pop0 * (1.0 + 0.01 * (y - y_lo)), biz);
        }
    }

    {
        Rng rng(Rng::derive(g.dgp.seed, 12));
        csv::Writer w(p.ontime);
        w.row("date", "carrier", "origin", "dest", "dep_minutes");
        const int days[3] = {8, 18, 28};
        for (const auto& s : g.segments) {
            const int n_dep = 1 + (s.flights >= 45 ? 1 : 0) + (s.flights >= 90 ? 1 : 0);
            for (int day : days) {
                char date[16];
                std::snprintf(date, sizeof date, "%04d-%02d-%02d", s.ym.year, s.ym.month, day);
                for (int k = 0; k < n_dep; ++k)
                    w.row(std::string(date), s.carrier, s.origin, s.dest,
                          static_cast<double>(rng.uniform_int(1440)));
            }
        }
    }

    {
        Rng rng(Rng::derive(g.dgp.seed, 13));
        using Key = std::tuple<std::string, std::string, std::string, int>;
        std::map<Key, double> qpax;
        std::set<Key> served;
        for (const auto& s : g.segments) {
            Key k{s.carrier, s.origin, s.dest, s.ym.quarter().index()};
            qpax[k] += s.passengers;
            served.insert(k);
        }
        csv::Writer w(p.fares);
        w.row("carrier", "origin", "dest", "route", "passengers", "avg_fare", "year", "quarter");
        auto cents = [](double v) { return std::round(v * 100.0) / 100.0; };
        for (const auto& [k, pax] : qpax) {
            const auto& [c, o, d, qidx] = k;
            const YearQuarter q = YearQuarter::from_index(qidx);
            w.row(c, o, d, o + "-" + d, std::round(0.3 * pax),
                  cents(140.0 + 260.0 * rng.uniform()), q.year, q.quarter);
            if (rng.uniform() < 0.3) {
                for (const auto& h : g.airports) {
                    if (h == o || h == d) continue;
                    if (!served.count({c, o, h, qidx}) || !served.count({c, h, d, qidx}))
                        continue;
                    w.row(c, o, d, o + "-" + h + "-" + d,
                          std::max(1.0, std::round(0.08 * pax)),
                          cents(110.0 + 220.0 * rng.uniform()), q.year, q.quarter);
                    break;
                }
            }
        }
    }

    {
        csv::Writer w(p.truth);
        w.row("key", "value");
        w.row("beta_capacity_discipline", g.dgp.beta_capdis);
        w.row("beta_talk_eligible", g.dgp.beta_talk);
        w.row("beta_monopoly", g.dgp.beta_monopoly);
        w.row("beta_missing_report", g.dgp.beta_missing);
        w.row("base_log_seats", g.dgp.base_log_seats);
        w.row("semi_elasticity_capacity_discipline_pct",
              100.0 * std::expm1(g.dgp.beta_capdis));
        w.row("n_market_pairs", static_cast<std::int64_t>(g.dgp.n_market_pairs));
        w.row("n_airports", static_cast<std::int64_t>(g.dgp.n_airports));
        w.row("n_months", static_cast<std::int64_t>(g.dgp.n_months));
        w.row("start_year", static_cast<std::int64_t>(g.dgp.start_year));
        w.row("seed", static_cast<std::int64_t>(g.dgp.seed));
    }

    return p;
}

}  // namespace aircap
