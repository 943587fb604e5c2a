#include "aircap/data.hpp"

#include <charconv>

#include "aircap/errors.hpp"

namespace aircap {

namespace {

YearMonth read_year_month(const csv::Table& t, std::size_t row, std::size_t ycol, std::size_t mcol) {
    const int year = static_cast<int>(csv::to_int(t, row, ycol));
    const int month = static_cast<int>(csv::to_int(t, row, mcol));
    if (month < 1 || month > 12) {
        throw SchemaError(t.source + ": row " + std::to_string(row + 2) + ": month " +
                          std::to_string(month) + " out of range");
    }
    return {year, month};
}

YearQuarter read_year_quarter(const csv::Table& t, std::size_t row, std::size_t ycol, std::size_t qcol) {
    const int year = static_cast<int>(csv::to_int(t, row, ycol));
    const int quarter = static_cast<int>(csv::to_int(t, row, qcol));
    if (quarter < 1 || quarter > 4) {
        throw SchemaError(t.source + ": row " + std::to_string(row + 2) + ": quarter " +
                          std::to_string(quarter) + " out of range");
    }
    return {year, quarter};
}

} // namespace

std::string to_string(TranscriptStatus s) {
    switch (s) {
        case TranscriptStatus::Collected: return "collected";
        case TranscriptStatus::Bankruptcy: return "bankruptcy";
        case TranscriptStatus::Merger: return "merger";
        case TranscriptStatus::Private: return "private";
        case TranscriptStatus::Other: return "other";
    }
    return "other";
}

TranscriptStatus transcript_status_from_string(const std::string& s) {
    if (s == "collected") return TranscriptStatus::Collected;
    if (s == "bankruptcy") return TranscriptStatus::Bankruptcy;
    if (s == "merger") return TranscriptStatus::Merger;
    if (s == "private") return TranscriptStatus::Private;
    if (s == "other") return TranscriptStatus::Other;
    throw SchemaError("unknown transcript status '" + s + "'");
}

std::string to_string(LabelSource s) {
    switch (s) {
        case LabelSource::Authors: return "authors";
        case LabelSource::RA: return "ra";
        case LabelSource::Automatic: return "automatic";
    }
    return "automatic";
}

LabelSource label_source_from_string(const std::string& s) {
    if (s == "authors") return LabelSource::Authors;
    if (s == "ra") return LabelSource::RA;
    if (s == "automatic") return LabelSource::Automatic;
    throw SchemaError("unknown label source '" + s + "'");
}

std::vector<SegmentRecord> load_segments(const std::filesystem::path& path) {
    const auto t = csv::read_file(path);
    const auto cy = t.col("year"), cm = t.col("month"), cc = t.col("ticketing_carrier");
    const auto co = t.col("origin"), cd = t.col("dest");
    const auto cs = t.col("seats"), cf = t.col("flights"), cp = t.col("passengers");
    std::vector<SegmentRecord> out;
    out.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        SegmentRecord r;
        r.ym = read_year_month(t, i, cy, cm);
        r.carrier = t.rows[i][cc];
        r.origin = t.rows[i][co];
        r.dest = t.rows[i][cd];
        r.seats = csv::to_double(t, i, cs);
        r.flights = csv::to_int(t, i, cf);
        r.passengers = csv::to_double(t, i, cp);
        if (r.origin == r.dest) {
            throw SchemaError(t.source + ": row " + std::to_string(i + 2) +
                              ": origin equals destination");
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<StatusRecord> load_status(const std::filesystem::path& path) {
    const auto t = csv::read_file(path);
    const auto cc = t.col("carrier"), cy = t.col("year"), cq = t.col("quarter"), cs = t.col("status");
    std::vector<StatusRecord> out;
    out.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        StatusRecord r;
        r.carrier = t.rows[i][cc];
        r.yq = read_year_quarter(t, i, cy, cq);
        r.status = transcript_status_from_string(t.rows[i][cs]);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<LabelRecord> load_labels(const std::filesystem::path& path) {
    const auto t = csv::read_file(path);
    const auto cc = t.col("carrier"), cy = t.col("year"), cq = t.col("quarter");
    const auto cl = t.col("label"), cs = t.col("source");
    std::vector<LabelRecord> out;
    out.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        LabelRecord r;
        r.carrier = t.rows[i][cc];
        r.yq = read_year_quarter(t, i, cy, cq);
        r.label = static_cast<int>(csv::to_int(t, i, cl));
        if (r.label != 0 && r.label != 1) {
            throw SchemaError(t.source + ": row " + std::to_string(i + 2) + ": label must be 0 or 1");
        }
        r.source = label_source_from_string(t.rows[i][cs]);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<PopulationRecord> load_populations(const std::filesystem::path& path) {
    const auto t = csv::read_file(path);
    const auto ca = t.col("airport"), cy = t.col("year");
    const auto cp = t.col("cbsa_pop"), cb = t.col("business_index");
    std::vector<PopulationRecord> out;
    out.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        PopulationRecord r;
        r.airport = t.rows[i][ca];
        r.year = static_cast<int>(csv::to_int(t, i, cy));
        r.cbsa_pop = csv::to_double(t, i, cp);
        r.business_index = csv::to_double(t, i, cb);
        if (r.cbsa_pop <= 0.0) {
            throw SchemaError(t.source + ": row " + std::to_string(i + 2) + ": cbsa_pop must be positive");
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::map<std::string, Coordinate> load_coordinates(const std::filesystem::path& path) {
    const auto t = csv::read_file(path);
    const auto ca = t.col("airport"), clat = t.col("lat"), clon = t.col("lon");
    std::map<std::string, Coordinate> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const double lat = csv::to_double(t, i, clat);
        const double lon = csv::to_double(t, i, clon);
        if (lat < -90.0 || lat > 90.0 || lon < -180.0 || lon > 180.0) {
            throw SchemaError(t.source + ": row " + std::to_string(i + 2) + ": coordinate out of range");
        }
        out[t.rows[i][ca]] = {lat, lon};
    }
    return out;
}

std::vector<OnTimeRecord> load_ontime(const std::filesystem::path& path) {
    const auto t = csv::read_file(path);
    const auto cd = t.col("date"), cc = t.col("carrier");
    const auto co = t.col("origin"), cde = t.col("dest"), cm = t.col("dep_minutes");
    std::vector<OnTimeRecord> out;
    out.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        OnTimeRecord r;
        r.date = t.rows[i][cd];
        if (r.date.size() != 10 || r.date[4] != '-' || r.date[7] != '-') {
            throw SchemaError(t.source + ": row " + std::to_string(i + 2) +
                              ": date must be YYYY-MM-DD, got '" + r.date + "'");
        }
        r.ym.year = std::stoi(r.date.substr(0, 4));
        r.ym.month = std::stoi(r.date.substr(5, 2));
        if (r.ym.month < 1 || r.ym.month > 12) {
            throw SchemaError(t.source + ": row " + std::to_string(i + 2) + ": month out of range");
        }
        r.carrier = t.rows[i][cc];
        r.origin = t.rows[i][co];
        r.dest = t.rows[i][cde];
        r.dep_minutes = csv::to_double(t, i, cm);
        if (r.dep_minutes < 0.0 || r.dep_minutes >= 1440.0) {
            throw SchemaError(t.source + ": row " + std::to_string(i + 2) +
                              ": dep_minutes must lie in [0,1440)");
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<FareRecord> load_fares(const std::filesystem::path& path) {
    const auto t = csv::read_file(path);
    const auto cc = t.col("carrier"), co = t.col("origin"), cd = t.col("dest");
    const auto cr = t.col("route"), cp = t.col("passengers"), cf = t.col("avg_fare");
    const auto cy = t.col("year"), cq = t.col("quarter");
    std::vector<FareRecord> out;
    out.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        FareRecord r;
        r.carrier = t.rows[i][cc];
        r.origin = t.rows[i][co];
        r.dest = t.rows[i][cd];
        r.route = t.rows[i][cr];
        r.passengers = csv::to_double(t, i, cp);
        r.avg_fare = csv::to_double(t, i, cf);
        r.yq = read_year_quarter(t, i, cy, cq);
        if (r.passengers <= 0.0) {
            throw SchemaError(t.source + ": row " + std::to_string(i + 2) + ": passengers must be positive");
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::map<std::string, std::string> load_city_map(const std::filesystem::path& path) {
    const auto t = csv::read_file(path);
    const auto ca = t.col("airport"), cc = t.col("city");
    std::map<std::string, std::string> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        // City codes feed market keys of the form ORIGIN-DEST, so a dash
        // inside a code would make those keys ambiguous.
        if (t.rows[i][cc].find('-') != std::string::npos)
            throw SchemaError(path.string() + ": city code may not contain '-' (row " +
                              std::to_string(i + 2) + ")");
        out[t.rows[i][ca]] = t.rows[i][cc];
    }
    return out;
}

bool parse_transcript_name(const std::string& filename, std::string& carrier, YearQuarter& yq) {
    std::string stem = filename;
    if (auto dot = stem.rfind('.'); dot != std::string::npos) stem = stem.substr(0, dot);
    const auto us = stem.rfind('_');
    if (us == std::string::npos || us == 0) return false;
    const std::string tail = stem.substr(us + 1); // YYYYQN
    if (tail.size() != 6 || tail[4] != 'Q') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u}) {
        if (!std::isdigit(static_cast<unsigned char>(tail[i]))) return false;
    }
    carrier = stem.substr(0, us);
    yq.year = std::stoi(tail.substr(0, 4));
    yq.quarter = tail[5] - '0';
    return yq.quarter >= 1 && yq.quarter <= 4;
}

} // namespace aircap
