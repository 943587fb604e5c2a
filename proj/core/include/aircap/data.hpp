#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "aircap/calendar.hpp"
#include "aircap/csv.hpp"

namespace aircap {

// One carrier-market-month slice of the segment capacity data.
struct SegmentRecord {
    YearMonth ym;
    std::string carrier;
    std::string origin;
    std::string dest;
    double seats = 0.0;
    std::int64_t flights = 0;
    double passengers = 0.0;
};

enum class TranscriptStatus : std::uint8_t {
    Collected,
    Bankruptcy,
    Merger,
    Private,
    Other,
};

std::string to_string(TranscriptStatus s);
TranscriptStatus transcript_status_from_string(const std::string& s);

struct StatusRecord {
    std::string carrier;
    YearQuarter yq;
    TranscriptStatus status = TranscriptStatus::Other;
};

enum class LabelSource : std::uint8_t {
    Authors,
    RA,
    Automatic,
};

std::string to_string(LabelSource s);
LabelSource label_source_from_string(const std::string& s);

struct LabelRecord {
    std::string carrier;
    YearQuarter yq;
    int label = 0; // {0,1}
    LabelSource source = LabelSource::Automatic;
};

struct PopulationRecord {
    std::string airport;
    int year = 0;
    double cbsa_pop = 0.0;
    double business_index = 0.0;
};

struct Coordinate {
    double lat = 0.0;
    double lon = 0.0;
};

struct OnTimeRecord {
    std::string date; // YYYY-MM-DD
    YearMonth ym;
    std::string carrier;
    std::string origin;
    std::string dest;
    double dep_minutes = 0.0; // minutes after midnight, [0,1440)
};

struct FareRecord {
    std::string carrier;
    std::string origin;
    std::string dest;
    std::string route; // hyphen-joined airport chain, e.g. ABC-DEF-GHI
    double passengers = 0.0;
    double avg_fare = 0.0;
    YearQuarter yq;
};

std::vector<SegmentRecord> load_segments(const std::filesystem::path& path);
std::vector<StatusRecord> load_status(const std::filesystem::path& path);
std::vector<LabelRecord> load_labels(const std::filesystem::path& path);
std::vector<PopulationRecord> load_populations(const std::filesystem::path& path);
std::map<std::string, Coordinate> load_coordinates(const std::filesystem::path& path);
std::vector<OnTimeRecord> load_ontime(const std::filesystem::path& path);
std::vector<FareRecord> load_fares(const std::filesystem::path& path);
std::map<std::string, std::string> load_city_map(const std::filesystem::path& path);

// Parses CARRIER_YYYYQN from a transcript file name (extension ignored).
// Returns false if the name does not follow the convention.
bool parse_transcript_name(const std::string& filename, std::string& carrier, YearQuarter& yq);

} // namespace aircap
