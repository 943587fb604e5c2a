#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aircap/calendar.hpp"
#include "aircap/data.hpp"

namespace aircap::metrics {

// Average square-root circular time gap between scheduled departures:
// (2/(n-1)) * sum_{i<j} sqrt(min(|d_i-d_j|, 1440-|d_i-d_j|)).
// Departures are minutes after midnight in [0,1440). Undefined for n < 2.
std::optional<double> average_time_difference(const std::vector<double>& departures);

// Ratio of the schedule's average time difference to that of n equally
// spaced departures; 1 means least crowded. Undefined for n < 2.
std::optional<double> normalized_crowding(const std::vector<double>& departures);

enum class RouteRule {
    AllSegments, // indicator holds on every segment (min)
    AnySegment,  // indicator holds on at least one segment (max)
};

double route_indicator(const std::vector<double>& segment_values, RouteRule rule);

// Passenger share weighted average of per-route values.
double passenger_weighted(const std::vector<double>& values,
                          const std::vector<double>& passengers);

struct RoutePrice {
    std::string carrier;
    std::string origin;
    std::string dest;
    std::string route; // hyphen-joined airport chain
    YearQuarter yq;
    double passengers = 0.0;
    double avg_fare = 0.0;
};

// Collapses fare records to one row per carrier-market-route-quarter with a
// passenger-weighted mean fare. Input rows may repeat a key.
std::vector<RoutePrice> aggregate_fares(const std::vector<FareRecord>& records);

// Splits a hyphen-joined route string into consecutive origin-dest segments.
std::vector<std::pair<std::string, std::string>> route_segments(const std::string& route);

} // namespace aircap::metrics
