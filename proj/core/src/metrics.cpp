#include "aircap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "aircap/errors.hpp"

namespace aircap::metrics {

namespace {

double circular_gap(double a, double b) {
    const double d = std::fabs(a - b);
    return std::min(d, 1440.0 - d);
}

} // namespace

std::optional<double> average_time_difference(const std::vector<double>& departures) {
    const std::size_t n = departures.size();
    if (n < 2) return std::nullopt;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            sum += std::sqrt(circular_gap(departures[i], departures[j]));
        }
    }
    return 2.0 * sum / static_cast<double>(n - 1);
}

std::optional<double> normalized_crowding(const std::vector<double>& departures) {
    const std::size_t n = departures.size();
    if (n < 2) return std::nullopt;
    std::vector<double> equal(n);
    for (std::size_t i = 0; i < n; ++i) {
        equal[i] = static_cast<double>(i) * 1440.0 / static_cast<double>(n);
    }
    const double value = *average_time_difference(departures);
    const double best = *average_time_difference(equal);
    return value / best;
}

double route_indicator(const std::vector<double>& segment_values, RouteRule rule) {
    if (segment_values.empty()) throw NumericError("route_indicator needs at least one segment");
    if (rule == RouteRule::AllSegments) {
        return *std::min_element(segment_values.begin(), segment_values.end());
    }
    return *std::max_element(segment_values.begin(), segment_values.end());
}

double passenger_weighted(const std::vector<double>& values,
                          const std::vector<double>& passengers) {
    if (values.size() != passengers.size() || values.empty()) {
        throw NumericError("passenger_weighted: mismatched or empty inputs");
    }
    double total = 0.0, weighted = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        total += passengers[i];
        weighted += values[i] * passengers[i];
    }
    if (total <= 0.0) throw NumericError("passenger_weighted: zero total passengers");
    return weighted / total;
}

std::vector<RoutePrice> aggregate_fares(const std::vector<FareRecord>& records) {
    struct Acc {
        double pax = 0.0;
        double fare_pax = 0.0;
    };
    std::map<std::tuple<std::string, std::string, std::string, std::string, YearQuarter>, Acc> acc;
    for (const auto& r : records) {
        auto& a = acc[{r.carrier, r.origin, r.dest, r.route, r.yq}];
        a.pax += r.passengers;
        a.fare_pax += r.avg_fare * r.passengers;
    }
    std::vector<RoutePrice> out;
    out.reserve(acc.size());
    for (const auto& [key, a] : acc) {
        RoutePrice p;
        p.carrier = std::get<0>(key);
        p.origin = std::get<1>(key);
        p.dest = std::get<2>(key);
        p.route = std::get<3>(key);
        p.yq = std::get<4>(key);
        p.passengers = a.pax;
        p.avg_fare = a.fare_pax / a.pax;
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> route_segments(const std::string& route) {
    std::vector<std::string> stops;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = route.find('-', start);
        if (pos == std::string::npos) {
            stops.push_back(route.substr(start));
            break;
        }
        stops.push_back(route.substr(start, pos - start));
        start = pos + 1;
    }
    if (stops.size() < 2) throw SchemaError("route '" + route + "' must list at least two airports");
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(stops.size() - 1);
    for (std::size_t i = 0; i + 1 < stops.size(); ++i) {
        out.emplace_back(stops[i], stops[i + 1]);
    }
    return out;
}

} // namespace aircap::metrics
