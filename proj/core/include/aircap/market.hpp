#pragma once

#include <compare>
#include <string>

namespace aircap {

// A directional origin-destination pair. Codes are airports or, after city
// aggregation, city names; the struct does not care which.
struct Market {
    std::string origin;
    std::string dest;

    auto operator<=>(const Market&) const = default;

    std::string key() const { return origin + "-" + dest; }

    // Unordered pair key; both directions of a market share it, and it is
    // the clustering unit for standard errors.
    std::string cluster_key() const {
        return origin < dest ? origin + "|" + dest : dest + "|" + origin;
    }
};

} // namespace aircap
