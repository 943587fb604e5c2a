#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aircap/calendar.hpp"
#include "aircap/data.hpp"

namespace aircap::net {

// Undirected unweighted airport graph for one carrier and period.
struct Graph {
    std::vector<std::string> nodes; // sorted, unique
    // Adjacency by node index; each edge appears in both lists.
    std::vector<std::vector<int>> adj;

    int index_of(const std::string& node) const; // -1 if absent
    void add_edge(const std::string& a, const std::string& b);
};

// Betweenness centrality per node: the average over unordered pairs of
// other nodes of the fraction of shortest paths passing through the node,
// scaled by 1/((N-1)(N-2)). Pairs with no connecting path contribute 0.
// Requires N >= 3.
std::vector<double> betweenness(const Graph& g);

std::vector<std::string> hubs(const Graph& g, const std::vector<double>& centrality,
                              double threshold = 0.1);

// Great-circle distance in statute miles (Earth radius 3958.7613 mi).
double haversine(double lat1, double lon1, double lat2, double lon2);

struct CarrierNetwork {
    std::string carrier;
    YearQuarter period;
    Graph graph;
    std::vector<double> centrality; // empty when N < 3
    std::vector<std::string> hub_airports;
};

// Builds one network per carrier-quarter from segment records. An edge is a
// segment the carrier served (>= min_monthly_flights in at least one month
// of the quarter). Centrality and hubs are filled when the graph has >= 3
// nodes.
std::vector<CarrierNetwork> build_networks(const std::vector<SegmentRecord>& segments,
                                           double hub_threshold = 0.1,
                                           std::int64_t min_monthly_flights = 4);

// Sum of the great-circle distances from each market endpoint to the
// carrier's nearest hub. Empty when the carrier has no hubs that period or
// an airport has no coordinates.
std::optional<double> hub_distance(const CarrierNetwork& net, const std::string& origin,
                                   const std::string& dest,
                                   const std::map<std::string, Coordinate>& coords);

} // namespace aircap::net
