#include "aircap/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>

#include "aircap/errors.hpp"

namespace aircap::net {

int Graph::index_of(const std::string& node) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
    if (it == nodes.end() || *it != node) return -1;
    return static_cast<int>(it - nodes.begin());
}

void Graph::add_edge(const std::string& a, const std::string& b) {
    const int ia = index_of(a), ib = index_of(b);
    if (ia < 0 || ib < 0) throw NumericError("edge endpoint not in node set");
    if (ia == ib) return;
    if (std::find(adj[ia].begin(), adj[ia].end(), ib) != adj[ia].end()) return;
    adj[ia].push_back(ib);
    adj[ib].push_back(ia);
}

std::vector<double> betweenness(const Graph& g) {
    const int n = static_cast<int>(g.nodes.size());
    if (n < 3) throw NumericError("betweenness requires at least 3 nodes");
    std::vector<double> accum(n, 0.0);

    // Brandes accumulation: one BFS per source; sigma holds exact integer
    // shortest-path counts. Summing delta over all sources counts each
    // unordered pair twice, hence the final division by 2.
    std::vector<std::int64_t> sigma(n);
    std::vector<int> dist(n);
    std::vector<std::vector<int>> pred(n);
    std::vector<int> order;
    order.reserve(n);
    std::vector<double> delta(n);

    for (int s = 0; s < n; ++s) {
        std::fill(sigma.begin(), sigma.end(), 0);
        std::fill(dist.begin(), dist.end(), -1);
        for (auto& p : pred) p.clear();
        order.clear();

        sigma[s] = 1;
        dist[s] = 0;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            order.push_back(v);
            for (int w : g.adj[v]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    pred[w].push_back(v);
                }
            }
        }

        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const int w = *it;
            for (int v : pred[w]) {
                delta[v] += static_cast<double>(sigma[v]) / static_cast<double>(sigma[w]) *
                            (1.0 + delta[w]);
            }
            if (w != s) accum[w] += delta[w];
        }
    }

    const double scale = 1.0 / (2.0 * static_cast<double>(n - 1) * static_cast<double>(n - 2));
    for (double& b : accum) b *= scale;
    return accum;
}

std::vector<std::string> hubs(const Graph& g, const std::vector<double>& centrality,
                              double threshold) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        if (centrality[i] >= threshold) out.push_back(g.nodes[i]);
    }
    return out;
}

double haversine(double lat1, double lon1, double lat2, double lon2) {
    constexpr double kEarthRadiusMiles = 3958.7613;
    constexpr double kDegToRad = 0.017453292519943295;
    const double phi1 = lat1 * kDegToRad, phi2 = lat2 * kDegToRad;
    const double dphi = (lat2 - lat1) * kDegToRad;
    const double dlam = (lon2 - lon1) * kDegToRad;
    const double a = std::sin(dphi / 2) * std::sin(dphi / 2) +
                     std::cos(phi1) * std::cos(phi2) * std::sin(dlam / 2) * std::sin(dlam / 2);
    return 2.0 * kEarthRadiusMiles * std::asin(std::min(1.0, std::sqrt(a)));
}

std::vector<CarrierNetwork> build_networks(const std::vector<SegmentRecord>& segments,
                                           double hub_threshold,
                                           std::int64_t min_monthly_flights) {
    // Collect served edges per carrier-quarter.
    std::map<std::pair<std::string, YearQuarter>, std::set<std::pair<std::string, std::string>>>
        edges;
    for (const auto& s : segments) {
        if (s.flights < min_monthly_flights) continue;
        auto key = std::make_pair(s.carrier, s.ym.quarter());
        auto edge = s.origin < s.dest ? std::make_pair(s.origin, s.dest)
                                      : std::make_pair(s.dest, s.origin);
        edges[key].insert(std::move(edge));
    }

    std::vector<CarrierNetwork> out;
    out.reserve(edges.size());
    for (const auto& [key, edge_set] : edges) {
        CarrierNetwork net;
        net.carrier = key.first;
        net.period = key.second;
        std::set<std::string> nodes;
        for (const auto& [a, b] : edge_set) {
            nodes.insert(a);
            nodes.insert(b);
        }
        net.graph.nodes.assign(nodes.begin(), nodes.end());
        net.graph.adj.assign(net.graph.nodes.size(), {});
        for (const auto& [a, b] : edge_set) net.graph.add_edge(a, b);
        if (net.graph.nodes.size() >= 3) {
            net.centrality = betweenness(net.graph);
            net.hub_airports = hubs(net.graph, net.centrality, hub_threshold);
        }
        out.push_back(std::move(net));
    }
    return out;
}

std::optional<double> hub_distance(const CarrierNetwork& net, const std::string& origin,
                                   const std::string& dest,
                                   const std::map<std::string, Coordinate>& coords) {
    if (net.hub_airports.empty()) return std::nullopt;
    const auto o = coords.find(origin);
    const auto d = coords.find(dest);
    if (o == coords.end() || d == coords.end()) return std::nullopt;

    double nearest_o = std::numeric_limits<double>::infinity();
    double nearest_d = std::numeric_limits<double>::infinity();
    for (const auto& hub : net.hub_airports) {
        const auto h = coords.find(hub);
        if (h == coords.end()) continue;
        nearest_o = std::min(nearest_o,
                             haversine(o->second.lat, o->second.lon, h->second.lat, h->second.lon));
        nearest_d = std::min(nearest_d,
                             haversine(d->second.lat, d->second.lon, h->second.lat, h->second.lon));
    }
    if (!std::isfinite(nearest_o) || !std::isfinite(nearest_d)) return std::nullopt;
    return nearest_o + nearest_d;
}

} // namespace aircap::net
