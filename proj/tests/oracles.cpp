#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace oracle {

namespace {

// Dense dummy columns for one categorical dimension, one column per distinct code.
Eigen::MatrixXd dummy_columns(const std::vector<std::int32_t>& codes) {
    std::map<std::int32_t, int> col;
    for (auto c : codes) col.emplace(c, 0);
    int next = 0;
    for (auto& [c, idx] : col) idx = next++;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(codes.size()), next);
    for (Eigen::Index i = 0; i < d.rows(); ++i) d(i, col.at(codes[static_cast<std::size_t>(i)])) = 1.0;
    return d;
}

}  // namespace

Eigen::VectorXd ols_with_dummies(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                 const DummySpec& spec) {
    std::vector<Eigen::MatrixXd> blocks;
    blocks.push_back(x);
    for (const auto& dim : spec.dims) blocks.push_back(dummy_columns(dim));
    for (std::size_t g = 0; g < spec.trend_groups.size(); ++g) {
        Eigen::MatrixXd d = dummy_columns(spec.trend_groups[g]);
        Eigen::MatrixXd dt = d;
        for (Eigen::Index i = 0; i < dt.rows(); ++i)
            dt.row(i) *= spec.trend_times[g][static_cast<std::size_t>(i)];
        blocks.push_back(d);
        blocks.push_back(dt);
    }
    Eigen::Index cols = 0;
    for (const auto& b : blocks) cols += b.cols();
    Eigen::MatrixXd z(y.size(), cols);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        z.middleCols(at, b.cols()) = b;
        at += b.cols();
    }
    // Minimum-norm least squares; the dummy block is rank deficient but its
    // null space has zero X components, so the X block is the OLS solution.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(z);
    const Eigen::VectorXd full = cod.solve(y);
    return full.head(x.cols());
}

DirectOls clustered_ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                        const std::vector<std::int32_t>& cluster) {
    const auto n = static_cast<double>(y.size());
    const auto k = static_cast<double>(x.cols());
    const Eigen::MatrixXd xtx_inv = (x.transpose() * x).inverse();
    DirectOls out;
    out.beta = xtx_inv * (x.transpose() * y);
    const Eigen::VectorXd e = y - x * out.beta;

    std::map<std::int32_t, Eigen::VectorXd> score;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        auto [it, fresh] = score.try_emplace(cluster[static_cast<std::size_t>(i)],
                                             Eigen::VectorXd::Zero(x.cols()));
        it->second += x.row(i).transpose() * e(i);
        (void)fresh;
    }
    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(x.cols(), x.cols());
    for (const auto& [c, s] : score) meat += s * s.transpose();
    const auto cc = static_cast<double>(score.size());
    const double factor = (cc / (cc - 1.0)) * ((n - 1.0) / (n - k));
    out.vcov = factor * xtx_inv * meat * xtx_inv;
    return out;
}

void demean_by_group(Eigen::VectorXd& y, Eigen::MatrixXd& x,
                     const std::vector<std::int32_t>& group) {
    std::map<std::int32_t, std::vector<Eigen::Index>> members;
    for (Eigen::Index i = 0; i < y.size(); ++i) members[group[static_cast<std::size_t>(i)]].push_back(i);
    for (const auto& [g, rows] : members) {
        double ym = 0.0;
        Eigen::RowVectorXd xm = Eigen::RowVectorXd::Zero(x.cols());
        for (auto i : rows) {
            ym += y(i);
            xm += x.row(i);
        }
        ym /= static_cast<double>(rows.size());
        xm /= static_cast<double>(rows.size());
        for (auto i : rows) {
            y(i) -= ym;
            x.row(i) -= xm;
        }
    }
}

Eigen::VectorXd poisson_full_mle(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                 const std::vector<std::int32_t>& group, int max_iter,
                                 double tol) {
    const Eigen::MatrixXd d = dummy_columns(group);
    Eigen::MatrixXd z(y.size(), x.cols() + d.cols());
    z << x, d;

    // Start at beta = 0, gamma_g = log of the group mean.
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(z.cols());
    const Eigen::VectorXd n_g = d.transpose() * Eigen::VectorXd::Ones(y.size());
    const Eigen::VectorXd y_g = d.transpose() * y;
    for (Eigen::Index g = 0; g < d.cols(); ++g) {
        if (y_g(g) <= 0.0) throw std::runtime_error("poisson_full_mle: group with zero total");
        theta(x.cols() + g) = std::log(y_g(g) / n_g(g));
    }

    for (int it = 0; it < max_iter; ++it) {
        const Eigen::VectorXd mu = (z * theta).array().exp();
        const Eigen::VectorXd score = z.transpose() * (y - mu);
        if (score.norm() < tol) return theta.head(x.cols());
        const Eigen::MatrixXd hess = z.transpose() * mu.asDiagonal() * z;
        // One dummy per group plus no intercept keeps the Hessian full rank.
        theta += hess.ldlt().solve(score);
    }
    throw std::runtime_error("poisson_full_mle: no convergence");
}

namespace {

// All shortest paths from s to t, via DFS over the BFS distance layers.
void enumerate_paths(const aircap::net::Graph& g, const std::vector<int>& dist, int node, int s,
                     std::vector<int>& path, std::vector<std::vector<int>>& out) {
    if (node == s) {
        out.push_back(path);
        return;
    }
    for (int nb : g.adj[static_cast<std::size_t>(node)]) {
        if (dist[static_cast<std::size_t>(nb)] == dist[static_cast<std::size_t>(node)] - 1) {
            path.push_back(nb);
            enumerate_paths(g, dist, nb, s, path, out);
            path.pop_back();
        }
    }
}

}  // namespace

std::vector<double> betweenness_enumerated(const aircap::net::Graph& g) {
    const int n = static_cast<int>(g.nodes.size());
    std::vector<double> b(static_cast<std::size_t>(n), 0.0);
    if (n < 3) return b;

    for (int s = 0; s < n; ++s) {
        std::vector<int> dist(static_cast<std::size_t>(n), -1);
        std::queue<int> q;
        dist[static_cast<std::size_t>(s)] = 0;
        q.push(s);
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int v : g.adj[static_cast<std::size_t>(u)]) {
                if (dist[static_cast<std::size_t>(v)] < 0) {
                    dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                    q.push(v);
                }
            }
        }
        for (int t = s + 1; t < n; ++t) {
            if (dist[static_cast<std::size_t>(t)] <= 0) continue;  // unreachable or s itself
            std::vector<std::vector<int>> paths;
            std::vector<int> path{t};
            enumerate_paths(g, dist, t, s, path, paths);
            if (paths.empty()) continue;
            std::vector<int> through(static_cast<std::size_t>(n), 0);
            for (const auto& p : paths)
                for (std::size_t i = 1; i + 1 < p.size(); ++i)
                    ++through[static_cast<std::size_t>(p[i])];
            for (int v = 0; v < n; ++v) {
                if (v == s || v == t) continue;
                b[static_cast<std::size_t>(v)] += static_cast<double>(through[static_cast<std::size_t>(v)]) /
                                                  static_cast<double>(paths.size());
            }
        }
    }
    const double scale = 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
    for (auto& v : b) v *= scale;
    return b;
}

IndicatorSet indicators_direct(const aircap::MarketMonthContext& ctx, const std::string& j) {
    using aircap::CarrierClass;
    std::set<std::string> legacies, talking, missing;
    std::set<std::string> all;
    for (const auto& c : ctx.carriers) {
        all.insert(c.code);
        if (c.klass != CarrierClass::Legacy) continue;
        legacies.insert(c.code);
        if (c.collected && c.flag == 1) talking.insert(c.code);
        if (!c.collected) missing.insert(c.code);
    }

    IndicatorSet out;
    out.talk_eligible = legacies.size() >= 2 ? 1 : 0;
    out.capacity_discipline = legacies.size() >= 2 && talking == legacies ? 1 : 0;
    out.monopoly = all.size() == 1 ? 1 : 0;
    out.missing_report = missing.empty() ? 0 : 1;
    out.capdis_n1 = legacies.size() >= 2 && talking.size() + 1 == legacies.size() ? 1 : 0;
    for (std::size_t k = 2; k <= 5; ++k)
        out.capdis_k[k - 2] = legacies.size() == k && talking == legacies ? 1 : 0;

    const bool j_talks = talking.count(j) > 0;
    if (legacies.count(j) && legacies.size() >= 2) {
        out.only_j_talks = j_talks && talking.size() == 1 ? 1 : 0;
        std::set<std::string> others = legacies;
        others.erase(j);
        out.capdis_not_j = !j_talks && talking == others ? 1 : 0;
    }
    bool j_flag = false;
    for (const auto& c : ctx.carriers)
        if (c.code == j && c.collected && c.flag == 1) j_flag = true;
    out.monopoly_capdis = all.size() == 1 && all.count(j) && j_flag ? 1 : 0;
    return out;
}

}  // namespace oracle
