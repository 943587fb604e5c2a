#include "aircap/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "aircap/errors.hpp"
#include "aircap/rng.hpp"

namespace aircap {

std::vector<std::size_t> bootstrap_draw(std::size_t n_clusters, std::uint64_t seed, int replicate) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(replicate)));
    std::vector<std::size_t> draw(n_clusters);
    for (auto& d : draw) d = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(n_clusters)));
    return draw;
}

BootstrapResult cluster_bootstrap(const std::vector<std::int32_t>& cluster,
                                  const ClusterEstimator& estimator, const BootstrapOptions& opt) {
    if (opt.replicates < 2) throw ConfigError("cluster_bootstrap: need at least 2 replicates");
    if (cluster.empty()) throw NumericError("cluster_bootstrap: empty sample");

    std::vector<std::int32_t> codes(cluster);
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
    const std::size_t C = codes.size();

    std::vector<std::vector<std::size_t>> rows_by_cluster(C);
    for (std::size_t i = 0; i < cluster.size(); ++i) {
        const auto it = std::lower_bound(codes.begin(), codes.end(), cluster[i]);
        rows_by_cluster[static_cast<std::size_t>(it - codes.begin())].push_back(i);
    }

    const int B = opt.replicates;
    std::vector<std::vector<double>> stats(B);
    std::vector<char> ok(B, 0);

    auto run_replicate = [&](int b) {
        const auto draw = bootstrap_draw(C, opt.seed, b);
        std::vector<std::size_t> rows;
        std::vector<std::int32_t> keys;
        for (std::size_t d = 0; d < draw.size(); ++d) {
            for (auto r : rows_by_cluster[draw[d]]) {
                rows.push_back(r);
                keys.push_back(static_cast<std::int32_t>(d));
            }
        }
        try {
            stats[b] = estimator(rows, keys);
            ok[b] = 1;
        } catch (const std::exception&) {
            ok[b] = 0;
        }
    };

    const int workers = std::max(1, opt.workers);
    if (workers == 1) {
        for (int b = 0; b < B; ++b) run_replicate(b);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int b = next.fetch_add(1); b < B; b = next.fetch_add(1)) run_replicate(b);
            });
        for (auto& t : pool) t.join();
    }

    BootstrapResult out;
    for (int b = 0; b < B; ++b) {
        if (ok[b])
            out.replicates.push_back(std::move(stats[b]));
        else
            ++out.n_failed;
    }
    const std::size_t kept = out.replicates.size();
    if (kept < 2) throw NumericError("cluster_bootstrap: fewer than 2 successful replicates");
    const std::size_t k = out.replicates.front().size();
    for (const auto& r : out.replicates)
        if (r.size() != k) throw NumericError("cluster_bootstrap: replicate dimension mismatch");

    out.se.assign(k, 0.0);
    std::vector<double> mean(k, 0.0);
    for (const auto& r : out.replicates)
        for (std::size_t j = 0; j < k; ++j) mean[j] += r[j];
    for (auto& m : mean) m /= static_cast<double>(kept);
    for (const auto& r : out.replicates)
        for (std::size_t j = 0; j < k; ++j) out.se[j] += (r[j] - mean[j]) * (r[j] - mean[j]);
    for (auto& s : out.se) s = std::sqrt(s / (static_cast<double>(kept) - 1.0));
    return out;
}

}  // namespace aircap
