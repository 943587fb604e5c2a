#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace aircap {

struct BootstrapOptions {
    int replicates = 200;
    std::uint64_t seed = 1;
    int workers = 1;
};

struct BootstrapResult {
    std::vector<double> se;  // std-dev across successful replicates
    std::vector<std::vector<double>> replicates;  // kept, in replicate order
    std::size_t n_failed = 0;
};

// Estimator over a resampled panel: `rows` lists the selected row indices
// (cluster by cluster, duplicated clusters repeated) and `cluster` carries the
// re-keyed cluster code per selected row.
using ClusterEstimator = std::function<std::vector<double>(
    const std::vector<std::size_t>& rows, const std::vector<std::int32_t>& cluster)>;

// Cluster draw for one replicate: n_clusters indices into the sorted-unique
// cluster list, sampled with replacement; deterministic in (seed, replicate).
std::vector<std::size_t> bootstrap_draw(std::size_t n_clusters, std::uint64_t seed, int replicate);

// Resample clusters with replacement B times and report the standard
// deviation of the replicate estimates. Replicates where the estimator
// throws are dropped and counted.
BootstrapResult cluster_bootstrap(const std::vector<std::int32_t>& cluster,
                                  const ClusterEstimator& estimator,
                                  const BootstrapOptions& opt = {});

}  // namespace aircap
