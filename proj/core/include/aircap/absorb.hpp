#pragma once

#include <cstdint>
#include <vector>

namespace aircap {

// Group-specific linear trend: within each group, project out span{1, t}.
struct TrendGroup {
    std::vector<std::int32_t> group;  // group code per row
    std::vector<double> time;         // trend regressor per row
};

// Fixed-effect layout: categorical dimensions (group demeaning) plus trend groups.
struct FixedEffectSpec {
    std::vector<std::vector<std::int32_t>> dims;
    std::vector<TrendGroup> trends;

    bool empty() const { return dims.empty() && trends.empty(); }
};

struct AbsorbOptions {
    double tol = 1e-8;   // max absolute per-entry change per sweep
    int max_iter = 10000;
};

struct AbsorbInfo {
    int iterations = 0;
    double final_change = 0.0;
};

// Project the given columns onto the orthogonal complement of the FE span,
// cycling over dimensions until the largest adjustment falls below tol.
// Throws NumericError on non-convergence.
AbsorbInfo absorb(const std::vector<std::vector<double>*>& columns,
                  const FixedEffectSpec& fe, const AbsorbOptions& opt = {});

}  // namespace aircap
