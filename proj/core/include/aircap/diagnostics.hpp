#pragma once

#include <cstddef>
#include <vector>

#include "aircap/absorb.hpp"

namespace aircap {

struct TwfeWeights {
    std::vector<std::size_t> treated_rows;
    std::vector<double> weights;  // per treated row, normalized to mean 1
    double share_negative = 0.0;
};

// Residualize a binary treatment on the FE spec; weights over treated cells
// are proportional to the residuals, normalized to mean 1. Errors when no
// cell is treated or the treatment has no variation left after absorption.
TwfeWeights twfe_weights(const std::vector<double>& treatment, const FixedEffectSpec& fe,
                         const AbsorbOptions& opt = {});

}  // namespace aircap
