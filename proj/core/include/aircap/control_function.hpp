#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aircap/bootstrap.hpp"
#include "aircap/regress.hpp"

namespace aircap {

// Two linked tables sharing one cluster code space (the bi-directional
// market): a market-month first stage and a carrier-market-month second
// stage. row_to_first_stage maps each second-stage row to its market-month.
struct ControlFunctionData {
    // First stage: endogenous regressor on instruments + controls + FE.
    std::vector<double> endogenous;
    std::vector<Regressor> instruments;
    std::vector<Regressor> controls;
    FixedEffectSpec first_stage_fe;
    std::vector<std::int32_t> first_stage_cluster;

    // Second stage: outcome on regressors + first-stage residual + FE.
    std::vector<double> outcome;
    std::vector<Regressor> regressors;
    FixedEffectSpec second_stage_fe;
    std::vector<std::int32_t> cluster;
    std::vector<std::size_t> row_to_first_stage;
};

struct ControlFunctionOptions {
    BootstrapOptions bootstrap;  // replicates = 0 skips the bootstrap stage
    RegressionOptions regression;
    std::string residual_name = "FirstStageResidual";
};

struct ControlFunctionResult {
    RegressionResult first_stage;
    double first_stage_f = 0.0;  // Wald F on the instrument block
    std::vector<double> residuals;  // per first-stage row
    RegressionResult second_stage;  // includes the residual regressor
    std::vector<double> bootstrap_se;  // aligned with second_stage.names
    std::size_t bootstrap_failed = 0;
};

// Control-function estimator: first stage at market-month level, residuals
// joined onto the carrier panel, second stage re-estimated with the residual
// as an extra covariate. Both stages are re-run inside every bootstrap
// replicate; clusters are resampled jointly across the two tables.
ControlFunctionResult control_function(const ControlFunctionData& data,
                                       const ControlFunctionOptions& opt = {});

}  // namespace aircap
