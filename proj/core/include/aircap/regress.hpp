#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aircap/absorb.hpp"

namespace aircap {

struct Regressor {
    std::string name;
    std::vector<double> values;
    bool binary = false;  // semi-elasticity reported for binary regressors
};

struct RegressionOptions {
    AbsorbOptions absorb;
    double rank_tol = 1e-9;  // pivoted-QR relative threshold for collinearity
};

struct RegressionResult {
    std::vector<std::string> names;  // retained regressors, input order
    std::vector<double> beta;
    std::vector<double> se;
    Eigen::MatrixXd vcov;  // cluster-robust
    std::vector<std::optional<double>> semi_elasticity;  // binary regressors only
    std::vector<std::string> dropped_collinear;
    std::vector<double> residuals;
    std::size_t n_obs = 0;
    std::size_t n_clusters = 0;
    double r2_within = 0.0;
    int absorb_iterations = 0;

    std::optional<std::size_t> index_of(const std::string& name) const;
    double coef(const std::string& name) const;     // throws if absent
    double stderr_of(const std::string& name) const;  // throws if absent
};

// Percentage effect of a unit dummy on a log outcome.
double semi_elasticity(double beta);

// Within estimator: absorb fe from outcome and regressors, OLS on the
// residualized data, sandwich covariance clustered on `cluster` with
// finite-sample factor [C/(C-1)]*[(n-1)/(n-K)].
RegressionResult estimate_fe(const std::vector<double>& outcome,
                             const std::vector<Regressor>& regressors,
                             const FixedEffectSpec& fe,
                             const std::vector<std::int32_t>& cluster,
                             const RegressionOptions& opt = {});

// Wald F statistic for the joint null that the named coefficients are zero.
double wald_f(const RegressionResult& res, const std::vector<std::string>& names);

}  // namespace aircap
