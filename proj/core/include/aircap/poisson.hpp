#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aircap/regress.hpp"

namespace aircap {

struct PoissonOptions {
    double grad_tol = 1e-8;  // L2 norm of the concentrated score
    int max_iter = 200;
    double rank_tol = 1e-9;
};

struct PoissonFEResult {
    std::vector<std::string> names;  // retained regressors
    std::vector<double> beta;
    std::vector<double> se;
    Eigen::MatrixXd vcov;  // group-clustered sandwich
    std::vector<std::string> dropped;  // no within-group variation / collinear
    std::vector<std::pair<std::int32_t, double>> group_effects;  // group code -> gamma
    double loglik = 0.0;
    int iterations = 0;
    std::size_t n_obs = 0;     // rows entering the likelihood
    std::size_t n_groups = 0;  // groups entering the likelihood
    std::size_t n_groups_dropped = 0;  // all-zero-outcome groups

    std::optional<std::size_t> index_of(const std::string& name) const;
    double coef(const std::string& name) const;
};

// Poisson fixed-effects estimator: group effects concentrated out as
// gamma_g = log(sum_t y / sum_t exp(x'beta)); Newton iterations on the
// concentrated likelihood until the score norm falls below grad_tol.
// Time dummies, if wanted, are passed as ordinary regressors.
PoissonFEResult poisson_fe(const std::vector<double>& counts,
                           const std::vector<Regressor>& regressors,
                           const std::vector<std::int32_t>& group,
                           const PoissonOptions& opt = {});

}  // namespace aircap
