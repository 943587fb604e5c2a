#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is written directly from the defining formulas with dense
// linear algebra and exhaustive enumeration; none of it shares code with the
// estimators under test.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "aircap/network.hpp"
#include "aircap/panel.hpp"

namespace oracle {

// Categorical layout mirroring FixedEffectSpec, consumed as explicit dummies.
struct DummySpec {
    std::vector<std::vector<std::int32_t>> dims;
    // Trend groups: per group code one intercept dummy and one dummy*time column.
    std::vector<std::vector<std::int32_t>> trend_groups;
    std::vector<std::vector<double>> trend_times;
};

// OLS of y on [X, dummies] solved by a rank-revealing decomposition; returns
// the X block of the coefficient vector (unique whenever X is full rank
// modulo the dummy span, even though the dummy block itself is not).
Eigen::VectorXd ols_with_dummies(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                 const DummySpec& spec);

// Cluster-robust OLS assembled term by term from the sandwich formula
// (X'X)^-1 (sum_c X_c' e_c e_c' X_c) (X'X)^-1 with the finite-sample factor
// [C/(C-1)] [(n-1)/(n-K)]. No absorption, no rank handling: the caller
// supplies a full-rank design.
struct DirectOls {
    Eigen::VectorXd beta;
    Eigen::MatrixXd vcov;
};
DirectOls clustered_ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                        const std::vector<std::int32_t>& cluster);

// Demean y and the columns of x within groups (one categorical dimension).
void demean_by_group(Eigen::VectorXd& y, Eigen::MatrixXd& x,
                     const std::vector<std::int32_t>& group);

// Full-dummy Poisson MLE: y on [X, one dummy per group], Newton iterations on
// the joint likelihood. Returns the X block. Every group must have a positive
// outcome total.
Eigen::VectorXd poisson_full_mle(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                 const std::vector<std::int32_t>& group,
                                 int max_iter = 200, double tol = 1e-12);

// Betweenness by exhaustive shortest-path enumeration: for every unordered
// pair of distinct nodes, list all shortest paths and count the fraction
// through each interior node; scale by 1/((N-1)(N-2)).
std::vector<double> betweenness_enumerated(const aircap::net::Graph& g);

// Market-month indicators evaluated directly from their set-builder
// definitions over explicit carrier sets.
struct IndicatorSet {
    int capacity_discipline = 0;
    int talk_eligible = 0;
    int monopoly = 0;
    int missing_report = 0;
    int capdis_n1 = 0;
    std::array<int, 4> capdis_k{};  // k = 2,3,4,5
    int only_j_talks = 0;
    int capdis_not_j = 0;
    int monopoly_capdis = 0;
};
IndicatorSet indicators_direct(const aircap::MarketMonthContext& ctx, const std::string& j);

}  // namespace oracle
