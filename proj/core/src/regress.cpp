#include "aircap/regress.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "aircap/errors.hpp"

namespace aircap {

std::optional<std::size_t> RegressionResult::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    return std::nullopt;
}

double RegressionResult::coef(const std::string& name) const {
    auto i = index_of(name);
    if (!i) throw NumericError("no coefficient named " + name);
    return beta[*i];
}

double RegressionResult::stderr_of(const std::string& name) const {
    auto i = index_of(name);
    if (!i) throw NumericError("no coefficient named " + name);
    return se[*i];
}

double semi_elasticity(double beta) { return 100.0 * std::expm1(beta); }

RegressionResult estimate_fe(const std::vector<double>& outcome,
                             const std::vector<Regressor>& regressors,
                             const FixedEffectSpec& fe,
                             const std::vector<std::int32_t>& cluster,
                             const RegressionOptions& opt) {
    const std::size_t n = outcome.size();
    if (n == 0) throw NumericError("estimate_fe: empty sample");
    if (cluster.size() != n) throw NumericError("estimate_fe: cluster key length mismatch");
    for (const auto& r : regressors)
        if (r.values.size() != n)
            throw NumericError("estimate_fe: regressor " + r.name + " length mismatch");
    if (regressors.empty()) throw NumericError("estimate_fe: no regressors");

    std::vector<double> y = outcome;
    std::vector<std::vector<double>> x;
    x.reserve(regressors.size());
    for (const auto& r : regressors) x.push_back(r.values);

    std::vector<std::vector<double>*> cols{&y};
    for (auto& c : x) cols.push_back(&c);
    const AbsorbInfo ainfo = absorb(cols, fe, opt.absorb);

    const std::size_t k_in = regressors.size();
    Eigen::MatrixXd X(n, k_in);
    Eigen::VectorXd Y(n);
    for (std::size_t i = 0; i < n; ++i) Y(i) = y[i];
    for (std::size_t j = 0; j < k_in; ++j)
        for (std::size_t i = 0; i < n; ++i) X(i, j) = x[j][i];

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(opt.rank_tol);
    const auto rank = static_cast<std::size_t>(qr.rank());

    RegressionResult res;
    res.absorb_iterations = ainfo.iterations;
    res.n_obs = n;

    std::vector<std::size_t> keep;
    if (rank == k_in) {
        keep.resize(k_in);
        for (std::size_t j = 0; j < k_in; ++j) keep[j] = j;
    } else {
        const auto& perm = qr.colsPermutation().indices();
        keep.assign(perm.data(), perm.data() + rank);
        std::sort(keep.begin(), keep.end());
        std::vector<bool> kept(k_in, false);
        for (auto j : keep) kept[j] = true;
        for (std::size_t j = 0; j < k_in; ++j)
            if (!kept[j]) res.dropped_collinear.push_back(regressors[j].name);
    }
    const std::size_t k = keep.size();
    if (k >= n) throw NumericError("estimate_fe: more regressors than observations");

    Eigen::MatrixXd Xr(n, k);
    for (std::size_t j = 0; j < k; ++j) Xr.col(j) = X.col(keep[j]);

    const Eigen::MatrixXd xtx = Xr.transpose() * Xr;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
    if (ldlt.info() != Eigen::Success)
        throw NumericError("estimate_fe: normal equations not solvable");
    const Eigen::VectorXd beta = ldlt.solve(Xr.transpose() * Y);
    const Eigen::VectorXd resid = Y - Xr * beta;
    const Eigen::MatrixXd bread = ldlt.solve(Eigen::MatrixXd::Identity(k, k));

    std::unordered_map<std::int32_t, Eigen::VectorXd> scores;
    for (std::size_t i = 0; i < n; ++i) {
        auto [it, fresh] = scores.try_emplace(cluster[i], Eigen::VectorXd::Zero(k));
        it->second += Xr.row(i).transpose() * resid(i);
        (void)fresh;
    }
    const std::size_t C = scores.size();
    if (C < 2) throw NumericError("estimate_fe: at least two clusters required");

    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
    for (const auto& [code, s] : scores) meat += s * s.transpose();
    const double factor = (static_cast<double>(C) / (C - 1.0)) *
                          ((static_cast<double>(n) - 1.0) / (static_cast<double>(n) - k));
    res.vcov = factor * bread * meat * bread;
    res.vcov = 0.5 * (res.vcov + res.vcov.transpose().eval());

    res.n_clusters = C;
    res.names.reserve(k);
    res.beta.resize(k);
    res.se.resize(k);
    res.semi_elasticity.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        const auto& reg = regressors[keep[j]];
        res.names.push_back(reg.name);
        res.beta[j] = beta(j);
        res.se[j] = std::sqrt(std::max(res.vcov(j, j), 0.0));
        if (reg.binary) res.semi_elasticity[j] = semi_elasticity(beta(j));
    }

    const double ymean = Y.mean();
    double sst = 0.0;
    for (std::size_t i = 0; i < n; ++i) sst += (Y(i) - ymean) * (Y(i) - ymean);
    const double sse = resid.squaredNorm();
    res.r2_within = sst > 0.0 ? 1.0 - sse / sst : 0.0;
    res.residuals.assign(resid.data(), resid.data() + n);
    return res;
}

double wald_f(const RegressionResult& res, const std::vector<std::string>& names) {
    if (names.empty()) throw NumericError("wald_f: empty coefficient set");
    std::vector<std::size_t> idx;
    for (const auto& name : names) {
        auto i = res.index_of(name);
        if (!i) throw NumericError("wald_f: coefficient " + name + " not in the fitted model");
        idx.push_back(*i);
    }
    const std::size_t q = idx.size();
    Eigen::VectorXd b(q);
    Eigen::MatrixXd V(q, q);
    for (std::size_t a = 0; a < q; ++a) {
        b(a) = res.beta[idx[a]];
        for (std::size_t c = 0; c < q; ++c) V(a, c) = res.vcov(idx[a], idx[c]);
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(V);
    const Eigen::VectorXd x = ldlt.solve(b);
    if (!x.allFinite() || (V * x - b).norm() > 1e-6 * (b.norm() + 1e-300))
        throw NumericError("wald_f: singular covariance block");
    return b.dot(x) / static_cast<double>(q);
}

}  // namespace aircap
