#include "aircap/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "aircap/errors.hpp"

namespace aircap {

std::optional<std::size_t> PoissonFEResult::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    return std::nullopt;
}

double PoissonFEResult::coef(const std::string& name) const {
    auto i = index_of(name);
    if (!i) throw NumericError("no coefficient named " + name);
    return beta[*i];
}

namespace {

struct Concentrated {
    double loglik = 0.0;  // sum y*eta - sum_g Y_g * logsumexp_g(eta)
    Eigen::VectorXd grad;
    Eigen::MatrixXd neg_hess;
    std::vector<double> log_denom;  // logsumexp of eta per group
    std::vector<double> mu;         // fitted means per row
};

Concentrated evaluate(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const std::vector<std::int32_t>& g, std::size_t n_groups,
                      const std::vector<double>& group_total, const Eigen::VectorXd& beta,
                      bool with_derivs) {
    const auto n = static_cast<std::size_t>(X.rows());
    const auto k = static_cast<std::size_t>(X.cols());
    Concentrated out;
    const Eigen::VectorXd eta = X * beta;

    std::vector<double> mx(n_groups, -1e300);
    for (std::size_t i = 0; i < n; ++i) mx[g[i]] = std::max(mx[g[i]], eta(i));
    std::vector<double> s(n_groups, 0.0);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = std::exp(eta(i) - mx[g[i]]);
        s[g[i]] += w[i];
    }
    out.log_denom.resize(n_groups);
    for (std::size_t gg = 0; gg < n_groups; ++gg) out.log_denom[gg] = mx[gg] + std::log(s[gg]);

    out.loglik = 0.0;
    out.mu.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.loglik += y(i) * eta(i);
        out.mu[i] = group_total[g[i]] * w[i] / s[g[i]];
    }
    for (std::size_t gg = 0; gg < n_groups; ++gg) out.loglik -= group_total[gg] * out.log_denom[gg];

    if (with_derivs) {
        out.grad = Eigen::VectorXd::Zero(k);
        out.neg_hess = Eigen::MatrixXd::Zero(k, k);
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, n_groups);  // sum_i mu_i x_i per group
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::VectorXd xi = X.row(i).transpose();
            out.grad += (y(i) - out.mu[i]) * xi;
            out.neg_hess += out.mu[i] * xi * xi.transpose();
            m.col(g[i]) += out.mu[i] * xi;
        }
        for (std::size_t gg = 0; gg < n_groups; ++gg)
            if (group_total[gg] > 0.0)
                out.neg_hess -= m.col(gg) * m.col(gg).transpose() / group_total[gg];
    }
    return out;
}

}  // namespace

PoissonFEResult poisson_fe(const std::vector<double>& counts,
                           const std::vector<Regressor>& regressors,
                           const std::vector<std::int32_t>& group, const PoissonOptions& opt) {
    const std::size_t n_all = counts.size();
    if (n_all == 0) throw NumericError("poisson_fe: empty sample");
    if (group.size() != n_all) throw NumericError("poisson_fe: group key length mismatch");
    for (const auto& r : regressors)
        if (r.values.size() != n_all)
            throw NumericError("poisson_fe: regressor " + r.name + " length mismatch");
    for (double c : counts)
        if (c < 0.0 || !std::isfinite(c)) throw NumericError("poisson_fe: negative count");

    // Group totals over the full sample; all-zero groups carry no information.
    std::map<std::int32_t, double> totals;
    for (std::size_t i = 0; i < n_all; ++i) totals[group[i]] += counts[i];
    std::map<std::int32_t, std::int32_t> dense;
    std::size_t n_dropped = 0;
    for (const auto& [code, tot] : totals) {
        if (tot > 0.0)
            dense.emplace(code, static_cast<std::int32_t>(dense.size()));
        else
            ++n_dropped;
    }
    if (dense.empty()) throw NumericError("poisson_fe: all groups have zero totals");

    std::vector<std::size_t> rows;
    rows.reserve(n_all);
    for (std::size_t i = 0; i < n_all; ++i)
        if (dense.count(group[i])) rows.push_back(i);
    const std::size_t n = rows.size();
    const std::size_t n_groups = dense.size();

    std::vector<std::int32_t> g(n);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = dense.at(group[rows[i]]);
        y(i) = counts[rows[i]];
    }
    std::vector<double> group_total(n_groups, 0.0);
    for (std::size_t i = 0; i < n; ++i) group_total[g[i]] += y(i);

    // Identification: only regressors with within-group variation enter.
    const std::size_t k_in = regressors.size();
    Eigen::MatrixXd Xfull(n, k_in), Xdm(n, k_in);
    for (std::size_t j = 0; j < k_in; ++j)
        for (std::size_t i = 0; i < n; ++i) Xfull(i, j) = regressors[j].values[rows[i]];
    {
        std::vector<double> cnt(n_groups, 0.0);
        for (std::size_t i = 0; i < n; ++i) cnt[g[i]] += 1.0;
        for (std::size_t j = 0; j < k_in; ++j) {
            std::vector<double> mean(n_groups, 0.0);
            for (std::size_t i = 0; i < n; ++i) mean[g[i]] += Xfull(i, j);
            for (std::size_t gg = 0; gg < n_groups; ++gg) mean[gg] /= cnt[gg];
            for (std::size_t i = 0; i < n; ++i) Xdm(i, j) = Xfull(i, j) - mean[g[i]];
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xdm);
    qr.setThreshold(opt.rank_tol);
    const auto rank = static_cast<std::size_t>(qr.rank());

    PoissonFEResult res;
    res.n_obs = n;
    res.n_groups = n_groups;
    res.n_groups_dropped = n_dropped;

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
            if (!kept[j]) res.dropped.push_back(regressors[j].name);
    }
    const std::size_t k = keep.size();

    Eigen::MatrixXd X(n, k);
    for (std::size_t j = 0; j < k; ++j) X.col(j) = Xfull.col(keep[j]);

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
    Concentrated cur = evaluate(X, y, g, n_groups, group_total, beta, k > 0);
    int iter = 0;
    if (k > 0) {
        for (iter = 1; iter <= opt.max_iter; ++iter) {
            if (cur.grad.norm() < opt.grad_tol) break;
            Eigen::LDLT<Eigen::MatrixXd> ldlt(cur.neg_hess);
            const Eigen::VectorXd step = ldlt.solve(cur.grad);
            if (ldlt.info() != Eigen::Success || !step.allFinite())
                throw NumericError("poisson_fe: singular Hessian (possible separation)");
            double lambda = 1.0;
            Concentrated next = cur;
            for (int h = 0; h < 60; ++h) {
                next = evaluate(X, y, g, n_groups, group_total, beta + lambda * step, true);
                if (next.loglik >= cur.loglik - 1e-10 * (std::fabs(cur.loglik) + 1.0)) break;
                lambda *= 0.5;
            }
            if (!(next.loglik >= cur.loglik - 1e-10 * (std::fabs(cur.loglik) + 1.0)))
                throw NumericError("poisson_fe: line search failed (possible separation)");
            beta += lambda * step;
            cur = std::move(next);
        }
        if (cur.grad.norm() >= opt.grad_tol) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "poisson_fe: no convergence after %d iterations (score norm %.3e)",
                          opt.max_iter, cur.grad.norm());
            throw NumericError(msg);
        }
    }
    res.iterations = iter > 0 ? iter - 1 : 0;

    // Concentrated group effects and the full Poisson log-likelihood.
    res.group_effects.reserve(n_groups);
    for (const auto& [code, id] : dense)
        res.group_effects.emplace_back(code, std::log(group_total[id]) - cur.log_denom[id]);
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double mu = std::max(cur.mu[i], 1e-300);
        ll += y(i) * std::log(mu) - cur.mu[i] - std::lgamma(y(i) + 1.0);
    }
    res.loglik = ll;

    if (k > 0) {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(cur.neg_hess);
        const Eigen::MatrixXd bread = ldlt.solve(Eigen::MatrixXd::Identity(k, k));
        Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
        {
            Eigen::MatrixXd s = Eigen::MatrixXd::Zero(k, n_groups);
            for (std::size_t i = 0; i < n; ++i)
                s.col(g[i]) += (y(i) - cur.mu[i]) * X.row(i).transpose();
            for (std::size_t gg = 0; gg < n_groups; ++gg)
                meat += s.col(gg) * s.col(gg).transpose();
        }
        const double factor =
            n_groups > 1 ? static_cast<double>(n_groups) / (static_cast<double>(n_groups) - 1.0) : 1.0;
        res.vcov = factor * bread * meat * bread;
        res.vcov = 0.5 * (res.vcov + res.vcov.transpose().eval());
    } else {
        res.vcov = Eigen::MatrixXd::Zero(0, 0);
    }

    res.beta.resize(k);
    res.se.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        res.names.push_back(regressors[keep[j]].name);
        res.beta[j] = beta(j);
        res.se[j] = std::sqrt(std::max(res.vcov(j, j), 0.0));
    }
    return res;
}

}  // namespace aircap
