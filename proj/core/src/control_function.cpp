#include "aircap/control_function.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "aircap/errors.hpp"

namespace aircap {

namespace {

FixedEffectSpec subset_fe(const FixedEffectSpec& fe, const std::vector<std::size_t>& rows) {
    FixedEffectSpec out;
    out.dims.reserve(fe.dims.size());
    for (const auto& d : fe.dims) {
        std::vector<std::int32_t> sub(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) sub[i] = d[rows[i]];
        out.dims.push_back(std::move(sub));
    }
    for (const auto& t : fe.trends) {
        TrendGroup tg;
        tg.group.resize(rows.size());
        tg.time.resize(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            tg.group[i] = t.group[rows[i]];
            tg.time[i] = t.time[rows[i]];
        }
        out.trends.push_back(std::move(tg));
    }
    return out;
}

std::vector<Regressor> subset_regressors(const std::vector<Regressor>& regs,
                                         const std::vector<std::size_t>& rows) {
    std::vector<Regressor> out;
    out.reserve(regs.size());
    for (const auto& r : regs) {
        Regressor s{r.name, {}, r.binary};
        s.values.resize(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) s.values[i] = r.values[rows[i]];
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<double> subset_column(const std::vector<double>& col,
                                  const std::vector<std::size_t>& rows) {
    std::vector<double> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) out[i] = col[rows[i]];
    return out;
}

struct StagePair {
    RegressionResult first;
    double f = 0.0;
    std::vector<double> residuals;
    RegressionResult second;
};

StagePair run_stages(const ControlFunctionData& d, const ControlFunctionOptions& opt,
                     const std::vector<std::size_t>& fs_rows,
                     const std::vector<std::int32_t>& fs_keys,
                     const std::vector<std::size_t>& ss_rows,
                     const std::vector<std::int32_t>& ss_keys,
                     const std::vector<std::size_t>& ss_to_fs_pos) {
    StagePair out;

    std::vector<Regressor> fs_regs = subset_regressors(d.instruments, fs_rows);
    for (auto& c : subset_regressors(d.controls, fs_rows)) fs_regs.push_back(std::move(c));
    out.first = estimate_fe(subset_column(d.endogenous, fs_rows), fs_regs,
                            subset_fe(d.first_stage_fe, fs_rows), fs_keys, opt.regression);

    std::vector<std::string> inst_names;
    for (const auto& r : d.instruments) inst_names.push_back(r.name);
    for (const auto& name : inst_names)
        if (!out.first.index_of(name))
            throw NumericError("control_function: rank-deficient first stage (instrument " + name +
                               " dropped)");
    out.f = wald_f(out.first, inst_names);
    out.residuals = out.first.residuals;

    std::vector<Regressor> ss_regs = subset_regressors(d.regressors, ss_rows);
    Regressor rhat{opt.residual_name, {}, false};
    rhat.values.resize(ss_rows.size());
    for (std::size_t i = 0; i < ss_rows.size(); ++i) rhat.values[i] = out.residuals[ss_to_fs_pos[i]];
    ss_regs.push_back(std::move(rhat));

    out.second = estimate_fe(subset_column(d.outcome, ss_rows), ss_regs,
                             subset_fe(d.second_stage_fe, ss_rows), ss_keys, opt.regression);
    return out;
}

}  // namespace

ControlFunctionResult control_function(const ControlFunctionData& d,
                                       const ControlFunctionOptions& opt) {
    const std::size_t n_fs = d.endogenous.size();
    const std::size_t n_ss = d.outcome.size();
    if (n_fs == 0 || n_ss == 0) throw NumericError("control_function: empty stage table");
    if (d.first_stage_cluster.size() != n_fs || d.cluster.size() != n_ss ||
        d.row_to_first_stage.size() != n_ss)
        throw NumericError("control_function: table length mismatch");
    if (d.instruments.empty()) throw NumericError("control_function: no instruments");
    for (std::size_t i = 0; i < n_ss; ++i) {
        if (d.row_to_first_stage[i] >= n_fs)
            throw NumericError("control_function: first-stage join out of range");
        if (d.first_stage_cluster[d.row_to_first_stage[i]] != d.cluster[i])
            throw NumericError("control_function: cluster mismatch across stages");
    }

    // Point estimate on the full tables.
    std::vector<std::size_t> fs_identity(n_fs), ss_identity(n_ss);
    for (std::size_t i = 0; i < n_fs; ++i) fs_identity[i] = i;
    for (std::size_t i = 0; i < n_ss; ++i) ss_identity[i] = i;
    StagePair point = run_stages(d, opt, fs_identity, d.first_stage_cluster, ss_identity, d.cluster,
                                 d.row_to_first_stage);

    ControlFunctionResult res;
    res.first_stage = std::move(point.first);
    res.first_stage_f = point.f;
    res.residuals = std::move(point.residuals);
    res.second_stage = std::move(point.second);
    if (opt.bootstrap.replicates == 0) return res;  // analytic SEs only

    // Joint cluster resampling over the union code space.
    std::vector<std::int32_t> codes(d.first_stage_cluster);
    codes.insert(codes.end(), d.cluster.begin(), d.cluster.end());
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
    const std::size_t C = codes.size();

    auto dense_of = [&](std::int32_t code) {
        return static_cast<std::size_t>(
            std::lower_bound(codes.begin(), codes.end(), code) - codes.begin());
    };
    std::vector<std::vector<std::size_t>> fs_by_cluster(C), ss_by_cluster(C);
    std::vector<std::size_t> fs_pos(n_fs);
    for (std::size_t i = 0; i < n_fs; ++i) {
        auto& list = fs_by_cluster[dense_of(d.first_stage_cluster[i])];
        fs_pos[i] = list.size();
        list.push_back(i);
    }
    for (std::size_t i = 0; i < n_ss; ++i) ss_by_cluster[dense_of(d.cluster[i])].push_back(i);

    const int B = opt.bootstrap.replicates;
    if (B < 2) throw ConfigError("control_function: need at least 2 bootstrap replicates");
    const std::size_t k = res.second_stage.names.size();
    std::vector<std::vector<double>> stats(B);
    std::vector<char> ok(B, 0);

    auto run_replicate = [&](int b) {
        const auto draw = bootstrap_draw(C, opt.bootstrap.seed, b);
        std::vector<std::size_t> fs_rows, ss_rows, ss_map;
        std::vector<std::int32_t> fs_keys, ss_keys;
        std::vector<std::size_t> fs_offset(draw.size());
        for (std::size_t dd = 0; dd < draw.size(); ++dd) {
            fs_offset[dd] = fs_rows.size();
            for (auto r : fs_by_cluster[draw[dd]]) {
                fs_rows.push_back(r);
                fs_keys.push_back(static_cast<std::int32_t>(dd));
            }
        }
        for (std::size_t dd = 0; dd < draw.size(); ++dd) {
            for (auto r : ss_by_cluster[draw[dd]]) {
                ss_rows.push_back(r);
                ss_keys.push_back(static_cast<std::int32_t>(dd));
                ss_map.push_back(fs_offset[dd] + fs_pos[d.row_to_first_stage[r]]);
            }
        }
        try {
            StagePair rep = run_stages(d, opt, fs_rows, fs_keys, ss_rows, ss_keys, ss_map);
            std::vector<double> stat(k);
            for (std::size_t j = 0; j < k; ++j) {
                auto idx = rep.second.index_of(res.second_stage.names[j]);
                if (!idx) throw NumericError("replicate dropped a point-estimate regressor");
                stat[j] = rep.second.beta[*idx];
            }
            stats[b] = std::move(stat);
            ok[b] = 1;
        } catch (const std::exception&) {
            ok[b] = 0;
        }
    };

    const int workers = std::max(1, opt.bootstrap.workers);
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

    std::vector<const std::vector<double>*> kept;
    for (int b = 0; b < B; ++b) {
        if (ok[b])
            kept.push_back(&stats[b]);
        else
            ++res.bootstrap_failed;
    }
    if (kept.size() < 2)
        throw NumericError("control_function: fewer than 2 successful bootstrap replicates");

    std::vector<double> mean(k, 0.0);
    for (const auto* r : kept)
        for (std::size_t j = 0; j < k; ++j) mean[j] += (*r)[j];
    for (auto& m : mean) m /= static_cast<double>(kept.size());
    res.bootstrap_se.assign(k, 0.0);
    for (const auto* r : kept)
        for (std::size_t j = 0; j < k; ++j)
            res.bootstrap_se[j] += ((*r)[j] - mean[j]) * ((*r)[j] - mean[j]);
    for (auto& s : res.bootstrap_se) s = std::sqrt(s / (static_cast<double>(kept.size()) - 1.0));
    return res;
}

}  // namespace aircap
