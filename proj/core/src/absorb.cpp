#include "aircap/absorb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "aircap/errors.hpp"

namespace aircap {

namespace {

struct DenseDim {
    std::vector<std::int32_t> code;  // dense 0..n_groups-1 per row
    std::int32_t n_groups = 0;
};

DenseDim densify(const std::vector<std::int32_t>& raw) {
    DenseDim out;
    out.code.resize(raw.size());
    std::unordered_map<std::int32_t, std::int32_t> ids;
    ids.reserve(raw.size() / 4 + 8);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto [it, fresh] = ids.emplace(raw[i], static_cast<std::int32_t>(ids.size()));
        (void)fresh;
        out.code[i] = it->second;
    }
    out.n_groups = static_cast<std::int32_t>(ids.size());
    return out;
}

// Demean within groups; returns the largest absolute adjustment.
double demean_pass(std::vector<double>& col, const DenseDim& dim,
                   const std::vector<double>& inv_count, std::vector<double>& sums) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t i = 0; i < col.size(); ++i) sums[dim.code[i]] += col[i];
    double max_adj = 0.0;
    for (std::int32_t g = 0; g < dim.n_groups; ++g) {
        sums[g] *= inv_count[g];
        max_adj = std::max(max_adj, std::fabs(sums[g]));
    }
    for (std::size_t i = 0; i < col.size(); ++i) col[i] -= sums[dim.code[i]];
    return max_adj;
}

struct TrendStats {
    // Precomputed per group: count, sum t, and inverse determinant of the
    // {1,t} normal equations; det == 0 marks a mean-only group.
    std::vector<double> n, st, stt, inv_det;
};

TrendStats trend_stats(const DenseDim& dim, const std::vector<double>& t) {
    TrendStats s;
    s.n.assign(dim.n_groups, 0.0);
    s.st.assign(dim.n_groups, 0.0);
    s.stt.assign(dim.n_groups, 0.0);
    s.inv_det.assign(dim.n_groups, 0.0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto g = dim.code[i];
        s.n[g] += 1.0;
        s.st[g] += t[i];
        s.stt[g] += t[i] * t[i];
    }
    for (std::int32_t g = 0; g < dim.n_groups; ++g) {
        const double det = s.n[g] * s.stt[g] - s.st[g] * s.st[g];
        const double scale = s.n[g] * s.stt[g];
        if (det > 1e-12 * std::max(scale, 1.0)) s.inv_det[g] = 1.0 / det;
    }
    return s;
}

// Project out {1, t} within each group; returns largest absolute adjustment.
double trend_pass(std::vector<double>& col, const DenseDim& dim, const std::vector<double>& t,
                  const TrendStats& s, std::vector<double>& sy, std::vector<double>& sty,
                  std::vector<double>& a, std::vector<double>& b) {
    std::fill(sy.begin(), sy.end(), 0.0);
    std::fill(sty.begin(), sty.end(), 0.0);
    for (std::size_t i = 0; i < col.size(); ++i) {
        const auto g = dim.code[i];
        sy[g] += col[i];
        sty[g] += t[i] * col[i];
    }
    for (std::int32_t g = 0; g < dim.n_groups; ++g) {
        if (s.inv_det[g] > 0.0) {
            b[g] = (s.n[g] * sty[g] - s.st[g] * sy[g]) * s.inv_det[g];
            a[g] = (sy[g] - b[g] * s.st[g]) / s.n[g];
        } else {  // degenerate trend: fall back to group mean
            b[g] = 0.0;
            a[g] = sy[g] / s.n[g];
        }
    }
    double max_adj = 0.0;
    for (std::size_t i = 0; i < col.size(); ++i) {
        const auto g = dim.code[i];
        const double fit = a[g] + b[g] * t[i];
        col[i] -= fit;
        max_adj = std::max(max_adj, std::fabs(fit));
    }
    return max_adj;
}

}  // namespace

AbsorbInfo absorb(const std::vector<std::vector<double>*>& columns, const FixedEffectSpec& fe,
                  const AbsorbOptions& opt) {
    AbsorbInfo info;
    if (columns.empty()) return info;
    const std::size_t n = columns.front()->size();
    for (const auto* c : columns)
        if (c->size() != n) throw NumericError("absorb: column length mismatch");
    if (fe.empty() || n == 0) return info;

    std::vector<DenseDim> dims;
    dims.reserve(fe.dims.size());
    for (const auto& d : fe.dims) {
        if (d.size() != n) throw NumericError("absorb: fixed-effect key length mismatch");
        dims.push_back(densify(d));
    }
    std::vector<DenseDim> tdims;
    std::vector<TrendStats> tstats;
    for (const auto& tr : fe.trends) {
        if (tr.group.size() != n || tr.time.size() != n)
            throw NumericError("absorb: trend group length mismatch");
        tdims.push_back(densify(tr.group));
        tstats.push_back(trend_stats(tdims.back(), tr.time));
    }

    std::vector<std::vector<double>> inv_counts(dims.size());
    std::size_t max_groups = 1;
    for (std::size_t d = 0; d < dims.size(); ++d) {
        std::vector<double> counts(dims[d].n_groups, 0.0);
        for (auto g : dims[d].code) counts[g] += 1.0;
        inv_counts[d].resize(dims[d].n_groups);
        for (std::int32_t g = 0; g < dims[d].n_groups; ++g) inv_counts[d][g] = 1.0 / counts[g];
        max_groups = std::max(max_groups, static_cast<std::size_t>(dims[d].n_groups));
    }
    for (const auto& td : tdims) max_groups = std::max(max_groups, static_cast<std::size_t>(td.n_groups));

    std::vector<double> buf(max_groups), buf2(max_groups), buf3(max_groups), buf4(max_groups);

    const std::size_t n_steps = dims.size() + tdims.size();
    for (int iter = 1; iter <= opt.max_iter; ++iter) {
        double sweep_change = 0.0;
        for (auto* col : columns) {
            for (std::size_t d = 0; d < dims.size(); ++d)
                sweep_change = std::max(sweep_change, demean_pass(*col, dims[d], inv_counts[d], buf));
            for (std::size_t d = 0; d < tdims.size(); ++d)
                sweep_change = std::max(
                    sweep_change, trend_pass(*col, tdims[d], fe.trends[d].time, tstats[d], buf, buf2, buf3, buf4));
        }
        info.iterations = iter;
        info.final_change = sweep_change;
        // A single projection step is idempotent and exact in one sweep.
        if (n_steps == 1 || sweep_change < opt.tol) return info;
    }
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "absorb: no convergence after %d sweeps (last change %.3e, tol %.3e)",
                  opt.max_iter, info.final_change, opt.tol);
    throw NumericError(msg);
}

}  // namespace aircap
