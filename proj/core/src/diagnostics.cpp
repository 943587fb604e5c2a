#include "aircap/diagnostics.hpp"

#include <cmath>

#include "aircap/errors.hpp"

namespace aircap {

TwfeWeights twfe_weights(const std::vector<double>& treatment, const FixedEffectSpec& fe,
                         const AbsorbOptions& opt) {
    if (treatment.empty()) throw NumericError("twfe_weights: empty sample");
    TwfeWeights out;
    for (std::size_t i = 0; i < treatment.size(); ++i) {
        if (treatment[i] != 0.0 && treatment[i] != 1.0)
            throw NumericError("twfe_weights: treatment must be binary");
        if (treatment[i] == 1.0) out.treated_rows.push_back(i);
    }
    if (out.treated_rows.empty()) throw NumericError("twfe_weights: no treated cells");

    std::vector<double> resid = treatment;
    std::vector<std::vector<double>*> cols{&resid};
    absorb(cols, fe, opt);

    double mean = 0.0;
    for (auto r : out.treated_rows) mean += resid[r];
    mean /= static_cast<double>(out.treated_rows.size());
    if (std::fabs(mean) < 1e-12)
        throw NumericError("twfe_weights: no identifying variation in treatment");

    out.weights.reserve(out.treated_rows.size());
    std::size_t negative = 0;
    for (auto r : out.treated_rows) {
        const double w = resid[r] / mean;
        out.weights.push_back(w);
        if (w < 0.0) ++negative;
    }
    out.share_negative = static_cast<double>(negative) / static_cast<double>(out.treated_rows.size());
    return out;
}

}  // namespace aircap
