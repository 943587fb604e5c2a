#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aircap/control_function.hpp"
#include "aircap/network.hpp"
#include "aircap/panel.hpp"
#include "aircap/poisson.hpp"
#include "aircap/regress.hpp"

namespace aircap {

// Fixed-effect layout of the seats equation.
enum class FeVariant {
    CarrierMarket,           // carrier-market + carrier-year-quarter effects
    CarrierMarketStructure,  // carrier-market-structure + carrier-year-quarter
};
FeVariant fe_variant_from_string(const std::string& s);
std::string to_string(FeVariant v);

// Which treatment columns replace or augment CapacityDiscipline.
struct TreatmentVariant {
    enum class Kind {
        Main,
        KSplit,       // CapacityDiscipline_k for k = 2,3,4
        LegacyMixed,  // split by all-legacy vs mixed serving set
        OnlyJ,        // + OnlyJTalks
        Monopoly,     // + MonopolyCapacityDiscipline
        N1,           // + CapacityDisciplineN1
        NotJ,         // + CapacityDisciplineNotJ
        ZToken,       // main columns on a panel coded from one token
        PeriodSplit,  // CapacityDiscipline x pre / x post
    };
    Kind kind = Kind::Main;
    std::string token;       // ZToken
    YearMonth threshold{};   // PeriodSplit

    bool operator==(const TreatmentVariant&) const = default;
};
// Accepts main | k-split | legacy-mixed | only-j | monopoly | n-1 | not-j |
// z-token:<token> | period-split:<YYYY-MM>.
TreatmentVariant treatment_from_string(const std::string& s);
std::string to_string(const TreatmentVariant& v);

// Design matrices for one run of the seats equation.
struct DesignMatrices {
    std::vector<double> outcome;  // log seats
    std::vector<Regressor> regressors;
    FixedEffectSpec fe;
    std::vector<std::int32_t> cluster;     // bi-directional market codes
    std::vector<std::size_t> panel_rows;   // design row -> panel row
};

DesignMatrices build_design(const Panel& panel, FeVariant fe_variant,
                            const TreatmentVariant& treatment);

RegressionResult estimate_panel(const Panel& panel, FeVariant fe_variant,
                                const TreatmentVariant& treatment,
                                const RegressionOptions& opt = {});

// Strict-exogeneity check: the main design augmented with next month's
// CapacityDiscipline; rows without a constructible lead are dropped.
struct LeadTestResult {
    RegressionResult regression;
    double lead_coef = 0.0;
    double lead_se = 0.0;
    std::size_t rows_dropped = 0;
};
LeadTestResult lead_exogeneity_test(const Panel& panel, FeVariant fe_variant,
                                    const RegressionOptions& opt = {});

// Market-level flight counts with market effects and month dummies.
struct MarketPoisson {
    PoissonFEResult result;
    std::vector<std::string> markets;  // group code -> directional market key
    std::size_t n_market_months = 0;
};
MarketPoisson poisson_market(const Panel& panel, const PoissonOptions& opt = {});

// Control-function tables from the panel, quarterly carrier networks, and
// airport coordinates. Market-months where any legacy hub distance (or the
// pooled low-cost distance) is undefined are dropped and counted.
struct CfAssembly {
    ControlFunctionData data;
    std::vector<std::string> instrument_names;
    std::size_t market_months_dropped = 0;
    std::size_t market_months_kept = 0;
};
CfAssembly assemble_control_function(const Panel& panel,
                                     const std::vector<net::CarrierNetwork>& networks,
                                     const std::map<std::string, Coordinate>& coords,
                                     const CarrierRegistry& registry);

}  // namespace aircap
