#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aircap/control_function.hpp"
#include "aircap/data.hpp"
#include "aircap/network.hpp"
#include "aircap/panel.hpp"

namespace aircap {

// Data-generating process for the seats equation with known coefficients.
struct PanelDGP {
    double beta_capdis = -0.0204;
    double beta_talk = 0.015;
    double beta_monopoly = 0.03;
    double beta_missing = -0.01;
    double base_log_seats = 8.5;
    double sd_carrier_market = 0.4;   // carrier-market effect spread
    double sd_carrier_quarter = 0.15; // carrier-year-quarter effect spread
    double sd_trend = 5e-4;           // airport trend slope spread (per month)
    double rho = 0.3;                 // within-cluster error share
    double sd_noise = 0.05;
    int n_market_pairs = 80;   // unordered pairs; both directions generated
    int n_airports = 24;
    int n_legacies = 5;
    int n_lccs = 2;
    int n_months = 36;
    int start_year = 2008;
    double talk_prob = 0.55;
    double talk_persistence = 0.35;
    double miss_prob = 0.06;  // carrier-quarter report missing
    double lcc_entry_prob = 0.45;
    std::uint64_t seed = 1;
};

struct GeneratedPanel {
    std::vector<SegmentRecord> segments;
    FlagMap flags;
    std::map<std::pair<std::string, YearQuarter>, TranscriptStatus> statuses;
    std::vector<std::string> airports;
    Panel panel;  // built with the DGP's alignment (Shifted)
    PanelDGP dgp;
};

// Panel with exogenous communication: log seats follow the treatment
// equation with the stated coefficients; indicators derive from the same
// flags the emitted transcripts encode, so ingestion round-trips exactly.
GeneratedPanel gen_panel(const PanelDGP& dgp);

// Endogenous-structure process: a market-level cost shock moves both the
// probability that a market is talk-eligible and seats, with time-varying
// sign-valued hub-distance shifters as instruments. Ready for control_function().
struct CfDGP {
    double beta_capdis = -0.0204;
    double beta_talk = 0.05;
    double intercept = 0.5;      // linear probability intercept
    double sigma_scale = 0.35;   // total instrument loading
    double theta = 0.08;         // cost shock loading in the eligibility equation
    double delta = 0.5;          // cost shock loading in seats (endogeneity strength)
    double sd_noise = 0.05;
    double base_log_seats = 8.5;
    int n_market_pairs = 150;
    int n_months = 18;
    int n_legacies = 3;
    int start_year = 2008;
    double talk_prob = 0.6;
    double miss_prob = 0.04;
    double lcc_entry_prob = 0.4;
    std::uint64_t seed = 1;
};

struct GeneratedCf {
    ControlFunctionData data;
    std::vector<std::string> instrument_names;
    double true_beta_capdis = 0.0;
    double true_beta_talk = 0.0;
};

GeneratedCf gen_cf_panel(const CfDGP& dgp);

// Corpus with planted co-occurrence: each planted token gets its own report
// block; anchors appear in a report with the planted rate, adjacent to the
// token, so both embedding geometry and report co-occurrence are controlled.
struct CorpusDGP {
    struct Planted {
        std::string token;
        double anchor_rate = 1.0;
    };
    std::vector<std::string> anchors{"capacity_discipline", "demand", "gdp"};
    std::vector<Planted> planted;
    int reports_per_token = 40;
    int anchor_only_reports = 6;
    int background_sentences = 12;
    int sentence_len = 9;
    int n_background_tokens = 40;
    std::uint64_t seed = 1;
};

struct GeneratedCorpus {
    std::vector<std::vector<std::string>> sentences;  // training input
    std::vector<std::vector<std::string>> reports;    // report-level token lists
};

GeneratedCorpus gen_corpus(const CorpusDGP& dgp);

// Network fixtures.
net::Graph two_hub_replica();  // 14-node fixture with hubs {DFW, CLT, LAX}
net::Graph ring_graph(int n);
net::Graph random_tree(int n, std::uint64_t seed);
net::Graph random_graph(int n, double edge_prob, std::uint64_t seed);

}  // namespace aircap
