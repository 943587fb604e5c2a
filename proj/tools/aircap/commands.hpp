#pragma once

#include <string>

#include "run_config.hpp"

namespace aircap::cli {

struct EmbedArgs {
    int dims = 300;
    int window = 5;
    int negatives = 5;
    int epochs = 5;
    double lr = 0.025;
    int min_count = 5;
    double subsample = 1e-4;
};

struct ScreenArgs {
    std::string embedding;  // defaults to <out>/embedding.bin
    double d_lo = 0.55;
    double d_hi = 0.95;
    double cooccur_min = 0.5;
};

struct CrowdingArgs {
    bool per_carrier = false;
};

struct PricesArgs {
    bool split_class = false;
};

struct DiagnosticsArgs {
    bool lead = false;
    bool twfe = false;
};

struct SimulateArgs {
    int pairs = 0;  // 0 keeps the generator default
    int months = 0;
    int airports = 0;
    int legacies = 0;
    int lccs = -1;  // -1 keeps the generator default
    int start_year = 0;
};

int cmd_code_transcripts(const RunConfig& cfg);
int cmd_train_embedding(const RunConfig& cfg, const EmbedArgs& args);
int cmd_screen_tokens(const RunConfig& cfg, const ScreenArgs& args);
int cmd_build_panel(const RunConfig& cfg);
int cmd_estimate(const RunConfig& cfg);
int cmd_poisson(const RunConfig& cfg);
int cmd_crowding(const RunConfig& cfg, const CrowdingArgs& args);
int cmd_prices(const RunConfig& cfg, const PricesArgs& args);
int cmd_hubs(const RunConfig& cfg);
int cmd_control_function(const RunConfig& cfg);
int cmd_diagnostics(const RunConfig& cfg, const DiagnosticsArgs& args);
int cmd_simulate(const RunConfig& cfg, const SimulateArgs& args);

}  // namespace aircap::cli
