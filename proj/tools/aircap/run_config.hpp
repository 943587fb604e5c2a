#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace CLI {
class App;
}

namespace aircap::cli {

// One configuration shared by every subcommand; a plain key=value file can
// preset any field and command-line flags override it.
struct RunConfig {
    // input paths
    std::string segments;
    std::string transcripts;
    std::string status;
    std::string labels;
    std::string coordinates;
    std::string populations;
    std::string ontime;
    std::string fares;
    std::string cities;
    std::string out = "out";

    // pipeline
    std::string alignment = "shifted";    // shifted | contemporaneous
    std::string granularity = "airport";  // airport | city
    std::string fe = "carrier-market";    // carrier-market | carrier-market-structure
    std::string treatment = "main";
    double fringe_threshold = 0.0;
    std::int64_t min_monthly_flights = 4;
    double hub_threshold = 0.1;

    // estimator
    double tol = 1e-8;
    int bootstrap = 200;
    std::uint64_t seed = 1;
    int threads = 1;

    std::filesystem::path out_dir() const { return out; }
    std::filesystem::path ensure_out_dir() const;
};

// Loads key=value lines ('#' starts a comment); unknown keys raise ConfigError.
void load_config_file(const std::string& path, RunConfig& cfg);

// Scans argv for --config/-c ahead of normal parsing so file values act as
// defaults that explicit flags then override.
void preload_config(int argc, char** argv, RunConfig& cfg);

// Registers the shared options on a subcommand.
void add_common_options(CLI::App* cmd, RunConfig& cfg);

}  // namespace aircap::cli
