#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>

#include "aircap/errors.hpp"
#include "commands.hpp"
#include "run_config.hpp"

namespace {

void emit_error_record(const std::string& type, const std::string& message,
                       const std::string& command) {
    nlohmann::json record;
    record["command"] = command;
    record["error"]["type"] = type;
    record["error"]["message"] = message;
    std::cerr << record.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    using namespace aircap;
    using namespace aircap::cli;

    RunConfig cfg;
    std::string command = argc > 1 ? argv[1] : "";

    CLI::App app{"Airline capacity-communication analysis pipeline"};
    app.require_subcommand(1);

    EmbedArgs embed_args;
    ScreenArgs screen_args;
    CrowdingArgs crowd_args;
    PricesArgs price_args;
    DiagnosticsArgs diag_args;
    SimulateArgs sim_args;
    int rc = 0;

    auto* code = app.add_subcommand("code-transcripts",
                                    "Code earnings-call transcripts into communication flags");
    add_common_options(code, cfg);
    code->callback([&] { rc = cmd_code_transcripts(cfg); });

    auto* train = app.add_subcommand("train-embedding",
                                     "Train a skip-gram embedding on management speech");
    add_common_options(train, cfg);
    train->add_option("--dims", embed_args.dims, "vector dimensions");
    train->add_option("--window", embed_args.window, "context window");
    train->add_option("--negatives", embed_args.negatives, "negative samples");
    train->add_option("--epochs", embed_args.epochs, "training epochs");
    train->add_option("--lr", embed_args.lr, "initial learning rate");
    train->add_option("--min-count", embed_args.min_count, "vocabulary count floor");
    train->add_option("--subsample", embed_args.subsample, "frequent-token threshold");
    train->callback([&] { rc = cmd_train_embedding(cfg, embed_args); });

    auto* screen = app.add_subcommand("screen-tokens",
                                      "Screen vocabulary for indirect communication tokens");
    add_common_options(screen, cfg);
    screen->add_option("--embedding", screen_args.embedding,
                       "embedding file (default <out>/embedding.bin)");
    screen->add_option("--d-lo", screen_args.d_lo, "anchor similarity lower bound");
    screen->add_option("--d-hi", screen_args.d_hi, "anchor similarity upper bound");
    screen->add_option("--cooccur-min", screen_args.cooccur_min, "report co-occurrence floor");
    screen->callback([&] { rc = cmd_screen_tokens(cfg, screen_args); });

    auto* build = app.add_subcommand("build-panel",
                                     "Assemble the carrier-market-month estimation panel");
    add_common_options(build, cfg);
    build->callback([&] { rc = cmd_build_panel(cfg); });

    auto* est = app.add_subcommand("estimate", "Estimate the seats equation");
    add_common_options(est, cfg);
    est->callback([&] { rc = cmd_estimate(cfg); });

    auto* pois = app.add_subcommand("poisson", "Market-level flight counts (Poisson)");
    add_common_options(pois, cfg);
    pois->callback([&] { rc = cmd_poisson(cfg); });

    auto* crowd = app.add_subcommand("crowding", "Departure-time crowding regression");
    add_common_options(crowd, cfg);
    crowd->add_flag("--per-carrier", crowd_args.per_carrier,
                    "carrier-level schedules instead of pooled market schedules");
    crowd->callback([&] { rc = cmd_crowding(cfg, crowd_args); });

    auto* price = app.add_subcommand("prices", "Route-fare regression (passenger weighted)");
    add_common_options(price, cfg);
    price->add_flag("--split-class", price_args.split_class,
                    "separate legacy and low-cost discipline coefficients");
    price->callback([&] { rc = cmd_prices(cfg, price_args); });

    auto* hub = app.add_subcommand("hubs", "Identify hubs from quarterly carrier networks");
    add_common_options(hub, cfg);
    hub->callback([&] { rc = cmd_hubs(cfg); });

    auto* cf = app.add_subcommand("control-function",
                                  "Hub-distance control function for talk eligibility");
    add_common_options(cf, cfg);
    cf->callback([&] { rc = cmd_control_function(cfg); });

    auto* diag = app.add_subcommand("diagnostics", "Lead exogeneity and TWFE weight checks");
    add_common_options(diag, cfg);
    diag->add_flag("--lead", diag_args.lead, "lead-of-treatment exogeneity test only");
    diag->add_flag("--twfe", diag_args.twfe, "two-way FE weight diagnostics only");
    diag->callback([&] { rc = cmd_diagnostics(cfg, diag_args); });

    auto* sim = app.add_subcommand("simulate", "Generate a synthetic ingestible data set");
    add_common_options(sim, cfg);
    sim->add_option("--pairs", sim_args.pairs, "market pairs");
    sim->add_option("--months", sim_args.months, "months");
    sim->add_option("--airports", sim_args.airports, "airports");
    sim->add_option("--legacies", sim_args.legacies, "legacy carriers");
    sim->add_option("--lccs", sim_args.lccs, "low-cost carriers");
    sim->add_option("--start-year", sim_args.start_year, "first year");
    sim->callback([&] { rc = cmd_simulate(cfg, sim_args); });

    try {
        preload_config(argc, argv, cfg);
        app.parse(argc, argv);
        return rc;
    } catch (const CLI::ParseError& e) {
        const int code_ = app.exit(e);
        if (code_ == 0) return 0;
        emit_error_record("ConfigError", e.what(), command);
        return 4;
    } catch (const SchemaError& e) {
        emit_error_record("SchemaError", e.what(), command);
        return 2;
    } catch (const NumericError& e) {
        emit_error_record("NumericError", e.what(), command);
        return 3;
    } catch (const ConfigError& e) {
        emit_error_record("ConfigError", e.what(), command);
        return 4;
    } catch (const std::exception& e) {
        emit_error_record("InternalError", e.what(), command);
        return 1;
    }
}
