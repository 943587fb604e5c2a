#include "run_config.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <map>

#include "aircap/errors.hpp"

namespace aircap::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    try {
        if constexpr (std::is_same_v<T, double>) return std::stod(value);
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::stoll(value);
        else if constexpr (std::is_same_v<T, std::uint64_t>) return std::stoull(value);
        else return static_cast<T>(std::stoi(value));
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + value + "'");
    }
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    auto str = [](std::string RunConfig::* f) {
        return Setter([f](RunConfig& c, const std::string&, const std::string& v) { c.*f = v; });
    };
    static const std::map<std::string, Setter> m{
        {"segments", str(&RunConfig::segments)},
        {"transcripts", str(&RunConfig::transcripts)},
        {"status", str(&RunConfig::status)},
        {"labels", str(&RunConfig::labels)},
        {"coordinates", str(&RunConfig::coordinates)},
        {"populations", str(&RunConfig::populations)},
        {"ontime", str(&RunConfig::ontime)},
        {"fares", str(&RunConfig::fares)},
        {"cities", str(&RunConfig::cities)},
        {"out", str(&RunConfig::out)},
        {"alignment", str(&RunConfig::alignment)},
        {"granularity", str(&RunConfig::granularity)},
        {"fe", str(&RunConfig::fe)},
        {"treatment", str(&RunConfig::treatment)},
        {"fringe-threshold",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.fringe_threshold = parse_number<double>(k, v);
         }},
        {"min-monthly-flights",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.min_monthly_flights = parse_number<std::int64_t>(k, v);
         }},
        {"hub-threshold",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.hub_threshold = parse_number<double>(k, v);
         }},
        {"tol",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.tol = parse_number<double>(k, v);
         }},
        {"bootstrap",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.bootstrap = parse_number<int>(k, v);
         }},
        {"seed",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.seed = parse_number<std::uint64_t>(k, v);
         }},
        {"threads",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.threads = parse_number<int>(k, v);
         }},
    };
    return m;
}

}  // namespace

std::filesystem::path RunConfig::ensure_out_dir() const {
    std::filesystem::path dir = out;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + out + "': " + ec.message());
    return dir;
}

void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        it->second(cfg, key, value);
    }
}

void preload_config(int argc, char** argv, RunConfig& cfg) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" || a == "-c") {
            if (i + 1 >= argc) throw ConfigError("--config needs a file argument");
            load_config_file(argv[i + 1], cfg);
        } else if (a.rfind("--config=", 0) == 0) {
            load_config_file(a.substr(9), cfg);
        }
    }
}

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("-c,--config", "key=value config file; flags given here override it")
        ->option_text("FILE");
    cmd->add_option("--segments", cfg.segments, "segment capacity CSV");
    cmd->add_option("--transcripts", cfg.transcripts, "earnings-call transcript directory");
    cmd->add_option("--status", cfg.status, "transcript status CSV");
    cmd->add_option("--labels", cfg.labels, "label override CSV");
    cmd->add_option("--coordinates", cfg.coordinates, "airport coordinate CSV");
    cmd->add_option("--populations", cfg.populations, "airport population CSV");
    cmd->add_option("--ontime", cfg.ontime, "departure schedule CSV");
    cmd->add_option("--fares", cfg.fares, "route fare CSV");
    cmd->add_option("--cities", cfg.cities, "airport to city map CSV");
    cmd->add_option("-o,--out", cfg.out, "output directory");
    cmd->add_option("--alignment", cfg.alignment, "call coverage: shifted | contemporaneous");
    cmd->add_option("--granularity", cfg.granularity, "market granularity: airport | city");
    cmd->add_option("--fe", cfg.fe, "carrier-market | carrier-market-structure");
    cmd->add_option("--treatment", cfg.treatment,
                    "main | k-split | legacy-mixed | only-j | monopoly | n-1 | not-j | "
                    "z-token:<token> | period-split:<YYYY-MM>");
    cmd->add_option("--fringe-threshold", cfg.fringe_threshold,
                    "avg monthly flights below which a carrier pools into the fringe");
    cmd->add_option("--min-monthly-flights", cfg.min_monthly_flights,
                    "flights per month needed to count as serving a market");
    cmd->add_option("--hub-threshold", cfg.hub_threshold, "betweenness cutoff for hubs");
    cmd->add_option("--tol", cfg.tol, "fixed-effect absorption tolerance");
    cmd->add_option("-B,--bootstrap", cfg.bootstrap, "bootstrap replicates (0 disables)");
    cmd->add_option("--seed", cfg.seed, "random seed");
    cmd->add_option("--threads", cfg.threads, "worker thread budget");
}

}  // namespace aircap::cli
