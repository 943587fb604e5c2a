#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace aircap {

struct SkipgramOptions {
    int dims = 300;
    int window = 5;       // dynamic window, uniform in [1, window]
    int negatives = 5;
    int epochs = 5;
    double lr = 0.025;    // linearly decayed to 1e-4 * lr
    int min_count = 5;
    double subsample = 1e-4;  // frequent-token downsampling threshold; 0 disables
    std::uint64_t seed = 1;
    int workers = 1;  // >1 trains lock-free and is not seed-deterministic
};

class Embedding {
public:
    std::vector<std::string> vocab;   // sorted by count desc, token asc
    std::vector<std::uint64_t> counts;
    std::vector<float> vectors;  // |V| x dims row-major input vectors
    int dims = 0;
    int window = 0;
    int negatives = 0;
    int epochs = 0;
    std::uint64_t seed = 0;

    std::optional<std::size_t> find(const std::string& token) const;
    const float* row(std::size_t i) const { return vectors.data() + i * static_cast<std::size_t>(dims); }

    void save(const std::filesystem::path& path) const;
    static Embedding load(const std::filesystem::path& path);

    void rebuild_index();

private:
    std::unordered_map<std::string, std::size_t> index_;
};

// Skip-gram with negative sampling over sentence token lists. Deterministic
// given the seed when workers == 1. Throws NumericError when the vocabulary
// is empty after the min-count filter.
Embedding train_skipgram(const std::vector<std::vector<std::string>>& sentences,
                         const SkipgramOptions& opt = {});

// u.v / (|u||v|); throws NumericError on zero vectors.
double cosine(const std::vector<double>& u, const std::vector<double>& v);
double cosine(const Embedding& emb, std::size_t i, std::size_t j);

struct TokenScreen {
    std::vector<std::string> anchors{"capacity_discipline", "demand", "gdp"};
    double d_lo = 0.55;
    double d_hi = 0.95;
    double cooccur_min = 0.5;
};

struct ScreenedToken {
    std::string token;
    double mean_similarity = 0.0;
    double cooccurrence = 0.0;  // share of the token's reports that contain all anchors
};

// Tokens whose cosine to every anchor lies in [d_lo, d_hi] and that co-occur
// with all anchors in at least cooccur_min of the reports mentioning them;
// sorted by mean anchor similarity, descending.
std::vector<ScreenedToken> screen_tokens(const Embedding& emb, const TokenScreen& screen,
                                         const std::vector<std::vector<std::string>>& reports);

}  // namespace aircap
