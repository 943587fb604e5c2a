#include "aircap/embed.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include "aircap/errors.hpp"
#include "aircap/rng.hpp"

namespace aircap {

std::optional<std::size_t> Embedding::find(const std::string& token) const {
    auto it = index_.find(token);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void Embedding::rebuild_index() {
    index_.clear();
    index_.reserve(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) index_.emplace(vocab[i], i);
}

namespace {

constexpr char kMagic[4] = {'A', 'C', 'E', 'V'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

struct Reader {
    std::ifstream in;
    std::string path;
    explicit Reader(const std::filesystem::path& p) : in(p, std::ios::binary), path(p.string()) {
        if (!in) throw SchemaError("cannot open embedding file " + path);
    }
    void bytes(void* dst, std::size_t n) {
        in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
        if (in.gcount() != static_cast<std::streamsize>(n))
            throw SchemaError("truncated embedding file " + path);
    }
    std::uint32_t u32() {
        unsigned char b[4];
        bytes(b, 4);
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        unsigned char b[8];
        bytes(b, 8);
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }
};

}  // namespace

void Embedding::save(const std::filesystem::path& path) const {
    std::string buf;
    buf.append(kMagic, 4);
    put_u32(buf, kFormatVersion);
    put_u64(buf, vocab.size());
    put_u32(buf, static_cast<std::uint32_t>(dims));
    put_u32(buf, static_cast<std::uint32_t>(window));
    put_u32(buf, static_cast<std::uint32_t>(negatives));
    put_u32(buf, static_cast<std::uint32_t>(epochs));
    put_u64(buf, seed);
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        put_u32(buf, static_cast<std::uint32_t>(vocab[i].size()));
        buf.append(vocab[i]);
        put_u64(buf, counts[i]);
    }
    for (float f : vectors) {
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        put_u32(buf, bits);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw SchemaError("cannot write embedding file " + path.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw SchemaError("write failed for embedding file " + path.string());
}

Embedding Embedding::load(const std::filesystem::path& path) {
    Reader r(path);
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw SchemaError("bad magic in embedding file " + path.string());
    const auto version = r.u32();
    if (version != kFormatVersion)
        throw SchemaError("unsupported embedding format version " + std::to_string(version));
    Embedding e;
    const std::uint64_t v = r.u64();
    e.dims = static_cast<int>(r.u32());
    e.window = static_cast<int>(r.u32());
    e.negatives = static_cast<int>(r.u32());
    e.epochs = static_cast<int>(r.u32());
    e.seed = r.u64();
    if (e.dims < 2) throw SchemaError("embedding file has dims < 2");
    e.vocab.resize(v);
    e.counts.resize(v);
    for (std::uint64_t i = 0; i < v; ++i) {
        const auto len = r.u32();
        if (len > 1u << 20) throw SchemaError("oversized token in embedding file");
        e.vocab[i].resize(len);
        if (len) r.bytes(e.vocab[i].data(), len);
        e.counts[i] = r.u64();
    }
    e.vectors.resize(v * static_cast<std::size_t>(e.dims));
    for (auto& f : e.vectors) {
        const auto bits = r.u32();
        std::memcpy(&f, &bits, 4);
    }
    e.rebuild_index();
    return e;
}

namespace {

// Cumulative unigram^0.75 table; negatives drawn by binary search.
struct NegativeTable {
    std::vector<double> cum;
    std::size_t sample(Rng& rng) const {
        const double u = rng.uniform() * cum.back();
        return static_cast<std::size_t>(
            std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    }
};

struct TrainPlan {
    std::vector<std::vector<std::int32_t>> sentences;  // token ids, -1 never stored
    std::vector<double> keep_prob;                     // subsampling survival per token
    NegativeTable negatives;
    std::uint64_t planned_words = 0;  // epochs * total kept-vocab tokens
};

}  // namespace

Embedding train_skipgram(const std::vector<std::vector<std::string>>& sentences,
                         const SkipgramOptions& opt) {
    if (opt.dims < 2) throw ConfigError("train_skipgram: dims must be >= 2");
    if (opt.window < 1 || opt.negatives < 0 || opt.epochs < 1 || opt.lr <= 0.0)
        throw ConfigError("train_skipgram: invalid training options");

    std::map<std::string, std::uint64_t> freq;
    for (const auto& s : sentences)
        for (const auto& tok : s) ++freq[tok];

    std::vector<std::pair<std::string, std::uint64_t>> kept;
    for (const auto& [tok, n] : freq)
        if (n >= static_cast<std::uint64_t>(opt.min_count)) kept.emplace_back(tok, n);
    if (kept.empty()) throw NumericError("train_skipgram: empty vocabulary after min-count filter");
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });

    Embedding emb;
    emb.dims = opt.dims;
    emb.window = opt.window;
    emb.negatives = opt.negatives;
    emb.epochs = opt.epochs;
    emb.seed = opt.seed;
    emb.vocab.reserve(kept.size());
    emb.counts.reserve(kept.size());
    for (auto& [tok, n] : kept) {
        emb.vocab.push_back(tok);
        emb.counts.push_back(n);
    }
    emb.rebuild_index();
    const std::size_t V = emb.vocab.size();
    const std::size_t D = static_cast<std::size_t>(opt.dims);

    TrainPlan plan;
    std::uint64_t total_tokens = 0;
    for (auto n : emb.counts) total_tokens += n;
    plan.keep_prob.assign(V, 1.0);
    if (opt.subsample > 0.0) {
        for (std::size_t i = 0; i < V; ++i) {
            const double f = static_cast<double>(emb.counts[i]) / static_cast<double>(total_tokens);
            const double p = (std::sqrt(f / opt.subsample) + 1.0) * (opt.subsample / f);
            plan.keep_prob[i] = std::min(p, 1.0);
        }
    }
    plan.negatives.cum.resize(V);
    double acc = 0.0;
    for (std::size_t i = 0; i < V; ++i) {
        acc += std::pow(static_cast<double>(emb.counts[i]), 0.75);
        plan.negatives.cum[i] = acc;
    }
    plan.sentences.reserve(sentences.size());
    for (const auto& s : sentences) {
        std::vector<std::int32_t> ids;
        ids.reserve(s.size());
        for (const auto& tok : s)
            if (auto i = emb.find(tok)) ids.push_back(static_cast<std::int32_t>(*i));
        if (!ids.empty()) plan.sentences.push_back(std::move(ids));
    }
    plan.planned_words =
        static_cast<std::uint64_t>(opt.epochs) * std::max<std::uint64_t>(total_tokens, 1);

    emb.vectors.resize(V * D);
    {
        Rng init(Rng::derive(opt.seed, 0));
        for (auto& f : emb.vectors)
            f = static_cast<float>((init.uniform() - 0.5) / static_cast<double>(opt.dims));
    }
    std::vector<float> out(V * D, 0.0f);

    std::atomic<std::uint64_t> words_done{0};
    const double min_alpha_factor = 1e-4;

    auto train_range = [&](std::size_t lo, std::size_t hi, std::uint64_t stream) {
        Rng rng(Rng::derive(opt.seed, stream));
        std::vector<std::int32_t> sen;
        std::vector<double> grad_in(D);
        for (int epoch = 0; epoch < opt.epochs; ++epoch) {
            for (std::size_t si = lo; si < hi; ++si) {
                const auto& ids = plan.sentences[si];
                sen.clear();
                for (auto id : ids) {
                    if (plan.keep_prob[static_cast<std::size_t>(id)] < 1.0 &&
                        rng.uniform() > plan.keep_prob[static_cast<std::size_t>(id)])
                        continue;
                    sen.push_back(id);
                }
                words_done.fetch_add(ids.size(), std::memory_order_relaxed);
                const double progress = std::min(
                    1.0, static_cast<double>(words_done.load(std::memory_order_relaxed)) /
                             static_cast<double>(plan.planned_words));
                const double alpha = opt.lr * std::max(1.0 - progress, min_alpha_factor);

                for (std::size_t pos = 0; pos < sen.size(); ++pos) {
                    const auto center = static_cast<std::size_t>(sen[pos]);
                    const auto reduced =
                        static_cast<std::size_t>(1 + rng.uniform_int(opt.window));
                    const std::size_t from = pos >= reduced ? pos - reduced : 0;
                    const std::size_t to = std::min(sen.size() - 1, pos + reduced);
                    for (std::size_t cpos = from; cpos <= to; ++cpos) {
                        if (cpos == pos) continue;
                        const auto context = static_cast<std::size_t>(sen[cpos]);
                        float* v_in = emb.vectors.data() + context * D;
                        std::fill(grad_in.begin(), grad_in.end(), 0.0);
                        for (int neg = 0; neg <= opt.negatives; ++neg) {
                            std::size_t target;
                            double label;
                            if (neg == 0) {
                                target = center;
                                label = 1.0;
                            } else {
                                target = plan.negatives.sample(rng);
                                if (target == center) continue;
                                label = 0.0;
                            }
                            float* v_out = out.data() + target * D;
                            double dot = 0.0;
                            for (std::size_t d = 0; d < D; ++d) dot += v_in[d] * v_out[d];
                            const double g = (label - 1.0 / (1.0 + std::exp(-dot))) * alpha;
                            for (std::size_t d = 0; d < D; ++d) {
                                grad_in[d] += g * v_out[d];
                                v_out[d] += static_cast<float>(g * v_in[d]);
                            }
                        }
                        for (std::size_t d = 0; d < D; ++d)
                            v_in[d] += static_cast<float>(grad_in[d]);
                    }
                }
            }
        }
    };

    const int workers = std::max(1, opt.workers);
    if (workers == 1 || plan.sentences.size() < 2) {
        train_range(0, plan.sentences.size(), 1);
    } else {
        const std::size_t n = plan.sentences.size();
        const std::size_t per = (n + workers - 1) / static_cast<std::size_t>(workers);
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            const std::size_t lo = std::min(n, static_cast<std::size_t>(w) * per);
            const std::size_t hi = std::min(n, lo + per);
            if (lo < hi) pool.emplace_back(train_range, lo, hi, static_cast<std::uint64_t>(w + 1));
        }
        for (auto& t : pool) t.join();
    }

    for (float f : emb.vectors)
        if (!std::isfinite(f)) throw NumericError("train_skipgram: non-finite vector entry");
    return emb;
}

double cosine(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size() || u.empty()) throw NumericError("cosine: dimension mismatch");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) throw NumericError("cosine: zero vector");
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

double cosine(const Embedding& emb, std::size_t i, std::size_t j) {
    const std::size_t D = static_cast<std::size_t>(emb.dims);
    const float* a = emb.row(i);
    const float* b = emb.row(j);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t d = 0; d < D; ++d) {
        dot += static_cast<double>(a[d]) * b[d];
        na += static_cast<double>(a[d]) * a[d];
        nb += static_cast<double>(b[d]) * b[d];
    }
    if (na == 0.0 || nb == 0.0) throw NumericError("cosine: zero vector");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<ScreenedToken> screen_tokens(const Embedding& emb, const TokenScreen& screen,
                                         const std::vector<std::vector<std::string>>& reports) {
    if (screen.d_lo > screen.d_hi) throw ConfigError("screen_tokens: d_lo > d_hi");
    std::vector<std::size_t> anchor_ids;
    for (const auto& a : screen.anchors) {
        auto i = emb.find(a);
        if (!i) throw NumericError("screen_tokens: anchor " + a + " not in vocabulary");
        anchor_ids.push_back(*i);
    }
    if (anchor_ids.empty()) throw ConfigError("screen_tokens: no anchors");

    std::vector<std::set<std::string>> rep_sets;
    rep_sets.reserve(reports.size());
    for (const auto& r : reports) rep_sets.emplace_back(r.begin(), r.end());

    std::vector<ScreenedToken> out;
    for (std::size_t t = 0; t < emb.vocab.size(); ++t) {
        if (std::find(anchor_ids.begin(), anchor_ids.end(), t) != anchor_ids.end()) continue;
        double mean = 0.0;
        bool in_band = true;
        for (auto a : anchor_ids) {
            const double c = cosine(emb, t, a);
            if (c < screen.d_lo || c > screen.d_hi) {
                in_band = false;
                break;
            }
            mean += c;
        }
        if (!in_band) continue;
        mean /= static_cast<double>(anchor_ids.size());

        std::size_t with_token = 0, with_all = 0;
        for (const auto& rs : rep_sets) {
            if (!rs.count(emb.vocab[t])) continue;
            ++with_token;
            bool all = true;
            for (const auto& a : screen.anchors)
                if (!rs.count(a)) {
                    all = false;
                    break;
                }
            if (all) ++with_all;
        }
        if (with_token == 0) continue;
        const double cooc = static_cast<double>(with_all) / static_cast<double>(with_token);
        if (cooc < screen.cooccur_min) continue;
        out.push_back({emb.vocab[t], mean, cooc});
    }
    std::sort(out.begin(), out.end(), [](const ScreenedToken& a, const ScreenedToken& b) {
        return a.mean_similarity != b.mean_similarity ? a.mean_similarity > b.mean_similarity
                                                      : a.token < b.token;
    });
    return out;
}

}  // namespace aircap
