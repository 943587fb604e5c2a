#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "aircap/embed.hpp"
#include "aircap/errors.hpp"
#include "aircap/rng.hpp"
#include "aircap/synth.hpp"

using namespace aircap;

namespace {

SkipgramOptions small_opts(std::uint64_t seed) {
    SkipgramOptions o;
    o.dims = 24;
    o.window = 3;
    o.negatives = 4;
    o.epochs = 8;
    o.min_count = 2;
    o.subsample = 0.0;
    o.seed = seed;
    return o;
}

double pair_cosine(const Embedding& e, const std::string& a, const std::string& b) {
    const auto i = e.find(a), j = e.find(b);
    REQUIRE(i);
    REQUIRE(j);
    return cosine(e, *i, *j);
}

}  // namespace

TEST_SUITE("embed") {

TEST_CASE("cosine reference values") {
    CHECK(std::abs(cosine({5, 0}, {-8, 8}) - (-0.707)) <= 1e-3);
    CHECK(cosine({3, 4}, {3, 4}) == doctest::Approx(1.0));
    CHECK(cosine({1, 0}, {0, 1}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(cosine({0, 0}, {1, 1}), NumericError);
}

TEST_CASE("cosine symmetry and scale invariance") {
    const std::vector<double> u{1.5, -2.0, 0.25}, v{0.5, 3.0, -1.0};
    CHECK(cosine(u, v) == doctest::Approx(cosine(v, u)));
    const std::vector<double> u3{4.5, -6.0, 0.75};  // 3u
    CHECK(cosine(u3, v) == doctest::Approx(cosine(u, v)));
}

TEST_CASE("degenerate one-token corpus trains") {
    std::vector<std::vector<std::string>> sentences(5, std::vector<std::string>(6, "seat"));
    auto o = small_opts(1);
    o.min_count = 1;
    const auto e = train_skipgram(sentences, o);
    CHECK(e.vocab == std::vector<std::string>{"seat"});
}

TEST_CASE("empty vocabulary raises") {
    std::vector<std::vector<std::string>> sentences{{"rare"}};
    CHECK_THROWS_AS(train_skipgram(sentences, small_opts(1)), NumericError);
}

TEST_CASE("training is deterministic given the seed") {
    const auto corpus = gen_corpus({});
    const auto a = train_skipgram(corpus.sentences, small_opts(9));
    const auto b = train_skipgram(corpus.sentences, small_opts(9));
    CHECK(a.vectors == b.vectors);
    CHECK(a.vocab == b.vocab);
}

TEST_CASE("co-occurring tokens embed closer than unrelated ones") {
    CorpusDGP dgp;
    dgp.planted = {{"restraint", 1.0}};
    dgp.seed = 5;
    const auto corpus = gen_corpus(dgp);
    const auto e = train_skipgram(corpus.sentences, small_opts(5));
    CHECK(pair_cosine(e, "capacity_discipline", "restraint") >
          pair_cosine(e, "capacity_discipline", "filler0"));
}

TEST_CASE("disjoint sub-corpora stay near orthogonal") {
    // Two vocabularies that never share a sentence.
    std::vector<std::vector<std::string>> sentences;
    Rng rng(3);
    const std::vector<std::string> va{"alpha", "beta", "gamma", "delta"};
    const std::vector<std::string> vb{"omega", "sigma", "kappa", "lambda"};
    for (int s = 0; s < 400; ++s) {
        const auto& pool = s % 2 == 0 ? va : vb;
        std::vector<std::string> sen;
        for (int w = 0; w < 8; ++w) sen.push_back(pool[rng.uniform_int(pool.size())]);
        sentences.push_back(std::move(sen));
    }
    const auto e = train_skipgram(sentences, small_opts(3));
    double within = 0.0, cross = 0.0;
    int nw = 0, nc = 0;
    for (const auto& a : va)
        for (const auto& b : va)
            if (a < b) {
                within += pair_cosine(e, a, b);
                ++nw;
            }
    for (const auto& a : va)
        for (const auto& b : vb) {
            cross += std::abs(pair_cosine(e, a, b));
            ++nc;
        }
    CHECK(within / nw > cross / nc);
}

TEST_CASE("embedding save and load round-trip") {
    const auto corpus = gen_corpus({});
    const auto e = train_skipgram(corpus.sentences, small_opts(2));
    const auto p = std::filesystem::temp_directory_path() / "aircap_test_embed.bin";
    e.save(p);
    const auto r = Embedding::load(p);
    CHECK(r.vocab == e.vocab);
    CHECK(r.counts == e.counts);
    CHECK(r.vectors == e.vectors);
    CHECK(r.dims == e.dims);
    std::filesystem::remove(p);
}

TEST_CASE("screen keeps the planted neighbor and drops the unplanted") {
    CorpusDGP dgp;
    dgp.planted = {{"restraint", 1.0}, {"unrelated", 0.0}};
    dgp.seed = 8;
    const auto corpus = gen_corpus(dgp);
    const auto e = train_skipgram(corpus.sentences, small_opts(8));

    TokenScreen screen;
    screen.d_lo = 0.05;
    screen.d_hi = 1.0;
    screen.cooccur_min = 0.5;
    const auto out = screen_tokens(e, screen, corpus.reports);

    bool has_planted = false, has_unrelated = false;
    for (const auto& t : out) {
        if (t.token == "restraint") has_planted = true;
        if (t.token == "unrelated") has_unrelated = true;
    }
    CHECK(has_planted);
    CHECK_FALSE(has_unrelated);
}

TEST_CASE("co-occurrence floor separates planted rates") {
    CorpusDGP dgp;
    dgp.planted = {{"often", 0.9}, {"seldom", 0.1}};
    dgp.reports_per_token = 60;
    dgp.seed = 4;
    const auto corpus = gen_corpus(dgp);
    const auto e = train_skipgram(corpus.sentences, small_opts(4));

    TokenScreen screen;
    screen.d_lo = -1.0;
    screen.d_hi = 1.0;
    screen.cooccur_min = 0.5;
    const auto out = screen_tokens(e, screen, corpus.reports);

    bool has_often = false, has_seldom = false;
    for (const auto& t : out) {
        if (t.token == "often") has_often = true;
        if (t.token == "seldom") has_seldom = true;
    }
    CHECK(has_often);
    CHECK_FALSE(has_seldom);
}

TEST_CASE("widening the band never removes tokens") {
    CorpusDGP dgp;
    dgp.planted = {{"restraint", 0.8}};
    dgp.seed = 6;
    const auto corpus = gen_corpus(dgp);
    const auto e = train_skipgram(corpus.sentences, small_opts(6));

    TokenScreen narrow;
    narrow.d_lo = 0.3;
    narrow.d_hi = 0.8;
    narrow.cooccur_min = 0.2;
    TokenScreen wide = narrow;
    wide.d_lo = 0.0;
    wide.d_hi = 1.0;

    const auto small = screen_tokens(e, narrow, corpus.reports);
    const auto big = screen_tokens(e, wide, corpus.reports);
    for (const auto& t : small) {
        bool found = false;
        for (const auto& u : big) found = found || u.token == t.token;
        CHECK(found);
    }
    CHECK(big.size() >= small.size());
}

TEST_CASE("degenerate band at 1 returns nothing") {
    const auto corpus = gen_corpus({});
    const auto e = train_skipgram(corpus.sentences, small_opts(7));
    TokenScreen screen;
    screen.d_lo = 1.0;
    screen.d_hi = 1.0;
    CHECK(screen_tokens(e, screen, corpus.reports).empty());
}

}  // TEST_SUITE
