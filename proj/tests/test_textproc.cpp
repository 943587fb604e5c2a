#include <doctest.h>

#include "aircap/rng.hpp"
#include "aircap/textproc.hpp"

using namespace aircap;
using namespace aircap::text;

TEST_SUITE("textproc") {

TEST_CASE("strip keeps management speech only") {
    const std::string raw =
        "<<SPEAKER:operator>>Welcome everyone.\n"
        "<<SPEAKER:management>>We cut capacity.\n"
        "<<SPEAKER:analyst>>What about fares?\n";
    CHECK(strip_nonmanagement(raw) == "We cut capacity.\n");
}

TEST_CASE("strip of an all-analyst transcript is empty") {
    CHECK(strip_nonmanagement("<<SPEAKER:analyst>>Question one. <<SPEAKER:analyst>>Two.").empty());
}

TEST_CASE("strip keeps text before the first tag") {
    const auto s = strip_nonmanagement("Preamble. <<SPEAKER:analyst>>Dropped. <<SPEAKER:management>>Kept.");
    CHECK(s.find("Preamble.") != std::string::npos);
    CHECK(s.find("Kept.") != std::string::npos);
    CHECK(s.find("Dropped.") == std::string::npos);
}

TEST_CASE("strip preserves management span boundaries") {
    const std::string raw =
        "<<SPEAKER:management>>First span. <<SPEAKER:operator>>Noise. <<SPEAKER:management>>Second.";
    const auto s = strip_nonmanagement(raw);
    CHECK(s.find("First span.") != std::string::npos);
    CHECK(s.find("Second.") != std::string::npos);
    CHECK(s.find("First span.") < s.find("Second."));
    CHECK(s.find("Noise.") == std::string::npos);
}

TEST_CASE("tokenize reduces the reference sentence") {
    const auto t = tokenize_lemmatize("The disciplined airline executive was discussing capacity discipline");
    CHECK(t.lemmas == std::vector<std::string>{"discipline", "airline", "executive", "discuss",
                                               "capacity", "discipline"});
}

TEST_CASE("tokenize handles empty and case-folded input") {
    CHECK(tokenize_lemmatize("").lemmas.empty());
    const auto t = tokenize_lemmatize("Capacities CAPACITY capacity");
    CHECK(t.lemmas == std::vector<std::string>{"capacity", "capacity", "capacity"});
}

TEST_CASE("tokenize records sentence boundaries") {
    const auto t = tokenize_lemmatize("Capacity grows. Demand falls!");
    REQUIRE(t.lemmas.size() == 4);
    CHECK(t.sentence[0] == t.sentence[1]);
    CHECK(t.sentence[2] == t.sentence[3]);
    CHECK(t.sentence[1] != t.sentence[2]);
}

TEST_CASE("tokenize is idempotent on its own output") {
    const char* samples[] = {
        "The disciplined airline executive was discussing capacity discipline",
        "Capacity grows. Demand falls! Does GDP matter?",
        "We reduced seats, planes, and routes during restructuring.",
    };
    for (const char* s : samples) {
        const auto once = tokenize_lemmatize(s);
        const auto twice = tokenize_lemmatize(once.joined());
        CHECK(once.lemmas == twice.lemmas);
    }
}

TEST_CASE("lemmatizer keeps derivational forms intact") {
    CHECK(lemmatize_word("domestically") == "domestically");
    CHECK(lemmatize_word("weakness") == "weakness");
    CHECK(lemmatize_word("capacities") == "capacity");
    CHECK(lemmatize_word("discussing") == "discuss");
}

TEST_CASE("stopwords are dropped, content words kept") {
    CHECK(is_stopword("the"));
    CHECK(is_stopword("was"));
    CHECK_FALSE(is_stopword("capacity"));
}

TEST_CASE("phrase flag needs in-sentence adjacency") {
    const std::vector<std::string> phrase{"capacity", "discipline"};
    LemmaSeq a{{"discuss", "capacity", "discipline"}, {0, 0, 0}};
    LemmaSeq b{{"capacity", "plan", "discipline"}, {0, 0, 0}};
    CHECK(flag_phrase(a, phrase) == 1);
    CHECK(flag_phrase(b, phrase) == 0);
    const auto six = tokenize_lemmatize("The disciplined airline executive was discussing capacity discipline");
    CHECK(flag_phrase(six, phrase) == 1);

    LemmaSeq split{{"discuss", "capacity", "discipline"}, {0, 0, 1}};
    CHECK(flag_phrase(split, phrase) == 0);
}

TEST_CASE("phrase flag implies every phrase lemma occurs") {
    Rng rng(11);
    const std::vector<std::string> pool{"capacity", "discipline", "demand", "seat", "plan"};
    const std::vector<std::string> phrase{"capacity", "discipline"};
    for (int rep = 0; rep < 500; ++rep) {
        LemmaSeq t;
        const auto len = 1 + rng.uniform_int(8);
        for (std::uint64_t i = 0; i < len; ++i) {
            t.lemmas.push_back(pool[rng.uniform_int(pool.size())]);
            t.sentence.push_back(static_cast<std::uint32_t>(rng.uniform_int(2)));
        }
        if (flag_phrase(t, phrase) == 1) {
            for (const auto& p : phrase) CHECK(t.contains(p));
        }
    }
}

TEST_CASE("cooccurrence pairs capacity with demand or gdp") {
    CHECK(cooccurrence_flag({{"capacity", "demand"}, {0, 0}}) == 1);
    CHECK(cooccurrence_flag({{"capacity", "fuel"}, {0, 0}}) == 0);
    CHECK(cooccurrence_flag({{"gdp", "growth", "capacity"}, {0, 0, 0}}) == 1);
    CHECK(cooccurrence_flag({{"demand", "gdp"}, {0, 0}}) == 0);
}

TEST_CASE("merge_bigram joins adjacent pairs within sentences") {
    LemmaSeq t{{"discuss", "capacity", "discipline", "capacity"}, {0, 0, 0, 1}};
    const auto m = merge_bigram(t, "capacity", "discipline", "capacity_discipline");
    CHECK(m.lemmas == std::vector<std::string>{"discuss", "capacity_discipline", "capacity"});
}

TEST_CASE("coding: phrase match without overrides") {
    TranscriptRecord rec;
    rec.carrier = "AA";
    rec.yq = {2010, 1};
    rec.status = TranscriptStatus::Collected;
    rec.tokens = tokenize_lemmatize("We continue to exercise capacity discipline.");
    const auto out = code_transcript(rec, {});
    CHECK(out.flag == 1);
    CHECK(out.reason == CodeReason::PhraseMatch);
    CHECK_FALSE(out.needs_review);
}

TEST_CASE("coding: never 1 for a non-collected record") {
    TranscriptRecord rec;
    rec.carrier = "AA";
    rec.yq = {2010, 1};
    rec.tokens = tokenize_lemmatize("Capacity discipline everywhere.");
    for (auto st : {TranscriptStatus::Bankruptcy, TranscriptStatus::Merger,
                    TranscriptStatus::Private, TranscriptStatus::Other}) {
        rec.status = st;
        const auto out = code_transcript(rec, {{"AA", {2010, 1}, 1, LabelSource::Authors}});
        CHECK(out.flag == 0);
        CHECK(out.reason == CodeReason::NotCollected);
    }
}

TEST_CASE("coding: override decides a cooccurrence-only record") {
    TranscriptRecord rec;
    rec.carrier = "UA";
    rec.yq = {2011, 3};
    rec.status = TranscriptStatus::Collected;
    rec.tokens = tokenize_lemmatize("Capacity tracks demand.");
    const auto out = code_transcript(rec, {{"UA", {2011, 3}, 1, LabelSource::Authors}});
    CHECK(out.flag == 1);
    CHECK(out.reason == CodeReason::OverrideApplied);
    CHECK_FALSE(out.needs_review);
}

TEST_CASE("coding: author labels outrank ra labels") {
    TranscriptRecord rec;
    rec.carrier = "UA";
    rec.yq = {2011, 3};
    rec.status = TranscriptStatus::Collected;
    rec.tokens = tokenize_lemmatize("Nothing notable.");
    const std::vector<LabelRecord> overrides{
        {"UA", {2011, 3}, 0, LabelSource::RA},
        {"UA", {2011, 3}, 1, LabelSource::Authors},
    };
    CHECK(code_transcript(rec, overrides).flag == 1);
}

TEST_CASE("coding: review queue is exactly cooccurrence without phrase or override") {
    TranscriptRecord rec;
    rec.carrier = "DL";
    rec.yq = {2012, 2};
    rec.status = TranscriptStatus::Collected;

    rec.tokens = tokenize_lemmatize("Capacity tracks demand.");
    auto out = code_transcript(rec, {});
    CHECK(out.flag == 0);
    CHECK(out.reason == CodeReason::NoSignal);
    CHECK(out.needs_review);

    // Phrase match wins, no review.
    rec.tokens = tokenize_lemmatize("Capacity discipline matches demand.");
    out = code_transcript(rec, {});
    CHECK(out.flag == 1);
    CHECK_FALSE(out.needs_review);

    // Override short-circuits review.
    rec.tokens = tokenize_lemmatize("Capacity tracks demand.");
    out = code_transcript(rec, {{"DL", {2012, 2}, 0, LabelSource::RA}});
    CHECK_FALSE(out.needs_review);

    // No co-occurrence, no review.
    rec.tokens = tokenize_lemmatize("Fuel costs were higher.");
    out = code_transcript(rec, {});
    CHECK_FALSE(out.needs_review);
}

}  // TEST_SUITE
