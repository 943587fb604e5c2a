#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aircap/calendar.hpp"
#include "aircap/data.hpp"

namespace aircap::text {

// Lemma stream with sentence structure: sentence[i] is the index of the
// sentence lemma i came from. Phrase matching never crosses sentences.
struct LemmaSeq {
    std::vector<std::string> lemmas;
    std::vector<std::uint32_t> sentence;

    bool contains(const std::string& lemma) const;
    std::string joined() const; // space-joined lemmas (one sentence)
};

// Removes every span spoken by a non-management role. Spans are introduced
// by <<SPEAKER:role>> tags with role in {management, analyst, operator};
// text before the first tag is kept (treated as management).
std::string strip_nonmanagement(const std::string& raw);

// Lowercase, split into sentences on . ? !, tokenize on alphanumeric runs,
// drop stop words, reduce each token to its lemma.
LemmaSeq tokenize_lemmatize(const std::string& raw_text);

// Single-word lemmatizer (input must already be lowercase). Exposed so the
// rule table is testable on its own. Version: kLemmaRulesVersion.
std::string lemmatize_word(const std::string& word);
bool is_stopword(const std::string& word);

inline constexpr std::uint32_t kLemmaRulesVersion = 1;
inline constexpr std::uint32_t kStopwordListVersion = 1;

// 1 iff the phrase occurs as adjacent lemmas inside one sentence.
int flag_phrase(const LemmaSeq& tokens, const std::vector<std::string>& phrase);

// 1 iff "capacity" occurs anywhere and "demand" or "gdp" occurs anywhere.
int cooccurrence_flag(const LemmaSeq& tokens);

// Replaces adjacent (first, second) lemma pairs within a sentence by a
// single merged token; used to give the key bigram its own vector.
LemmaSeq merge_bigram(const LemmaSeq& tokens, const std::string& first,
                      const std::string& second, const std::string& merged);

struct TranscriptRecord {
    std::string carrier;
    YearQuarter yq;
    TranscriptStatus status = TranscriptStatus::Other;
    std::string raw_text; // management speech, empty unless Collected
    LemmaSeq tokens;
    int coded_flag = 0;
};

enum class CodeReason : std::uint8_t {
    PhraseMatch,      // flagged 1 by adjacent-phrase rule
    OverrideApplied,  // a label override decided the flag
    NotCollected,     // no usable transcript, flag 0
    NoSignal,         // collected but no phrase and no override
};

struct CodeOutcome {
    int flag = 0;
    CodeReason reason = CodeReason::NoSignal;
    // Co-occurrence fired without a phrase match or override: the record
    // goes to the manual review queue.
    bool needs_review = false;
};

// Codes one transcript. Overrides are consulted in priority order (default
// Authors > RA > Automatic); the first source with a label for this
// carrier-quarter wins. Without an override the automatic rule is
// phrase-only; co-occurrence-only matches are queued for review.
CodeOutcome code_transcript(const TranscriptRecord& rec,
                            const std::vector<LabelRecord>& overrides,
                            const std::vector<LabelSource>& priority = {
                                LabelSource::Authors, LabelSource::RA, LabelSource::Automatic});

// Default phrase for the communication flag.
const std::vector<std::string>& capacity_discipline_phrase();

} // namespace aircap::text
