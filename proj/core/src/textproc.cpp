#include "aircap/textproc.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace aircap::text {

namespace {

// Compact standard English stop-word list. Domain vocabulary (capacity,
// demand, discipline, ...) is deliberately absent. Sorted for binary search.
constexpr std::array<const char*, 182> kStopwords = {
    "a",        "about",   "above",   "after",    "again",      "against",
    "all",      "also",    "am",      "among",    "an",         "and",
    "any",      "anyone",  "are",     "aren",     "around",     "as",
    "at",       "back",    "be",      "because",  "been",       "before",
    "being",    "below",   "between", "both",     "but",        "by",
    "can",      "cannot",  "come",    "comes",    "could",      "d",
    "did",      "do",      "does",    "doing",    "don",        "down",
    "during",   "each",    "either",  "else",     "ever",       "every",
    "few",      "for",     "from",    "further",  "get",        "gets",
    "getting",  "give",    "go",      "goes",     "going",      "got",
    "had",      "has",     "have",    "having",   "he",         "her",
    "here",     "hers",    "herself", "him",      "himself",    "his",
    "how",      "i",       "if",      "in",       "into",       "is",
    "it",       "its",     "itself",  "just",     "ll",         "m",
    "many",     "may",     "me",      "might",    "more",       "most",
    "much",     "must",    "my",      "myself",   "need",       "never",
    "next",     "no",      "nor",     "not",      "now",        "o",
    "of",       "off",     "often",   "on",       "once",       "one",
    "only",     "or",      "other",   "our",      "ours",       "ourselves",
    "out",      "over",    "own",     "per",      "quite",      "rather",
    "re",       "really",  "s",       "same",     "shall",      "she",
    "should",   "since",   "so",      "some",     "still",      "such",
    "t",        "than",    "that",    "the",      "their",      "theirs",
    "them",     "themselves", "then", "there",    "these",      "they",
    "thing",    "things",  "this",    "those",    "through",    "to",
    "too",      "under",   "until",   "up",       "us",         "used",
    "using",    "ve",      "very",    "want",     "was",        "we",
    "well",     "were",    "what",    "when",     "where",      "which",
    "while",    "who",     "whom",    "why",      "will",       "with",
    "won",      "would",   "yet",     "you",      "your",       "yours",
    "yourself", "yourselves",
};

// Irregular or protected forms the suffix rules would mangle.
struct Exception {
    const char* from;
    const char* to;
};
constexpr std::array<Exception, 40> kExceptions = {{
    {"aircraft", "aircraft"},
    {"airbus", "airbus"},
    {"boeing", "boeing"},
    {"morning", "morning"},
    {"evening", "evening"},
    {"said", "say"},
    {"says", "say"},
    {"saw", "see"},
    {"seen", "see"},
    {"flew", "fly"},
    {"flown", "fly"},
    {"grew", "grow"},
    {"grown", "grow"},
    {"fell", "fall"},
    {"fallen", "fall"},
    {"rose", "rise"},
    {"risen", "rise"},
    {"took", "take"},
    {"taken", "take"},
    {"made", "make"},
    {"heard", "hear"},
    {"increased", "increase"},
    {"increasing", "increase"},
    {"decreased", "decrease"},
    {"decreasing", "decrease"},
    {"pleased", "please"},
    {"men", "man"},
    {"visited", "visit"},
    {"visiting", "visit"},
    {"limited", "limit"},
    {"limiting", "limit"},
    {"exited", "exit"},
    {"exiting", "exit"},
    {"audited", "audit"},
    {"auditing", "audit"},
    {"benefited", "benefit"},
    {"benefiting", "benefit"},
    {"focused", "focus"},
    {"focusing", "focus"},
    {"marketing", "marketing"},
}};

bool is_vowel(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool has_vowel(const std::string& s) {
    return std::any_of(s.begin(), s.end(), [](char c) { return is_vowel(c); });
}

bool ends_with(const std::string& s, const char* suffix) {
    const std::size_t n = std::char_traits<char>::length(suffix);
    return s.size() >= n && s.compare(s.size() - n, n, suffix) == 0;
}

// Consonant-vowel-consonant tail where the final consonant is not w/x/y;
// such stems usually lost a silent e to the suffix. Tails like -er/-en/-el
// (offer, open, travel) belong to unstressed-final verbs that never had
// one, so they are skipped.
bool cvc_tail(const std::string& s) {
    if (s.size() < 3) return false;
    const char c1 = s[s.size() - 3], c2 = s[s.size() - 2], c3 = s[s.size() - 1];
    if (is_vowel(c1) || !is_vowel(c2) || is_vowel(c3)) return false;
    if (c3 == 'w' || c3 == 'x' || c3 == 'y') return false;
    if (c2 == 'e' && (c3 == 'r' || c3 == 'n' || c3 == 'l')) return false;
    return true;
}

// Spelling-driven restores: bare soft c/v/z and bare u never end an English
// verb stem (announce, involve, analyze, continue), nor does consonant+l
// (double, settle) or -uir (require).
bool needs_silent_e(const std::string& s) {
    if (s.empty()) return false;
    const char last = s.back();
    if (last == 'c' || last == 'v' || last == 'u') return true;
    if (last == 'z' && (s.size() < 2 || s[s.size() - 2] != 'z')) return true;
    if (last == 'l' && s.size() >= 2) {
        const char prev = s[s.size() - 2];
        if (!is_vowel(prev) && prev != 'l' && prev != 'r' && prev != 'w') return true;
    }
    if (ends_with(s, "uir")) return true;
    return cvc_tail(s);
}

// Undo consonant doubling (planning -> plann -> plan); l/s/z doubles stay.
void fix_after_strip(std::string& s) {
    if (s.size() >= 2 && s[s.size() - 1] == s[s.size() - 2]) {
        const char c = s.back();
        if (!is_vowel(c) && c != 'l' && c != 's' && c != 'z') {
            s.pop_back();
            return;
        }
    }
    if (needs_silent_e(s)) s.push_back('e');
}

std::string strip_plural(std::string w) {
    if (w.size() < 3 || w.back() != 's') return w;
    if (ends_with(w, "sses")) return w.substr(0, w.size() - 2);
    if (ends_with(w, "ies") && w.size() >= 5) return w.substr(0, w.size() - 3) + "y";
    if (ends_with(w, "xes") || ends_with(w, "ches") || ends_with(w, "shes") ||
        ends_with(w, "zzes")) {
        return w.substr(0, w.size() - 2);
    }
    if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is")) return w;
    if (w.size() - 1 < 3) return w;
    return w.substr(0, w.size() - 1);
}

std::string strip_inflection(std::string w) {
    if (ends_with(w, "ied") && w.size() >= 5) {
        return w.substr(0, w.size() - 3) + "y";
    }
    if (ends_with(w, "eed")) {
        std::string stem = w.substr(0, w.size() - 3);
        if (has_vowel(stem)) return stem + "ee";
        return w;
    }
    if (ends_with(w, "ed")) {
        std::string stem = w.substr(0, w.size() - 2);
        if (stem.size() >= 3 && has_vowel(stem)) {
            fix_after_strip(stem);
            return stem;
        }
        return w;
    }
    if (ends_with(w, "ing")) {
        std::string stem = w.substr(0, w.size() - 3);
        if (stem.size() >= 3 && has_vowel(stem)) {
            fix_after_strip(stem);
            return stem;
        }
        return w;
    }
    return w;
}

bool has_digit(const std::string& s) {
    return std::any_of(s.begin(), s.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

enum class Role { Management, Analyst, Operator };

Role role_from_tag(const std::string& tag) {
    if (tag == "analyst") return Role::Analyst;
    if (tag == "operator") return Role::Operator;
    return Role::Management; // unknown roles kept, conservative
}

} // namespace

bool LemmaSeq::contains(const std::string& lemma) const {
    return std::find(lemmas.begin(), lemmas.end(), lemma) != lemmas.end();
}

std::string LemmaSeq::joined() const {
    std::string out;
    for (std::size_t i = 0; i < lemmas.size(); ++i) {
        if (i) out += ' ';
        out += lemmas[i];
    }
    return out;
}

std::string strip_nonmanagement(const std::string& raw) {
    static const std::string kOpen = "<<SPEAKER:";
    std::string out;
    Role current = Role::Management;
    std::size_t pos = 0;
    while (pos < raw.size()) {
        const std::size_t tag = raw.find(kOpen, pos);
        const std::size_t span_end = (tag == std::string::npos) ? raw.size() : tag;
        if (current == Role::Management) {
            out.append(raw, pos, span_end - pos);
        }
        if (tag == std::string::npos) break;
        const std::size_t close = raw.find(">>", tag);
        if (close == std::string::npos) break; // malformed trailing tag: drop rest
        std::string role = raw.substr(tag + kOpen.size(), close - tag - kOpen.size());
        std::transform(role.begin(), role.end(), role.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        current = role_from_tag(role);
        pos = close + 2;
    }
    return out;
}

std::string lemmatize_word(const std::string& word) {
    if (word.empty() || has_digit(word)) return word;
    for (const auto& e : kExceptions) {
        if (word == e.from) return e.to;
    }
    std::string w = strip_plural(word);
    for (const auto& e : kExceptions) {
        if (w == e.from) return e.to;
    }
    return strip_inflection(std::move(w));
}

bool is_stopword(const std::string& word) {
    return std::binary_search(kStopwords.begin(), kStopwords.end(), word,
                              [](const auto& a, const auto& b) {
                                  return std::string_view(a) < std::string_view(b);
                              });
}

LemmaSeq tokenize_lemmatize(const std::string& raw_text) {
    LemmaSeq out;
    std::uint32_t sentence = 0;
    bool sentence_used = false;
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        if (!is_stopword(token)) {
            std::string lemma = lemmatize_word(token);
            if (!lemma.empty() && !is_stopword(lemma)) {
                out.lemmas.push_back(std::move(lemma));
                out.sentence.push_back(sentence);
                sentence_used = true;
            }
        }
        token.clear();
    };
    for (char raw : raw_text) {
        const auto c = static_cast<unsigned char>(raw);
        if (std::isalnum(c)) {
            token.push_back(static_cast<char>(std::tolower(c)));
            continue;
        }
        flush();
        if (raw == '.' || raw == '?' || raw == '!') {
            if (sentence_used) {
                ++sentence;
                sentence_used = false;
            }
        }
    }
    flush();
    return out;
}

int flag_phrase(const LemmaSeq& tokens, const std::vector<std::string>& phrase) {
    if (phrase.empty() || tokens.lemmas.size() < phrase.size()) return 0;
    for (std::size_t i = 0; i + phrase.size() <= tokens.lemmas.size(); ++i) {
        if (tokens.sentence[i] != tokens.sentence[i + phrase.size() - 1]) continue;
        bool match = true;
        for (std::size_t k = 0; k < phrase.size(); ++k) {
            if (tokens.lemmas[i + k] != phrase[k]) {
                match = false;
                break;
            }
        }
        if (match) return 1;
    }
    return 0;
}

int cooccurrence_flag(const LemmaSeq& tokens) {
    const bool cap = tokens.contains("capacity");
    if (!cap) return 0;
    return (tokens.contains("demand") || tokens.contains("gdp")) ? 1 : 0;
}

LemmaSeq merge_bigram(const LemmaSeq& tokens, const std::string& first,
                      const std::string& second, const std::string& merged) {
    LemmaSeq out;
    out.lemmas.reserve(tokens.lemmas.size());
    out.sentence.reserve(tokens.sentence.size());
    std::size_t i = 0;
    while (i < tokens.lemmas.size()) {
        if (i + 1 < tokens.lemmas.size() && tokens.lemmas[i] == first &&
            tokens.lemmas[i + 1] == second && tokens.sentence[i] == tokens.sentence[i + 1]) {
            out.lemmas.push_back(merged);
            out.sentence.push_back(tokens.sentence[i]);
            i += 2;
        } else {
            out.lemmas.push_back(tokens.lemmas[i]);
            out.sentence.push_back(tokens.sentence[i]);
            ++i;
        }
    }
    return out;
}

CodeOutcome code_transcript(const TranscriptRecord& rec,
                            const std::vector<LabelRecord>& overrides,
                            const std::vector<LabelSource>& priority) {
    CodeOutcome out;
    if (rec.status != TranscriptStatus::Collected) {
        out.flag = 0;
        out.reason = CodeReason::NotCollected;
        return out;
    }
    for (LabelSource source : priority) {
        for (const auto& o : overrides) {
            if (o.source == source && o.carrier == rec.carrier && o.yq == rec.yq) {
                out.flag = o.label;
                out.reason = CodeReason::OverrideApplied;
                return out;
            }
        }
    }
    if (flag_phrase(rec.tokens, capacity_discipline_phrase())) {
        out.flag = 1;
        out.reason = CodeReason::PhraseMatch;
        return out;
    }
    out.flag = 0;
    out.reason = CodeReason::NoSignal;
    out.needs_review = cooccurrence_flag(rec.tokens) == 1;
    return out;
}

const std::vector<std::string>& capacity_discipline_phrase() {
    static const std::vector<std::string> kPhrase = {"capacity", "discipline"};
    return kPhrase;
}

} // namespace aircap::text
