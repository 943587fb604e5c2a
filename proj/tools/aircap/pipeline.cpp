#include "pipeline.hpp"

#include <fstream>
#include <sstream>

#include "aircap/driver.hpp"
#include "aircap/errors.hpp"

namespace aircap::cli {

void require_path(const std::string& value, const std::string& flag) {
    if (value.empty()) throw ConfigError("missing required path: --" + flag);
    if (!std::filesystem::exists(value))
        throw ConfigError("--" + flag + ": '" + value + "' does not exist");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<SegmentRecord> load_segments_cfg(const RunConfig& cfg) {
    require_path(cfg.segments, "segments");
    std::vector<SegmentRecord> segments = load_segments(cfg.segments);
    if (cfg.granularity == "city") {
        require_path(cfg.cities, "cities");
        segments = to_city_segments(segments, load_city_map(cfg.cities));
    } else if (cfg.granularity != "airport") {
        throw ConfigError("unknown granularity '" + cfg.granularity + "'");
    }
    return segments;
}

CodedTranscripts code_all_transcripts(const RunConfig& cfg,
                                      const std::optional<std::string>& ztoken) {
    require_path(cfg.status, "status");
    require_path(cfg.transcripts, "transcripts");
    const auto statuses = load_status(cfg.status);
    std::vector<LabelRecord> labels;
    if (!cfg.labels.empty()) {
        require_path(cfg.labels, "labels");
        labels = load_labels(cfg.labels);
    }

    CodedTranscripts out;
    for (const auto& st : statuses) {
        text::TranscriptRecord rec;
        rec.carrier = st.carrier;
        rec.yq = st.yq;
        rec.status = st.status;
        const bool collected = st.status == TranscriptStatus::Collected;
        if (collected) {
            const auto path = std::filesystem::path(cfg.transcripts) /
                              (st.carrier + "_" + st.yq.str() + ".txt");
            if (!std::filesystem::exists(path))
                throw SchemaError("status lists " + st.carrier + " " + st.yq.str() +
                                  " as collected but '" + path.string() + "' is missing");
            rec.raw_text = text::strip_nonmanagement(read_text_file(path));
            rec.tokens = text::tokenize_lemmatize(rec.raw_text);
        }

        CodedRecord row{st.carrier, st.yq, collected, 0, text::CodeReason::NotCollected, false};
        if (ztoken) {
            row.flag = collected && rec.tokens.contains(*ztoken) ? 1 : 0;
            row.reason = collected ? (row.flag ? text::CodeReason::PhraseMatch
                                               : text::CodeReason::NoSignal)
                                   : text::CodeReason::NotCollected;
        } else {
            std::vector<LabelRecord> overrides;
            for (const auto& l : labels)
                if (l.carrier == st.carrier && l.yq == st.yq) overrides.push_back(l);
            const auto coded = text::code_transcript(rec, overrides);
            row.flag = coded.flag;
            row.reason = coded.reason;
            row.needs_review = coded.needs_review;
        }
        out.flags[{st.carrier, st.yq}] = CarrierQuarterFlag{collected, row.flag};
        out.rows.push_back(row);
        if (collected) {
            const auto& phrase = text::capacity_discipline_phrase();
            out.tokens.push_back(
                text::merge_bigram(rec.tokens, phrase[0], phrase[1], "capacity_discipline"));
        }
    }
    return out;
}

Panel build_panel_cfg(const RunConfig& cfg, const std::vector<SegmentRecord>& segments,
                      const FlagMap& flags) {
    PanelBuildOptions opt;
    opt.mode = alignment_from_string(cfg.alignment);
    opt.min_monthly_flights = cfg.min_monthly_flights;
    opt.fringe_threshold = cfg.fringe_threshold;
    return build_panel(segments, flags, CarrierRegistry::standard(), opt);
}

Panel load_panel(const RunConfig& cfg) {
    const auto segments = load_segments_cfg(cfg);
    const TreatmentVariant tv = treatment_from_string(cfg.treatment);
    std::optional<std::string> ztoken;
    if (tv.kind == TreatmentVariant::Kind::ZToken) ztoken = tv.token;
    const auto coded = code_all_transcripts(cfg, ztoken);
    return build_panel_cfg(cfg, segments, coded.flags);
}

}  // namespace aircap::cli
