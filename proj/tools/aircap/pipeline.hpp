#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aircap/data.hpp"
#include "aircap/panel.hpp"
#include "aircap/textproc.hpp"
#include "run_config.hpp"

namespace aircap::cli {

void require_path(const std::string& value, const std::string& flag);

// Segment records after optional city aggregation and fringe pooling.
std::vector<SegmentRecord> load_segments_cfg(const RunConfig& cfg);

struct CodedRecord {
    std::string carrier;
    YearQuarter yq;
    bool collected = false;
    int flag = 0;
    text::CodeReason reason = text::CodeReason::NotCollected;
    bool needs_review = false;
};

struct CodedTranscripts {
    FlagMap flags;
    std::vector<CodedRecord> rows;
    // management lemmas per collected transcript, bigram-merged; row order
    // follows `rows` restricted to collected records
    std::vector<text::LemmaSeq> tokens;
};

// Codes every status entry. When `ztoken` is set the flag is pure token
// containment (no phrase rule, no overrides).
CodedTranscripts code_all_transcripts(const RunConfig& cfg,
                                      const std::optional<std::string>& ztoken = {});

Panel build_panel_cfg(const RunConfig& cfg, const std::vector<SegmentRecord>& segments,
                      const FlagMap& flags);

// Convenience: segments + coding + panel in one step, honoring a z-token
// treatment in the config.
Panel load_panel(const RunConfig& cfg);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace aircap::cli
