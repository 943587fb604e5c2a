#pragma once

#include <filesystem>

#include "aircap/synth.hpp"

namespace aircap {

// Locations of the files one fixture directory holds.
struct FixturePaths {
    std::filesystem::path segments;
    std::filesystem::path status;
    std::filesystem::path labels;
    std::filesystem::path transcripts;  // directory
    std::filesystem::path cities;
    std::filesystem::path coordinates;
    std::filesystem::path populations;
    std::filesystem::path ontime;
    std::filesystem::path fares;
    std::filesystem::path truth;
};

FixturePaths fixture_paths(const std::filesystem::path& dir);

// Writes a complete ingestible data set for the generated panel: every CSV
// the pipeline consumes plus earnings-call transcripts whose coded flags
// reproduce the generator's exactly. Byte-deterministic given the DGP.
FixturePaths write_fixture(const GeneratedPanel& g, const std::filesystem::path& dir);

}  // namespace aircap
