#pragma once

#include <string>
#include <utility>
#include <vector>

#include "horolab/config.hpp"

namespace horolab {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunManifest {
    ExperimentConfig config;
    std::string tool_version;
    std::string config_hash; // git-style hash of the canonical config
    double wall_time_s = 0.0;
    std::vector<std::pair<std::string, std::string>> outputs; // file name -> git hash
    Json summary;

    std::string to_json_text() const;
};

/// Executes one experiment: validates the config strictly, computes, writes
/// every declared output under config.output_dir, then the manifest last
/// (atomic rename). Identical config+seed produce byte-identical CSV and SVG
/// outputs.
RunManifest run(const ExperimentConfig& config);

} // namespace horolab
