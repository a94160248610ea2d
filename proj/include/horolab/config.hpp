#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "horolab/errors.hpp"

namespace horolab {

using Json = nlohmann::json;

/// One experiment: kind selector, seed, output directory and the
/// kind-specific parameter block. Unknown fields are rejected at every
/// level; scientific parameters (sample counts, grids) carry no defaults.
struct ExperimentConfig {
    std::string kind; // cones|equidist|nondiv|growth|count-horospheres|count-flags
    std::uint64_t seed = 0;
    std::string output_dir;
    Json params = Json::object();

    std::string canonical_json() const;
    static ExperimentConfig from_json_text(const std::string& text);
};

/// Strict field extraction: every key must be consumed exactly once and
/// leftovers are an error, so configs round-trip without silent drift.
class FieldReader {
public:
    FieldReader(const Json& j, std::string context);

    double number(const std::string& key);
    std::int64_t integer(const std::string& key);
    std::string text(const std::string& key);
    bool boolean(const std::string& key, std::optional<bool> fallback = std::nullopt);
    std::vector<double> number_array(const std::string& key);
    std::vector<int> int_array(const std::string& key);
    std::optional<double> optional_number(const std::string& key);
    std::optional<std::int64_t> optional_integer(const std::string& key);

    bool has(const std::string& key) const;
    void done() const; // throws InvalidConfig listing unknown keys

private:
    const Json& json_;
    std::string context_;
    std::set<std::string> consumed_;

    const Json& fetch(const std::string& key);
};

} // namespace horolab
