#include "horolab/config.hpp"

namespace horolab {

namespace {

const std::set<std::string> kKinds = {"cones",  "equidist",          "nondiv",
                                      "growth", "count-horospheres", "count-flags"};

} // namespace

std::string ExperimentConfig::canonical_json() const {
    Json j;
    j["kind"] = kind;
    j["seed"] = seed;
    j["output_dir"] = output_dir;
    j["params"] = params;
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InvalidConfig(std::string("config: JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw InvalidConfig("config: top level must be an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "kind" && key != "seed" && key != "output_dir" && key != "params")
            throw InvalidConfig("config: unknown top-level field '" + key + "'");
    }
    ExperimentConfig cfg;
    if (!j.contains("kind") || !j["kind"].is_string())
        throw InvalidConfig("config: 'kind' (string) is required");
    cfg.kind = j["kind"].get<std::string>();
    if (!kKinds.count(cfg.kind)) throw InvalidConfig("config: unknown kind '" + cfg.kind + "'");
    if (!j.contains("seed") || !j["seed"].is_number_unsigned())
        throw InvalidConfig("config: 'seed' (unsigned integer) is required");
    cfg.seed = j["seed"].get<std::uint64_t>();
    if (!j.contains("output_dir") || !j["output_dir"].is_string())
        throw InvalidConfig("config: 'output_dir' (string) is required");
    cfg.output_dir = j["output_dir"].get<std::string>();
    if (!j.contains("params") || !j["params"].is_object())
        throw InvalidConfig("config: 'params' (object) is required");
    cfg.params = j["params"];
    return cfg;
}

FieldReader::FieldReader(const Json& j, std::string context)
    : json_(j), context_(std::move(context)) {
    if (!json_.is_object()) throw InvalidConfig(context_ + ": expected an object");
}

const Json& FieldReader::fetch(const std::string& key) {
    if (!json_.contains(key))
        throw InvalidConfig(context_ + ": missing required field '" + key + "'");
    consumed_.insert(key);
    return json_.at(key);
}

double FieldReader::number(const std::string& key) {
    const Json& v = fetch(key);
    if (!v.is_number()) throw InvalidConfig(context_ + ": field '" + key + "' must be a number");
    return v.get<double>();
}

std::int64_t FieldReader::integer(const std::string& key) {
    const Json& v = fetch(key);
    if (!v.is_number_integer())
        throw InvalidConfig(context_ + ": field '" + key + "' must be an integer");
    return v.get<std::int64_t>();
}

std::string FieldReader::text(const std::string& key) {
    const Json& v = fetch(key);
    if (!v.is_string()) throw InvalidConfig(context_ + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

bool FieldReader::boolean(const std::string& key, std::optional<bool> fallback) {
    if (!json_.contains(key) && fallback) return *fallback;
    const Json& v = fetch(key);
    if (!v.is_boolean()) throw InvalidConfig(context_ + ": field '" + key + "' must be a boolean");
    return v.get<bool>();
}

std::vector<double> FieldReader::number_array(const std::string& key) {
    const Json& v = fetch(key);
    if (!v.is_array() || v.empty())
        throw InvalidConfig(context_ + ": field '" + key + "' must be a nonempty array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number())
            throw InvalidConfig(context_ + ": field '" + key + "' must contain numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<int> FieldReader::int_array(const std::string& key) {
    const Json& v = fetch(key);
    if (!v.is_array())
        throw InvalidConfig(context_ + ": field '" + key + "' must be an array");
    std::vector<int> out;
    for (const auto& e : v) {
        if (!e.is_number_integer())
            throw InvalidConfig(context_ + ": field '" + key + "' must contain integers");
        out.push_back(e.get<int>());
    }
    return out;
}

std::optional<double> FieldReader::optional_number(const std::string& key) {
    if (!json_.contains(key)) return std::nullopt;
    return number(key);
}

std::optional<std::int64_t> FieldReader::optional_integer(const std::string& key) {
    if (!json_.contains(key)) return std::nullopt;
    return integer(key);
}

bool FieldReader::has(const std::string& key) const { return json_.contains(key); }

void FieldReader::done() const {
    for (const auto& [key, value] : json_.items()) {
        (void)value;
        if (!consumed_.count(key))
            throw InvalidConfig(context_ + ": unknown field '" + key + "'");
    }
}

} // namespace horolab
