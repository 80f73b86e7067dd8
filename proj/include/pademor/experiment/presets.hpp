#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pademor/experiment/config.hpp"

namespace pademor::experiment {

// name -> file stem; section aliases point at the same files
inline const std::map<std::string, std::string>& preset_table() {
    static const std::map<std::string, std::string> t = {
        {"transmission", "transmission"}, {"section4", "transmission"},
        {"scattering", "scattering"},     {"section5", "scattering"},
        {"high_frequency", "high_frequency"}, {"section6", "high_frequency"},
        {"stochastic", "stochastic"},     {"section7", "stochastic"},
    };
    return t;
}

inline std::filesystem::path preset_path(const std::string& name, const std::filesystem::path& dir) {
    const auto& t = preset_table();
    const auto it = t.find(name);
    if (it == t.end()) {
        std::string known;
        for (const auto& [k, v] : t) known += (known.empty() ? "" : ", ") + k;
        throw ConfigError("preset", "unknown preset '" + name + "' (known: " + known + ")");
    }
    return dir / (it->second + ".json");
}

inline json read_json_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("<file>", "cannot open " + p.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", p.string() + " is not valid JSON: " + e.what());
    }
}

}  // namespace pademor::experiment
