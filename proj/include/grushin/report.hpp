#pragma once

#include <map>
#include <optional>
#include <string>

#include "json.hpp"

namespace grushin {

// Signed inequality check. margin > 0 means the inequality holds with room to spare.
struct Check {
    double value = 0.0;
    double bound = 0.0;
    std::string relation = "<=";  // "<=" or ">="
    double tolerance = 0.0;

    double margin() const { return relation == "<=" ? bound - value : value - bound; }
    bool pass() const { return margin() >= -tolerance; }
};

Check check_le(double value, double bound, double tolerance = 0.0);
Check check_ge(double value, double bound, double tolerance = 0.0);

// Everything a command computed, serialized with sorted keys so reruns diff cleanly.
struct RunReport {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    std::map<std::string, int> resolutions;
    std::map<std::string, double> quantities;
    std::map<std::string, std::string> labels;
    std::map<std::string, Check> checks;
    std::optional<double> wall_seconds;  // only with --timing, so default output is reproducible

    bool all_pass() const;
    nlohmann::json to_json() const;
};

const char* library_version();

}  // namespace grushin
