#include "grushin/report.hpp"

namespace grushin {

Check check_le(double value, double bound, double tolerance) { return {value, bound, "<=", tolerance}; }
Check check_ge(double value, double bound, double tolerance) { return {value, bound, ">=", tolerance}; }

bool RunReport::all_pass() const {
    for (const auto& [name, c] : checks)
        if (!c.pass()) return false;
    return true;
}

nlohmann::json RunReport::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["version"] = library_version();
    j["parameters"] = parameters;
    j["resolutions"] = resolutions;
    j["quantities"] = quantities;
    if (!labels.empty()) j["labels"] = labels;
    nlohmann::json cj = nlohmann::json::object();
    for (const auto& [name, c] : checks) {
        cj[name] = {{"value", c.value},   {"bound", c.bound},   {"relation", c.relation},
                    {"margin", c.margin()}, {"tolerance", c.tolerance}, {"pass", c.pass()}};
    }
    j["checks"] = cj;
    j["all_pass"] = all_pass();
    if (wall_seconds) j["wall_seconds"] = *wall_seconds;
    return j;
}

const char* library_version() { return GRUSHIN_VERSION; }

}  // namespace grushin
