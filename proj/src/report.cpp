#include "epistate/report.hpp"

#include <cmath>

#include "epistate/common.hpp"

namespace epistate::report {

nlohmann::json json_value(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

std::string format_value(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return nlohmann::json(v).dump();
}

std::string ExperimentReport::to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["experiment"] = experiment;
    j["engine"] = engine;
    j["seed"] = seed;
    j["shots"] = shots;
    j["params"] = params;
    nlohmann::json jc = nlohmann::json::object();
    for (const auto& [k, v] : counts) jc[k] = v;
    j["counts"] = jc;
    nlohmann::json jd = nlohmann::json::object();
    for (const auto& [k, v] : derived) {
        jd[k] = {{"value", json_value(v.value)},
                 {"ci_low", json_value(v.ci_low)},
                 {"ci_high", json_value(v.ci_high)}};
    }
    j["derived"] = jd;
    return j.dump(2) + "\n";
}

std::string ExperimentReport::to_csv() const {
    std::string out = "label,count\n";
    for (const auto& [k, v] : counts) out += k + "," + std::to_string(v) + "\n";
    out += "name,value,ci_low,ci_high\n";
    for (const auto& [k, v] : derived)
        out += k + "," + format_value(v.value) + "," + format_value(v.ci_low) + "," +
               format_value(v.ci_high) + "\n";
    return out;
}

std::string ExperimentReport::render(const std::string& format) const {
    if (format == "json") return to_json();
    if (format == "csv") return to_csv();
    throw ContractViolation("ExperimentReport::render: unknown format '" + format + "'");
}

}  // namespace epistate::report
