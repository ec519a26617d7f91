// Machine-readable experiment reports. JSON schema (stable keys, versioned):
//   {"schema":1, "experiment":..., "engine":..., "seed":..., "shots":...,
//    "params":{...}, "counts":{...}, "derived":{name:{value,ci_low,ci_high}}}
// Identical (config, seed) inputs render byte-identical output: keys are
// sorted, numbers use shortest round-trip formatting, and no timestamps are
// embedded. Non-finite values (the rho statistic can honestly be +inf)
// serialize as the strings "inf", "-inf", "nan" in both formats.

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

namespace epistate::report {

struct DerivedStat {
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

struct ExperimentReport {
    std::string experiment;
    std::string engine;  // "qm", "ess", or "none"
    uint64_t seed = 0;
    int64_t shots = 0;
    nlohmann::json params = nlohmann::json::object();
    std::map<std::string, int64_t> counts;
    std::map<std::string, DerivedStat> derived;

    std::string to_json() const;
    std::string to_csv() const;
    std::string render(const std::string& format) const;  // "json" | "csv"
};

// Shared number formatting so CSV and JSON carry identical value text.
std::string format_value(double v);
nlohmann::json json_value(double v);

}  // namespace epistate::report
