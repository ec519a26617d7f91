// Experiment selection and execution behind the CLI: a validated RunConfig
// goes in, an ExperimentReport comes out. The CLI is a thin argv adapter over
// this, so tests exercise the same pipeline byte for byte.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epistate/report.hpp"

namespace epistate::driver {

struct RunConfig {
    std::string experiment;  // double-slit | mzi | epr | chsh | teleport-ideal |
                             // teleport-optical | rho | gns-demo
    std::string engine = "qm";  // qm | ess (where applicable)
    int64_t shots = 100000;
    uint64_t seed = 0;
    int shards = 1;
    std::string format = "json";  // json | csv
    std::string output_path;      // empty => stdout

    // mzi
    std::string mzi_config = "closed";     // open | closed
    std::string decision_time = "before";  // before | after (ess)
    std::string mzi_schedule;              // optional "config:timing[,...]" list

    // epr: Bloch-axis angle pairs in degrees, "a:b[,a:b...]"
    std::string epr_axes = "0:0,0:90,45:135";

    // teleport-ideal
    double alpha_re = 1.0, alpha_im = 0.0;
    double beta_re = 0.0, beta_im = 0.0;
    bool corrections = true;

    // teleport-optical
    double encoder_deg = 90.0;
    double pbs_deg = 90.0;
    bool aligned = true;

    // rho
    int64_t target = 1000000;

    // double-slit
    int sites = 64;
    int slit_width = 2;
    int slit_separation = 16;
    bool both_open = true;

    // Throws ContractViolation on out-of-range parameters; nothing runs on an
    // invalid config.
    void validate() const;
};

report::ExperimentReport run_experiment(const RunConfig& config);

// Parses "a:b,a:b" degree pairs into radians.
std::vector<std::pair<double, double>> parse_axis_pairs_deg(const std::string& spec);

}  // namespace epistate::driver
