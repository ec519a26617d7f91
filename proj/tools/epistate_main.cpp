// epistate — dual-engine simulator CLI. Parses one experiment subcommand,
// runs it through the driver, and writes the JSON/CSV report to stdout or
// --output. Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "epistate/common.hpp"
#include "epistate/driver.hpp"

namespace {

using epistate::driver::RunConfig;

void add_common(CLI::App* cmd, RunConfig& cfg, bool with_engine, bool with_shots) {
    cmd->add_option("--seed", cfg.seed, "Master seed (64-bit)")->capture_default_str();
    cmd->add_option("--format", cfg.format, "Report format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd->add_option("--output", cfg.output_path, "Write the report to this path");
    cmd->add_option("--shards", cfg.shards, "Shard count (counts are shard-invariant)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    if (with_engine)
        cmd->add_option("--engine", cfg.engine, "Simulation engine: qm|ess")
            ->check(CLI::IsMember({"qm", "ess"}))
            ->capture_default_str();
    if (with_shots)
        cmd->add_option("--shots", cfg.shots, "Shot count")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
}

int emit(const RunConfig& cfg) {
    // Validate everything (including output writability) before computing.
    cfg.validate();
    std::ofstream file;
    if (!cfg.output_path.empty()) {
        file.open(cfg.output_path, std::ios::binary | std::ios::trunc);
        if (!file) {
            std::cerr << "epistate: cannot open output path '" << cfg.output_path << "'\n";
            return 2;
        }
    }
    epistate::report::ExperimentReport rep = epistate::driver::run_experiment(cfg);
    std::string text = rep.render(cfg.format);
    if (cfg.output_path.empty())
        std::cout << text;
    else
        file << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dual-engine quantum / elementary-state experiment simulator"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.shots = 100000;

    auto* mzi = app.add_subcommand("mzi", "Delayed-choice Mach-Zehnder interferometer");
    add_common(mzi, cfg, true, true);
    mzi->add_option("--config", cfg.mzi_config, "Interferometer configuration: open|closed")
        ->check(CLI::IsMember({"open", "closed"}))
        ->capture_default_str();
    mzi->add_option("--decision-time", cfg.decision_time,
                    "When the configuration choice is made (ess): before|after")
        ->check(CLI::IsMember({"before", "after"}))
        ->capture_default_str();
    mzi->add_option("--schedule", cfg.mzi_schedule,
                    "Run several configurations: 'config:timing[,config:timing...]'");

    auto* epr = app.add_subcommand("epr", "EPR singlet correlation sweep");
    add_common(epr, cfg, true, true);
    epr->add_option("--axes", cfg.epr_axes, "Axis pairs in degrees, 'a:b[,a:b...]'")
        ->capture_default_str();

    auto* chsh = app.add_subcommand("chsh", "CHSH witness at the standard settings");
    add_common(chsh, cfg, true, true);

    auto* tid = app.add_subcommand("teleport-ideal", "Ideal teleportation circuit");
    add_common(tid, cfg, false, true);
    tid->add_option("--alpha-re", cfg.alpha_re, "Re(alpha)")->capture_default_str();
    tid->add_option("--alpha-im", cfg.alpha_im, "Im(alpha)")->capture_default_str();
    tid->add_option("--beta-re", cfg.beta_re, "Re(beta)")->capture_default_str();
    tid->add_option("--beta-im", cfg.beta_im, "Im(beta)")->capture_default_str();
    tid->add_flag("--no-corrections{false}", cfg.corrections,
                  "Skip the outcome-conditioned correction unitaries");

    auto* top = app.add_subcommand("teleport-optical", "Optical teleportation apparatus");
    add_common(top, cfg, true, true);
    top->add_option("--encoder", cfg.encoder_deg, "Encoder polarization angle (degrees)")
        ->capture_default_str();
    top->add_option("--pbs", cfg.pbs_deg, "Analysis splitter angle (degrees)")
        ->capture_default_str();
    top->add_flag("--misaligned{false},--aligned{true}", cfg.aligned,
                  "Photon arrival at the splitter (default aligned)");

    auto* rho = app.add_subcommand("rho", "Coincidence-ratio discriminator at 45/90 degrees");
    add_common(rho, cfg, true, false);
    rho->add_option("--target", cfg.target, "Matched coincidence budget per configuration")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* ds = app.add_subcommand("double-slit", "Two-slit lattice spectrum and histogram");
    add_common(ds, cfg, false, true);
    ds->add_option("--sites", cfg.sites, "Lattice size")->capture_default_str();
    ds->add_option("--slit-width", cfg.slit_width, "Sites per slit")->capture_default_str();
    ds->add_option("--slit-separation", cfg.slit_separation, "Distance between slit starts")
        ->capture_default_str();
    ds->add_flag("--one-slit{false}", cfg.both_open,
                 "Close slit b: report single-slit spectra and the classical mixture");

    auto* gns = app.add_subcommand("gns-demo", "Projector state, its values, and the GNS build");
    add_common(gns, cfg, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // help/version exit 0, usage errors exit 2
    }

    if (mzi->parsed()) cfg.experiment = "mzi";
    if (epr->parsed()) cfg.experiment = "epr";
    if (chsh->parsed()) cfg.experiment = "chsh";
    if (tid->parsed()) cfg.experiment = "teleport-ideal";
    if (top->parsed()) cfg.experiment = "teleport-optical";
    if (rho->parsed()) cfg.experiment = "rho";
    if (ds->parsed()) cfg.experiment = "double-slit";
    if (gns->parsed()) cfg.experiment = "gns-demo";

    try {
        return emit(cfg);
    } catch (const epistate::ContractViolation& e) {
        std::cerr << "epistate: invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "epistate: " << e.what() << "\n";
        return 1;
    }
}
