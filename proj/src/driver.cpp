#include "epistate/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "epistate/experiments.hpp"

namespace epistate::driver {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

using experiments::Engine;
using report::DerivedStat;
using report::ExperimentReport;

Engine parse_engine(const std::string& s) {
    if (s == "qm") return Engine::Qm;
    if (s == "ess") return Engine::Ess;
    throw ContractViolation("engine must be 'qm' or 'ess'");
}

std::string two_digits(size_t k) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02zu", k);
    return buf;
}

DerivedStat exact(double v) { return DerivedStat{v, v, v}; }

// Bootstrap a statistic of one category-count vector.
DerivedStat boot(const std::vector<int64_t>& counts,
                 const std::function<double(const std::vector<int64_t>&)>& stat, uint64_t seed,
                 uint64_t stream) {
    SeededRng rng = derive_rng(seed, 0xB007000000000000ULL + stream);
    stats::Interval iv = stats::bootstrap_ci(counts, stat, rng);
    return DerivedStat{stat(counts), iv.lo, iv.hi};
}

ExperimentReport base_report(const RunConfig& c, const std::string& engine_label) {
    ExperimentReport r;
    r.experiment = c.experiment;
    r.engine = engine_label;
    r.seed = c.seed;
    r.shots = c.shots;
    return r;
}

// ---- individual experiments ------------------------------------------------

std::vector<experiments::DelayedChoiceEntry> parse_mzi_schedule(const std::string& spec) {
    std::vector<experiments::DelayedChoiceEntry> out;
    size_t pos = 0;
    while (pos < spec.size()) {
        size_t comma = spec.find(',', pos);
        std::string chunk =
            spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        size_t colon = chunk.find(':');
        std::string config = chunk.substr(0, colon);
        std::string timing = colon == std::string::npos ? "before" : chunk.substr(colon + 1);
        if (config != "open" && config != "closed")
            throw ContractViolation("schedule entry '" + chunk + "': config must be open|closed");
        if (timing != "before" && timing != "after")
            throw ContractViolation("schedule entry '" + chunk + "': timing must be before|after");
        out.push_back({config == "open" ? qm::MzConfig::Open : qm::MzConfig::Closed,
                       timing == "after" ? ess::DecisionTime::AfterEntry
                                         : ess::DecisionTime::BeforeEntry});
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw ContractViolation("empty interferometer schedule");
    return out;
}

ExperimentReport run_mzi(const RunConfig& c) {
    Engine engine = parse_engine(c.engine);
    std::vector<experiments::DelayedChoiceEntry> schedule;
    if (!c.mzi_schedule.empty()) {
        schedule = parse_mzi_schedule(c.mzi_schedule);
    } else {
        schedule.push_back(
            {(c.mzi_config == "open") ? qm::MzConfig::Open : qm::MzConfig::Closed,
             (c.decision_time == "after") ? ess::DecisionTime::AfterEntry
                                          : ess::DecisionTime::BeforeEntry});
    }
    auto res = experiments::run_delayed_choice(schedule, c.shots, engine, c.seed, c.shards);

    ExperimentReport r = base_report(c, c.engine);
    r.shots = c.shots * static_cast<int64_t>(schedule.size());
    r.params = {{"config", c.mzi_config},
                {"decision_time", c.decision_time},
                {"schedule", c.mzi_schedule},
                {"shots_per_config", c.shots},
                {"shards", c.shards}};
    auto p_da = [](const std::vector<int64_t>& n) {
        return static_cast<double>(n[0]) / static_cast<double>(std::max<int64_t>(1, n[0] + n[1]));
    };
    for (size_t e = 0; e < schedule.size(); ++e) {
        int64_t da = res.counts[e][0], db = res.counts[e][1];
        std::string prefix = schedule.size() == 1 ? "" : "e" + two_digits(e) + "_";
        r.counts[prefix + "Da"] = da;
        r.counts[prefix + "Db"] = db;
        r.derived[prefix + "p_da"] = boot({da, db}, p_da, c.seed, 1 + 2 * e);
        r.derived[prefix + "p_db"] =
            boot({da, db}, [&](const std::vector<int64_t>& n) { return 1.0 - p_da(n); }, c.seed,
                 2 + 2 * e);
    }
    r.derived["timing_bit_identical"] = exact(res.timing_bit_identical ? 1.0 : 0.0);
    return r;
}

ExperimentReport run_epr(const RunConfig& c) {
    Engine engine = parse_engine(c.engine);
    auto pairs = parse_axis_pairs_deg(c.epr_axes);
    auto res = experiments::run_epr_sweep(pairs, c.shots, engine, c.seed, c.shards);

    ExperimentReport r = base_report(c, c.engine);
    r.shots = c.shots * static_cast<int64_t>(pairs.size());
    r.params = {{"axes_deg", c.epr_axes},
                {"shots_per_pair", c.shots},
                {"shards", c.shards}};
    static const char* cell[4] = {"pp", "pm", "mp", "mm"};
    for (size_t p = 0; p < pairs.size(); ++p) {
        for (size_t k = 0; k < 4; ++k)
            r.counts["pair" + two_digits(p) + "_" + cell[k]] = res.counts[p].n[k];
        auto corr = [](const std::vector<int64_t>& n) {
            int64_t s = n[0] + n[1] + n[2] + n[3];
            if (s == 0) return 0.0;
            return static_cast<double>(n[0] - n[1] - n[2] + n[3]) / static_cast<double>(s);
        };
        std::vector<int64_t> n(res.counts[p].n.begin(), res.counts[p].n.end());
        r.derived["E_pair" + two_digits(p)] = boot(n, corr, c.seed, 0x100 + p);
    }
    r.derived["same_axis_violations"] = exact(static_cast<double>(res.same_axis_violations));
    return r;
}

ExperimentReport run_chsh_experiment(const RunConfig& c) {
    Engine engine = parse_engine(c.engine);
    auto res = experiments::run_chsh(c.shots, engine, c.seed, c.shards);

    ExperimentReport r = base_report(c, c.engine);
    r.shots = c.shots * 4;
    r.params = {{"settings_deg", {0.0, 90.0, 45.0, 135.0}},
                {"shots_per_setting", c.shots},
                {"shards", c.shards}};
    static const char* names[4] = {"ab", "abp", "apb", "apbp"};
    std::array<double, 4> e{};
    for (size_t s = 0; s < 4; ++s) {
        for (size_t k = 0; k < 4; ++k)
            r.counts[std::string("s_") + names[s] + "_" +
                     std::array<const char*, 4>{"pp", "pm", "mp", "mm"}[k]] = res.counts[s].n[k];
        e[s] = res.counts[s].correlation();
        r.derived[std::string("E_") + names[s]] = exact(e[s]);
    }

    // Joint bootstrap: resample each setting's outcome table, recompute the
    // witness over the CHSH sign family.
    SeededRng rng = derive_rng(c.seed, 0xB007000000000C45ULL);
    std::vector<double> samples;
    samples.reserve(1000);
    for (int b = 0; b < 1000; ++b) {
        std::array<double, 4> eb{};
        for (size_t s = 0; s < 4; ++s) {
            std::vector<int64_t> n(res.counts[s].n.begin(), res.counts[s].n.end());
            std::vector<int64_t> m = stats::multinomial_resample(n, rng);
            int64_t tot = m[0] + m[1] + m[2] + m[3];
            eb[s] = tot ? static_cast<double>(m[0] - m[1] - m[2] + m[3]) / static_cast<double>(tot)
                        : 0.0;
        }
        samples.push_back(contextprob::chsh_witness(eb));
    }
    std::sort(samples.begin(), samples.end());
    double witness = res.feasibility.chsh_witness;
    r.derived["chsh"] = DerivedStat{witness, samples[24], samples[974]};
    r.derived["joint_measure_feasible"] = exact(res.feasibility.feasible ? 1.0 : 0.0);
    return r;
}

ExperimentReport run_teleport_ideal_experiment(const RunConfig& c) {
    cx alpha(c.alpha_re, c.alpha_im), beta(c.beta_re, c.beta_im);
    auto res =
        experiments::run_teleport_ideal(alpha, beta, c.shots, c.seed, c.corrections, c.shards);

    ExperimentReport r = base_report(c, "qm");
    r.params = {{"alpha_re", c.alpha_re},
                {"alpha_im", c.alpha_im},
                {"beta_re", c.beta_re},
                {"beta_im", c.beta_im},
                {"corrections", c.corrections},
                {"shards", c.shards}};
    static const char* names[4] = {"psi_minus", "psi_plus", "phi_minus", "phi_plus"};
    std::vector<int64_t> n(res.outcome_counts.begin(), res.outcome_counts.end());
    double branch_fidelity[4];
    for (int k = 0; k < 4; ++k) {
        branch_fidelity[k] =
            qm::teleport_branch(alpha, beta, static_cast<qm::BellKind>(k), c.corrections).fidelity;
        r.counts[names[k]] = res.outcome_counts[static_cast<size_t>(k)];
    }
    auto mean_f = [&](const std::vector<int64_t>& m) {
        int64_t tot = m[0] + m[1] + m[2] + m[3];
        if (tot == 0) return 0.0;
        double s = 0.0;
        for (int k = 0; k < 4; ++k)
            s += branch_fidelity[k] * static_cast<double>(m[static_cast<size_t>(k)]);
        return s / static_cast<double>(tot);
    };
    r.derived["mean_fidelity"] = boot(n, mean_f, c.seed, 3);
    r.derived["min_fidelity"] = exact(res.min_fidelity);
    for (int k = 0; k < 4; ++k) {
        auto freq = [k](const std::vector<int64_t>& m) {
            int64_t tot = m[0] + m[1] + m[2] + m[3];
            return tot ? static_cast<double>(m[static_cast<size_t>(k)]) / static_cast<double>(tot)
                       : 0.0;
        };
        r.derived[std::string("freq_") + names[k]] = boot(n, freq, c.seed, 0x200 + static_cast<uint64_t>(k));
    }
    return r;
}

ExperimentReport run_teleport_optical(const RunConfig& c) {
    experiments::TeleportApparatus app;
    app.engine = parse_engine(c.engine);
    app.encoder_angle_deg = c.encoder_deg;
    app.pbs_angle_deg = c.pbs_deg;
    app.mirror_aligned = c.aligned;
    app.shots = c.shots;
    auto counts = experiments::run_optical_teleport(app, c.seed, nullptr, c.shards);

    ExperimentReport r = base_report(c, c.engine);
    r.params = {{"encoder_deg", c.encoder_deg},
                {"pbs_deg", c.pbs_deg},
                {"mirror_aligned", c.aligned},
                {"shards", c.shards}};
    r.counts["minus_coincidence"] = counts.n_minus;
    r.counts["plus_coincidence"] = counts.n_plus;
    r.counts["no_coincidence"] = counts.n_other;

    std::vector<int64_t> n = {counts.n_minus, counts.n_plus, counts.n_other};
    auto minus_fraction = [](const std::vector<int64_t>& m) {
        int64_t coinc = m[0] + m[1];
        return coinc ? static_cast<double>(m[0]) / static_cast<double>(coinc)
                     : std::numeric_limits<double>::quiet_NaN();
    };
    auto success = [](const std::vector<int64_t>& m) {
        int64_t coinc = m[0] + m[1];
        return coinc ? static_cast<double>(m[1]) / static_cast<double>(coinc)
                     : std::numeric_limits<double>::quiet_NaN();
    };
    auto coincidence_rate = [](const std::vector<int64_t>& m) {
        int64_t tot = m[0] + m[1] + m[2];
        return tot ? static_cast<double>(m[0] + m[1]) / static_cast<double>(tot) : 0.0;
    };
    r.derived["minus_fraction"] = boot(n, minus_fraction, c.seed, 4);
    r.derived["teleport_success_fraction"] = boot(n, success, c.seed, 5);
    r.derived["coincidence_rate"] = boot(n, coincidence_rate, c.seed, 6);
    return r;
}

ExperimentReport run_rho(const RunConfig& c) {
    Engine engine = parse_engine(c.engine);
    auto res = experiments::rho_statistic(c.target, c.seed, engine);

    ExperimentReport r = base_report(c, c.engine);
    r.shots = c.target;
    r.params = {{"target", c.target}};
    r.counts["minus_45"] = res.at45.n_minus;
    r.counts["plus_45"] = res.at45.n_plus;
    r.counts["minus_90"] = res.at90.n_minus;
    r.counts["plus_90"] = res.at90.n_plus;
    r.derived["rho"] = DerivedStat{res.rho, res.ci_low, res.ci_high};
    r.derived["insufficient_statistics"] = exact(res.insufficient ? 1.0 : 0.0);
    r.derived["shots_run_45"] = exact(static_cast<double>(res.at45.shots_run));
    r.derived["shots_run_90"] = exact(static_cast<double>(res.at90.shots_run));
    return r;
}

ExperimentReport run_double_slit(const RunConfig& c) {
    auto model = experiments::DoubleSlitModel::standard(c.sites, c.slit_width, c.slit_separation);
    auto spec = experiments::double_slit_spectrum(model, c.both_open);
    auto hist = experiments::double_slit_sample(model, c.both_open, c.shots, c.seed, c.shards);

    ExperimentReport r = base_report(c, "qm");
    r.params = {{"sites", c.sites},
                {"slit_width", c.slit_width},
                {"slit_separation", c.slit_separation},
                {"both_open", c.both_open},
                {"shards", c.shards}};
    for (size_t k = 0; k < hist.size(); ++k) r.counts["k" + two_digits(k)] = hist[k];
    for (size_t k = 0; k < spec.total.size(); ++k) {
        const std::string id = two_digits(k);
        if (c.both_open) {
            r.derived["pa_k" + id] = exact(spec.term_a[k]);
            r.derived["pb_k" + id] = exact(spec.term_b[k]);
            r.derived["int_k" + id] = exact(spec.interference[k]);
            r.derived["total_k" + id] = exact(spec.total[k]);
        } else {
            r.derived["single_a_k" + id] = exact(spec.single_a[k]);
            r.derived["single_b_k" + id] = exact(spec.single_b[k]);
            r.derived["mixture_k" + id] = exact(spec.classical_mixture[k]);
        }
    }
    double total_sum = 0.0, int_l1 = 0.0, mix_dev = 0.0;
    for (size_t k = 0; k < spec.total.size(); ++k) {
        total_sum += spec.total[k];
        int_l1 += std::abs(spec.interference[k]);
        mix_dev = std::max(mix_dev, std::abs(spec.term_a[k] + spec.term_b[k] -
                                             spec.classical_mixture[k]));
    }
    r.derived["total_sum"] = exact(total_sum);
    r.derived["interference_l1"] = exact(int_l1);
    r.derived["interference_sign_changes"] =
        exact(static_cast<double>(experiments::interference_sign_changes(spec)));
    r.derived["no_cross_vs_mixture_max_dev"] = exact(mix_dev);
    return r;
}

ExperimentReport run_gns_demo(const RunConfig& c) {
    using namespace algebra;
    auto m4 = FiniteAlgebra::full_matrix_algebra(4);
    Matrix p = spin::up_up_projector4();
    StateFunctional psi = state_from_projector(p, m4);
    GnsRepresentation rep = gns_construct(psi);

    ExperimentReport r = base_report(c, "none");
    r.shots = 0;
    r.params = nlohmann::json::object();

    r.derived["psi_s1z"] = exact(std::real(psi.eval(spin::s1z4())));
    r.derived["psi_s2z"] = exact(std::real(psi.eval(spin::s2z4())));
    r.derived["psi_sz"] = exact(std::real(psi.eval(spin::total_sz4())));
    r.derived["psi_s_squared"] = exact(std::real(psi.eval(spin::total_s_squared4())));
    r.derived["gns_rep_dim"] = exact(static_cast<double>(rep.rep_dim()));

    // rep(U) reproduces psi(U) on a seeded random corpus of span elements
    SeededRng rng = derive_rng(c.seed, 0x615ULL);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        Matrix u = Matrix::zero(4);
        for (const Matrix& b : m4->basis()) {
            cx w(rng.next_unit() * 2.0 - 1.0, rng.next_unit() * 2.0 - 1.0);
            u = u + b * w;
        }
        worst = std::max(worst, std::abs(rep.vacuum_expectation(u) - psi.eval(u)));
    }
    r.derived["gns_max_reproduction_dev"] = exact(worst);

    CommutativeSubalgebra q_zz(m4, {spin::s1z4(), spin::s2z4()}, "zz");
    CommutativeSubalgebra q_tot(m4, {spin::total_sz4(), spin::total_s_squared4()}, "total");
    r.derived["characters_zz"] = exact(static_cast<double>(enumerate_characters(q_zz).size()));
    r.derived["characters_total"] = exact(static_cast<double>(enumerate_characters(q_tot).size()));
    r.derived["zz_maximal"] = exact(check_maximal_commutative(q_zz) ? 1.0 : 0.0);
    r.derived["total_maximal"] = exact(check_maximal_commutative(q_tot) ? 1.0 : 0.0);
    r.derived["projector_in_both_spans"] =
        exact((q_zz.contains(p) && q_tot.contains(p)) ? 1.0 : 0.0);
    return r;
}

}  // namespace

std::vector<std::pair<double, double>> parse_axis_pairs_deg(const std::string& spec) {
    std::vector<std::pair<double, double>> out;
    size_t pos = 0;
    while (pos < spec.size()) {
        size_t comma = spec.find(',', pos);
        std::string chunk = spec.substr(pos, comma == std::string::npos ? std::string::npos
                                                                        : comma - pos);
        size_t colon = chunk.find(':');
        if (colon == std::string::npos)
            throw ContractViolation("axis pair '" + chunk + "' must look like 'a:b' (degrees)");
        try {
            double a = std::stod(chunk.substr(0, colon));
            double b = std::stod(chunk.substr(colon + 1));
            out.push_back({a * kPi / 180.0, b * kPi / 180.0});
        } catch (const std::exception&) {
            throw ContractViolation("axis pair '" + chunk + "' is not numeric");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw ContractViolation("no axis pairs given");
    return out;
}

void RunConfig::validate() const {
    static const std::set<std::string> experiments_known = {
        "double-slit", "mzi", "epr", "chsh", "teleport-ideal", "teleport-optical", "rho",
        "gns-demo"};
    if (!experiments_known.count(experiment))
        throw ContractViolation("unknown experiment '" + experiment + "'");
    if (engine != "qm" && engine != "ess") throw ContractViolation("engine must be qm or ess");
    if (format != "json" && format != "csv") throw ContractViolation("format must be json or csv");
    if (shots <= 0) throw ContractViolation("shots must be positive");
    if (shards < 1) throw ContractViolation("shards must be >= 1");
    if (experiment == "mzi") {
        if (mzi_config != "open" && mzi_config != "closed")
            throw ContractViolation("mzi config must be open or closed");
        if (decision_time != "before" && decision_time != "after")
            throw ContractViolation("decision-time must be before or after");
        if (!mzi_schedule.empty()) parse_mzi_schedule(mzi_schedule);
    }
    if (experiment == "epr") parse_axis_pairs_deg(epr_axes);
    if (experiment == "teleport-ideal") {
        double n = alpha_re * alpha_re + alpha_im * alpha_im + beta_re * beta_re +
                   beta_im * beta_im;
        if (std::abs(n - 1.0) > 1e-9)
            throw ContractViolation("teleport-ideal: |alpha|^2 + |beta|^2 must equal 1");
    }
    if (experiment == "teleport-optical" || experiment == "rho") {
        if (encoder_deg < 0.0 || encoder_deg >= 180.0 || pbs_deg < 0.0 || pbs_deg >= 180.0)
            throw ContractViolation("angles must lie in [0, 180) degrees");
    }
    if (experiment == "rho" && target <= 0) throw ContractViolation("target must be positive");
    if (experiment == "double-slit") {
        if (sites < 4 || sites > 4096) throw ContractViolation("sites must be in [4, 4096]");
        if (slit_width < 1 || slit_separation < slit_width)
            throw ContractViolation("slit geometry: need width >= 1 and separation >= width");
        if (sites / 2 - slit_separation / 2 - slit_width / 2 < 0 ||
            sites / 2 + slit_separation / 2 + slit_width / 2 >= sites)
            throw ContractViolation("slit geometry does not fit the lattice");
    }
}

report::ExperimentReport run_experiment(const RunConfig& config) {
    config.validate();
    if (config.experiment == "mzi") return run_mzi(config);
    if (config.experiment == "epr") return run_epr(config);
    if (config.experiment == "chsh") return run_chsh_experiment(config);
    if (config.experiment == "teleport-ideal") return run_teleport_ideal_experiment(config);
    if (config.experiment == "teleport-optical") return run_teleport_optical(config);
    if (config.experiment == "rho") return run_rho(config);
    if (config.experiment == "double-slit") return run_double_slit(config);
    if (config.experiment == "gns-demo") return run_gns_demo(config);
    throw ContractViolation("unknown experiment");
}

}  // namespace epistate::driver
