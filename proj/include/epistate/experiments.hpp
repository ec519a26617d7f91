// Executable experiment definitions composing both engines: the two-slit
// spectrum split, the delayed-choice interferometer, the EPR correlation
// sweep with the CHSH witness, ideal teleportation, the optical teleportation
// apparatus, and the rho discriminator.
//
// Every per-shot record is a deterministic function of (seed, shot index,
// configuration): each shot draws from its own derived rng substream, so
// reruns are bit-reproducible and shard partitioning cannot change counts.

#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "epistate/context_prob.hpp"
#include "epistate/ess.hpp"
#include "epistate/qm.hpp"
#include "epistate/stats.hpp"

namespace epistate::experiments {

enum class Engine { Qm, Ess };

// ---- double slit --------------------------------------------------------------

struct DoubleSlitModel {
    int n_sites = 64;
    std::vector<int> slit_a;
    std::vector<int> slit_b;
    std::vector<std::vector<int>> momentum_bins;  // partition of [0, n_sites)

    // 64 sites, two 2-site slits with starts 16 sites apart, one DFT index
    // per momentum bin.
    static DoubleSlitModel standard(int n_sites = 64, int slit_width = 2, int slit_separation = 16);
    void validate() const;
};

struct DoubleSlitSpectrum {
    // per momentum bin; the three terms sum to `total`
    std::vector<double> term_a;
    std::vector<double> term_b;
    std::vector<double> interference;
    std::vector<double> total;
    // single-slit distributions and their even mixture
    std::vector<double> single_a;
    std::vector<double> single_b;
    std::vector<double> classical_mixture;
};

DoubleSlitSpectrum double_slit_spectrum(const DoubleSlitModel& model, bool both_open);

// Shot-count histogram over momentum bins, sampled from the spectrum.
std::vector<int64_t> double_slit_sample(const DoubleSlitModel& model, bool both_open,
                                        int64_t shots, uint64_t seed, int shards = 1);

int interference_sign_changes(const DoubleSlitSpectrum& s, double ignore_below = 1e-12);

// ---- EPR sweep and CHSH --------------------------------------------------------

struct EprPairCounts {
    // outcome sign pairs: [++ , +- , -+ , --]
    std::array<int64_t, 4> n{0, 0, 0, 0};
    int64_t shots() const { return n[0] + n[1] + n[2] + n[3]; }
    double correlation() const;
    double marginal_first() const;
    double marginal_second() const;
};

struct EprSweepResult {
    std::vector<std::pair<double, double>> axis_pairs;  // Bloch-axis angles (radians)
    std::vector<EprPairCounts> counts;
    contextprob::CorrelationTable table;
    int64_t same_axis_violations = 0;  // equal-sign outcomes at equal axes
};

// Singlet preparation measured along the given axis pairs; E = -cos(angle
// difference) in expectation under both engines.
EprSweepResult run_epr_sweep(const std::vector<std::pair<double, double>>& axis_pairs,
                             int64_t shots_per_pair, Engine engine, uint64_t seed, int shards = 1);

struct ChshRunResult {
    std::array<double, 4> settings_a_b;  // a, a', b, b' (Bloch-axis radians)
    contextprob::ChshTable table;
    contextprob::FeasibilityResult feasibility;
    std::array<EprPairCounts, 4> counts;  // (a,b), (a,b'), (a',b), (a',b')
};

// The standard maximal-violation settings a=0, a'=pi/2, b=pi/4, b'=3pi/4.
ChshRunResult run_chsh(int64_t shots_per_setting, Engine engine, uint64_t seed, int shards = 1);

// ---- teleportation (ideal circuit) ----------------------------------------------

struct TeleportIdealResult {
    std::array<int64_t, 4> outcome_counts{0, 0, 0, 0};  // PsiMinus..PhiPlus
    double mean_fidelity = 0.0;
    double min_fidelity = 0.0;
};

TeleportIdealResult run_teleport_ideal(cx alpha, cx beta, int64_t shots, uint64_t seed,
                                       bool corrections = true, int shards = 1);

// ---- optical teleportation apparatus --------------------------------------------

struct TeleportApparatus {
    double encoder_angle_deg = 90.0;  // canonical [0, 180)
    double pbs_angle_deg = 90.0;
    bool mirror_aligned = true;  // photons {1},{2} reach the splitter together
    int64_t shots = 100000;
    Engine engine = Engine::Qm;
};

enum class Coincidence { Minus, Plus, None };

struct CoincidenceRecord {
    bool d0 = false, d1 = false, d2 = false, d_plus3 = false, d_minus3 = false;
    Coincidence classification = Coincidence::None;
};

Coincidence classify(const CoincidenceRecord& fired);

struct OpticalCounts {
    int64_t n_minus = 0;
    int64_t n_plus = 0;
    int64_t n_other = 0;
    int64_t shots() const { return n_minus + n_plus + n_other; }
};

// One shot, deterministic in (apparatus, seed, shot index).
CoincidenceRecord optical_teleport_shot(const TeleportApparatus& app, uint64_t seed,
                                        int64_t shot_index);

OpticalCounts run_optical_teleport(const TeleportApparatus& app, uint64_t seed,
                                   std::vector<CoincidenceRecord>* record_sink = nullptr,
                                   int shards = 1);

// ---- rho discriminator -----------------------------------------------------------

struct RhoConfigCounts {
    int64_t n_minus = 0;
    int64_t n_plus = 0;
    int64_t shots_run = 0;  // shots consumed to reach the coincidence target
};

struct RhoResult {
    RhoConfigCounts at45;
    RhoConfigCounts at90;
    int64_t target = 0;
    // Point estimate on the extended real line: +inf when only the
    // denominator count vanishes, NaN for 0/0.
    double rho = 0.0;
    double ci_low = 0.0;   // exact conditional-binomial interval
    double ci_high = 0.0;
    bool insufficient = false;  // zero denominator ("insufficient statistics")
};

// Runs the apparatus at encoder/pbs 45 deg and 90 deg, each until the
// matched coincidence budget N- + N+ reaches `target`.
RhoResult rho_statistic(int64_t target, uint64_t seed, Engine engine);

// ---- delayed choice ---------------------------------------------------------------

struct DelayedChoiceEntry {
    qm::MzConfig config = qm::MzConfig::Closed;
    ess::DecisionTime timing = ess::DecisionTime::BeforeEntry;
};

struct DelayedChoiceResult {
    std::vector<std::array<int64_t, 2>> counts;  // per entry: [Da, Db]
    // For the ESS engine: outcome sequences at fixed seed are bit-identical
    // when only the decision timing differs. Always true for QM (no timing
    // input exists there).
    bool timing_bit_identical = true;
};

DelayedChoiceResult run_delayed_choice(const std::vector<DelayedChoiceEntry>& schedule,
                                       int64_t shots, Engine engine, uint64_t seed,
                                       int shards = 1);

// Detector sequence for one entry; used for the timing-independence check.
std::vector<int> delayed_choice_sequence(const DelayedChoiceEntry& entry, int64_t shots,
                                         Engine engine, uint64_t seed);

}  // namespace epistate::experiments
