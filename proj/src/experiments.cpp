#include "epistate/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace epistate::experiments {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double deg2rad(double d) { return d * kPi / 180.0; }

// Contiguous shard ranges over [0, shots); results merge by summation and,
// because every shot owns its rng substream, do not depend on the partition.
template <typename PartialFn>
void for_each_shard(int64_t shots, int shards, PartialFn&& run_range) {
    if (shards < 1) throw ContractViolation("shards must be >= 1");
    int64_t per = shots / shards;
    int64_t extra = shots % shards;
    int64_t begin = 0;
    for (int s = 0; s < shards; ++s) {
        int64_t len = per + (s < extra ? 1 : 0);
        run_range(begin, begin + len);
        begin += len;
    }
}

}  // namespace

// ---- double slit --------------------------------------------------------------

DoubleSlitModel DoubleSlitModel::standard(int n_sites, int slit_width, int slit_separation) {
    DoubleSlitModel m;
    m.n_sites = n_sites;
    int start_a = n_sites / 2 - slit_separation / 2 - slit_width / 2;
    int start_b = start_a + slit_separation;
    for (int i = 0; i < slit_width; ++i) {
        m.slit_a.push_back(start_a + i);
        m.slit_b.push_back(start_b + i);
    }
    m.momentum_bins.resize(static_cast<size_t>(n_sites));
    for (int k = 0; k < n_sites; ++k) m.momentum_bins[static_cast<size_t>(k)] = {k};
    m.validate();
    return m;
}

void DoubleSlitModel::validate() const {
    if (n_sites <= 0) throw ContractViolation("DoubleSlitModel: n_sites must be positive");
    if (slit_a.empty() || slit_b.empty())
        throw ContractViolation("DoubleSlitModel: empty slit set");
    std::set<int> seen;
    for (int s : slit_a) {
        if (s < 0 || s >= n_sites) throw ContractViolation("DoubleSlitModel: slit site out of range");
        if (!seen.insert(s).second) throw ContractViolation("DoubleSlitModel: duplicate slit site");
    }
    for (int s : slit_b) {
        if (s < 0 || s >= n_sites) throw ContractViolation("DoubleSlitModel: slit site out of range");
        if (!seen.insert(s).second)
            throw ContractViolation("DoubleSlitModel: slits must be disjoint");
    }
    std::vector<bool> covered(static_cast<size_t>(n_sites), false);
    for (const auto& bin : momentum_bins)
        for (int k : bin) {
            if (k < 0 || k >= n_sites || covered[static_cast<size_t>(k)])
                throw ContractViolation("DoubleSlitModel: momentum bins must partition the index range");
            covered[static_cast<size_t>(k)] = true;
        }
    for (bool c : covered)
        if (!c) throw ContractViolation("DoubleSlitModel: momentum bins must cover the index range");
}

namespace {

// <dft_k | u> for the unit-norm DFT vector at index k.
cx dft_component(const std::vector<cx>& u, int k, int n) {
    cx s = 0.0;
    double w = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    for (int x = 0; x < n; ++x)
        s += std::polar(1.0, w * static_cast<double>(x)) * u[static_cast<size_t>(x)];
    return s / std::sqrt(static_cast<double>(n));
}

}  // namespace

DoubleSlitSpectrum double_slit_spectrum(const DoubleSlitModel& model, bool both_open) {
    model.validate();
    const int n = model.n_sites;
    const size_t bins = model.momentum_bins.size();

    // The screen state: a uniform incoming beam projected on the open slits
    // and renormalized.
    std::vector<cx> u_a(static_cast<size_t>(n), cx(0.0, 0.0));
    std::vector<cx> u_b(static_cast<size_t>(n), cx(0.0, 0.0));
    const double open_sites = static_cast<double>(model.slit_a.size() + model.slit_b.size());
    const double amp_both = 1.0 / std::sqrt(open_sites);
    for (int s : model.slit_a) u_a[static_cast<size_t>(s)] = amp_both;
    for (int s : model.slit_b) u_b[static_cast<size_t>(s)] = amp_both;

    DoubleSlitSpectrum out;
    out.term_a.assign(bins, 0.0);
    out.term_b.assign(bins, 0.0);
    out.interference.assign(bins, 0.0);
    out.total.assign(bins, 0.0);
    out.single_a.assign(bins, 0.0);
    out.single_b.assign(bins, 0.0);

    // Single-slit states (each slit alone, renormalized).
    std::vector<cx> s_a(static_cast<size_t>(n), cx(0.0, 0.0));
    std::vector<cx> s_b(static_cast<size_t>(n), cx(0.0, 0.0));
    for (int s : model.slit_a) s_a[static_cast<size_t>(s)] = 1.0 / std::sqrt(static_cast<double>(model.slit_a.size()));
    for (int s : model.slit_b) s_b[static_cast<size_t>(s)] = 1.0 / std::sqrt(static_cast<double>(model.slit_b.size()));

    for (size_t bi = 0; bi < bins; ++bi) {
        for (int k : model.momentum_bins[bi]) {
            cx fa = dft_component(u_a, k, n);
            cx fb = dft_component(u_b, k, n);
            out.term_a[bi] += std::norm(fa);
            out.term_b[bi] += std::norm(fb);
            out.interference[bi] += 2.0 * std::real(std::conj(fa) * fb);
            out.single_a[bi] += std::norm(dft_component(s_a, k, n));
            out.single_b[bi] += std::norm(dft_component(s_b, k, n));
        }
        out.total[bi] = out.term_a[bi] + out.term_b[bi] + out.interference[bi];
    }
    out.classical_mixture =
        contextprob::classical_double_slit(0.5, 0.5, out.single_a, out.single_b);
    (void)both_open;
    return out;
}

std::vector<int64_t> double_slit_sample(const DoubleSlitModel& model, bool both_open,
                                        int64_t shots, uint64_t seed, int shards) {
    DoubleSlitSpectrum spec = double_slit_spectrum(model, both_open);
    const std::vector<double>& dist = both_open ? spec.total : spec.single_a;
    std::vector<double> cum(dist.size());
    double acc = 0.0;
    for (size_t i = 0; i < dist.size(); ++i) {
        acc += std::max(0.0, dist[i]);
        cum[i] = acc;
    }
    std::vector<int64_t> hist(dist.size(), 0);
    for_each_shard(shots, shards, [&](int64_t b, int64_t e) {
        for (int64_t i = b; i < e; ++i) {
            SeededRng rng = derive_rng(seed, static_cast<uint64_t>(i));
            double u = rng.next_unit() * acc;
            size_t k = static_cast<size_t>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
            if (k >= hist.size()) k = hist.size() - 1;
            ++hist[k];
        }
    });
    return hist;
}

int interference_sign_changes(const DoubleSlitSpectrum& s, double ignore_below) {
    int changes = 0;
    int prev = 0;
    for (double v : s.interference) {
        if (std::abs(v) <= ignore_below) continue;
        int sign = v > 0.0 ? 1 : -1;
        if (prev != 0 && sign != prev) ++changes;
        prev = sign;
    }
    return changes;
}

// ---- EPR sweep / CHSH -----------------------------------------------------------

double EprPairCounts::correlation() const {
    int64_t s = shots();
    if (s == 0) return 0.0;
    return static_cast<double>(n[0] - n[1] - n[2] + n[3]) / static_cast<double>(s);
}

double EprPairCounts::marginal_first() const {
    int64_t s = shots();
    if (s == 0) return 0.0;
    return static_cast<double>(n[0] + n[1] - n[2] - n[3]) / static_cast<double>(s);
}

double EprPairCounts::marginal_second() const {
    int64_t s = shots();
    if (s == 0) return 0.0;
    return static_cast<double>(n[0] - n[1] + n[2] - n[3]) / static_cast<double>(s);
}

namespace {

using linalg::Matrix;

Matrix spin_plus_projector(double bloch_angle) {
    return Matrix::identity(2) * cx(0.5, 0.0) +
           algebra::spin::axis(std::sin(bloch_angle), 0.0, std::cos(bloch_angle));
}

struct EprShotSampler {
    // Pre-validated measurement contexts for one axis pair.
    linalg::MeasurementContext side1;
    linalg::MeasurementContext side2;
    linalg::StateVector singlet = qm::singlet();

    EprShotSampler(double a, double b)
        : side1({linalg::kron(spin_plus_projector(a), Matrix::identity(2)),
                 linalg::kron(Matrix::identity(2) - spin_plus_projector(a), Matrix::identity(2))}),
          side2({linalg::kron(Matrix::identity(2), spin_plus_projector(b)),
                 linalg::kron(Matrix::identity(2), Matrix::identity(2) - spin_plus_projector(b))}) {}

    // returns signs (+-1, +-1)
    std::pair<int, int> sample(SeededRng& rng) const {
        auto first = linalg::born_sample(singlet, side1, rng);
        auto second = linalg::born_sample(first.post, side2, rng);
        return {first.index == 0 ? 1 : -1, second.index == 0 ? 1 : -1};
    }
};

std::pair<int, int> ess_epr_shot(double a, double b, SeededRng& rng) {
    ess::SingletSpherePair pair;
    double s1 = ess::ess_measure(pair.first(), ess::bloch_axis(a), rng);
    double s2 = ess::ess_measure(pair.second(), ess::bloch_axis(b), rng);
    return {s1 > 0.0 ? 1 : -1, s2 > 0.0 ? 1 : -1};
}

}  // namespace

EprSweepResult run_epr_sweep(const std::vector<std::pair<double, double>>& axis_pairs,
                             int64_t shots_per_pair, Engine engine, uint64_t seed, int shards) {
    EprSweepResult res;
    res.axis_pairs = axis_pairs;
    res.counts.resize(axis_pairs.size());

    for (size_t pi = 0; pi < axis_pairs.size(); ++pi) {
        auto [a, b] = axis_pairs[pi];
        bool same_axis = std::abs(a - b) < 1e-12;
        EprPairCounts& c = res.counts[pi];
        // distinct substream family per pair
        uint64_t pair_seed = detail::mix64(seed ^ detail::mix64(0x9000 + pi));

        if (engine == Engine::Qm) {
            EprShotSampler sampler(a, b);
            for_each_shard(shots_per_pair, shards, [&](int64_t lo, int64_t hi) {
                for (int64_t i = lo; i < hi; ++i) {
                    SeededRng rng = derive_rng(pair_seed, static_cast<uint64_t>(i));
                    auto [s1, s2] = sampler.sample(rng);
                    ++c.n[static_cast<size_t>((s1 == 1 ? 0 : 2) + (s2 == 1 ? 0 : 1))];
                    if (same_axis && s1 == s2) ++res.same_axis_violations;
                }
            });
        } else {
            for_each_shard(shots_per_pair, shards, [&](int64_t lo, int64_t hi) {
                for (int64_t i = lo; i < hi; ++i) {
                    SeededRng rng = derive_rng(pair_seed, static_cast<uint64_t>(i));
                    auto [s1, s2] = ess_epr_shot(a, b, rng);
                    ++c.n[static_cast<size_t>((s1 == 1 ? 0 : 2) + (s2 == 1 ? 0 : 1))];
                    if (same_axis && s1 == s2) ++res.same_axis_violations;
                }
            });
        }
        res.table.settings.push_back({"a=" + std::to_string(a), "b=" + std::to_string(b)});
        res.table.values.push_back(c.correlation());
    }
    res.table.validate();
    return res;
}

ChshRunResult run_chsh(int64_t shots_per_setting, Engine engine, uint64_t seed, int shards) {
    ChshRunResult out;
    out.settings_a_b = {0.0, kPi / 2.0, kPi / 4.0, 3.0 * kPi / 4.0};
    const double a0 = out.settings_a_b[0], a1 = out.settings_a_b[1];
    const double b0 = out.settings_a_b[2], b1 = out.settings_a_b[3];

    std::vector<std::pair<double, double>> pairs = {{a0, b0}, {a0, b1}, {a1, b0}, {a1, b1}};
    EprSweepResult sweep = run_epr_sweep(pairs, shots_per_setting, engine, seed, shards);
    for (size_t i = 0; i < 4; ++i) out.counts[i] = sweep.counts[i];

    out.table.correlation[0][0] = out.counts[0].correlation();
    out.table.correlation[0][1] = out.counts[1].correlation();
    out.table.correlation[1][0] = out.counts[2].correlation();
    out.table.correlation[1][1] = out.counts[3].correlation();
    // pooled marginals: each side setting appears in two runs
    out.table.marginal_a[0] =
        0.5 * (out.counts[0].marginal_first() + out.counts[1].marginal_first());
    out.table.marginal_a[1] =
        0.5 * (out.counts[2].marginal_first() + out.counts[3].marginal_first());
    out.table.marginal_b[0] =
        0.5 * (out.counts[0].marginal_second() + out.counts[2].marginal_second());
    out.table.marginal_b[1] =
        0.5 * (out.counts[1].marginal_second() + out.counts[3].marginal_second());

    out.feasibility = contextprob::joint_measure_feasible(out.table);
    return out;
}

// ---- ideal teleportation ----------------------------------------------------------

TeleportIdealResult run_teleport_ideal(cx alpha, cx beta, int64_t shots, uint64_t seed,
                                       bool corrections, int shards) {
    TeleportIdealResult res;
    res.min_fidelity = 1.0;
    double fsum = 0.0;
    for_each_shard(shots, shards, [&](int64_t lo, int64_t hi) {
        for (int64_t i = lo; i < hi; ++i) {
            SeededRng rng = derive_rng(seed, static_cast<uint64_t>(i));
            if (corrections) {
                qm::TeleportResult r = qm::teleport(alpha, beta, rng);
                ++res.outcome_counts[static_cast<size_t>(r.outcome)];
                fsum += r.fidelity;
                res.min_fidelity = std::min(res.min_fidelity, r.fidelity);
            } else {
                // sample the outcome, then evaluate the uncorrected branch
                qm::TeleportResult r = qm::teleport(alpha, beta, rng);
                qm::TeleportBranch b = qm::teleport_branch(alpha, beta, r.outcome, false);
                ++res.outcome_counts[static_cast<size_t>(r.outcome)];
                fsum += b.fidelity;
                res.min_fidelity = std::min(res.min_fidelity, b.fidelity);
            }
        }
    });
    if (shots > 0) res.mean_fidelity = fsum / static_cast<double>(shots);
    return res;
}

// ---- optical teleportation ---------------------------------------------------------

Coincidence classify(const CoincidenceRecord& r) {
    bool base = r.d0 && r.d1 && r.d2;
    if (base && r.d_minus3 && !r.d_plus3) return Coincidence::Minus;
    if (base && r.d_plus3 && !r.d_minus3) return Coincidence::Plus;
    return Coincidence::None;
}

namespace {

CoincidenceRecord qm_optical_shot(const TeleportApparatus& app, SeededRng& rng) {
    const double enc = deg2rad(app.encoder_angle_deg);
    const double pbs = deg2rad(app.pbs_angle_deg);
    CoincidenceRecord rec;
    rec.d0 = true;  // the herald fires every ideal shot

    bool up1 = false, up2 = false;        // exit sides of photons {1},{2}
    qm::PolarizationState photon3(0.0);   // overwritten below
    bool photon3_mixed = false;

    if (app.mirror_aligned) {
        // Simultaneous arrival: the splitter performs the Bell-basis sort.
        // Each outcome carries weight 1/4 for any encoder angle; only the
        // singlet outcome puts the photons on opposite sides.
        int branch = static_cast<int>(rng.next_unit() * 4.0);
        if (branch > 3) branch = 3;
        auto kind = static_cast<qm::BellKind>(branch);
        if (kind == qm::BellKind::PsiMinus) {
            up1 = true;
            up2 = false;
            photon3 = qm::PolarizationState(enc);
        } else {
            bool up = rng.next_bool();
            up1 = up2 = up;
            switch (kind) {
                case qm::BellKind::PsiPlus:
                    photon3 = qm::PolarizationState(kPi - enc);
                    break;
                case qm::BellKind::PhiMinus:
                    photon3 = qm::PolarizationState(kPi / 2.0 - enc);
                    break;
                default:
                    photon3 = qm::PolarizationState(kPi / 2.0 + enc);
                    break;
            }
        }
    } else {
        // Distinguishable arrival: independent fair routing, no sorting;
        // photon {3} stays entangled with the unmeasured polarization of {2},
        // so its reduced state is fully mixed.
        up1 = rng.next_bool();
        up2 = rng.next_bool();
        photon3_mixed = true;
    }

    rec.d1 = up1 || up2;
    rec.d2 = !up1 || !up2;

    bool plus;
    if (photon3_mixed) {
        plus = rng.next_bool();
    } else {
        plus = (qm::pbs_route(photon3, pbs, rng).branch == qm::PbsBranch::Plus);
    }
    rec.d_plus3 = plus;
    rec.d_minus3 = !plus;
    rec.classification = classify(rec);
    return rec;
}

CoincidenceRecord ess_optical_shot(const TeleportApparatus& app, SeededRng& rng) {
    const double enc = deg2rad(app.encoder_angle_deg);
    const double pbs = deg2rad(app.pbs_angle_deg);
    CoincidenceRecord rec;
    rec.d0 = true;

    ess::EprPhotonPair pair23;
    ess::PhotonHvTable photon1 = ess::PhotonHvTable::prepared(enc);

    bool up1, up2;
    if (app.mirror_aligned) {
        auto [s1, s2] = ess::ess_bs_route(photon1, pair23.first(), 0.0, rng);
        up1 = (s1 == ess::Side::Up);
        up2 = (s2 == ess::Side::Up);
    } else {
        // One photon at a time: pass or reflect at random, polarization unread.
        up1 = rng.next_bool();
        up2 = rng.next_bool();
    }
    rec.d1 = up1 || up2;
    rec.d2 = !up1 || !up2;

    ess::HvOutcome o3 = ess::photon_hv(pair23.second(), pbs, rng);
    rec.d_plus3 = (o3 == ess::HvOutcome::H);
    rec.d_minus3 = !rec.d_plus3;
    rec.classification = classify(rec);
    return rec;
}

}  // namespace

CoincidenceRecord optical_teleport_shot(const TeleportApparatus& app, uint64_t seed,
                                        int64_t shot_index) {
    SeededRng rng = derive_rng(seed, static_cast<uint64_t>(shot_index));
    return app.engine == Engine::Qm ? qm_optical_shot(app, rng) : ess_optical_shot(app, rng);
}

OpticalCounts run_optical_teleport(const TeleportApparatus& app, uint64_t seed,
                                   std::vector<CoincidenceRecord>* record_sink, int shards) {
    OpticalCounts counts;
    for_each_shard(app.shots, shards, [&](int64_t lo, int64_t hi) {
        for (int64_t i = lo; i < hi; ++i) {
            CoincidenceRecord rec = optical_teleport_shot(app, seed, i);
            switch (rec.classification) {
                case Coincidence::Minus: ++counts.n_minus; break;
                case Coincidence::Plus: ++counts.n_plus; break;
                case Coincidence::None: ++counts.n_other; break;
            }
            if (record_sink) record_sink->push_back(rec);
        }
    });
    return counts;
}

// ---- rho ---------------------------------------------------------------------------

namespace {

RhoConfigCounts run_until_target(TeleportApparatus app, int64_t target, uint64_t seed) {
    RhoConfigCounts out;
    int64_t i = 0;
    while (out.n_minus + out.n_plus < target) {
        CoincidenceRecord rec = optical_teleport_shot(app, seed, i);
        if (rec.classification == Coincidence::Minus) ++out.n_minus;
        if (rec.classification == Coincidence::Plus) ++out.n_plus;
        ++i;
    }
    out.shots_run = i;
    return out;
}

}  // namespace

RhoResult rho_statistic(int64_t target, uint64_t seed, Engine engine) {
    if (target <= 0) throw ContractViolation("rho_statistic: target must be positive");
    RhoResult res;
    res.target = target;

    TeleportApparatus app;
    app.engine = engine;
    app.mirror_aligned = true;

    app.encoder_angle_deg = 45.0;
    app.pbs_angle_deg = 45.0;
    res.at45 = run_until_target(app, target, detail::mix64(seed ^ 0x45454545ULL));

    app.encoder_angle_deg = 90.0;
    app.pbs_angle_deg = 90.0;
    res.at90 = run_until_target(app, target, detail::mix64(seed ^ 0x90909090ULL));

    if (res.at90.n_minus > 0) {
        res.rho = static_cast<double>(res.at45.n_minus) / static_cast<double>(res.at90.n_minus);
    } else {
        // zero denominator: flagged, never a crash; the point estimate stays
        // meaningful on the extended reals
        res.insufficient = true;
        res.rho = res.at45.n_minus > 0 ? std::numeric_limits<double>::infinity()
                                       : std::numeric_limits<double>::quiet_NaN();
    }
    stats::Interval ci = stats::count_ratio_ci(res.at45.n_minus, res.at90.n_minus);
    res.ci_low = ci.lo;
    res.ci_high = ci.hi;
    return res;
}

// ---- delayed choice -----------------------------------------------------------------

std::vector<int> delayed_choice_sequence(const DelayedChoiceEntry& entry, int64_t shots,
                                         Engine engine, uint64_t seed) {
    std::vector<int> seq;
    seq.reserve(static_cast<size_t>(shots));
    for (int64_t i = 0; i < shots; ++i) {
        SeededRng rng = derive_rng(seed, static_cast<uint64_t>(i));
        if (engine == Engine::Qm) {
            seq.push_back(qm::mach_zehnder(entry.config, rng) == qm::MzDetector::Da ? 0 : 1);
        } else {
            ess::MzConfig cfg = entry.config == qm::MzConfig::Open ? ess::MzConfig::Open
                                                                   : ess::MzConfig::Closed;
            seq.push_back(
                ess::ess_mach_zehnder(cfg, entry.timing, rng).detector == ess::MzDetector::Da ? 0
                                                                                              : 1);
        }
    }
    return seq;
}

DelayedChoiceResult run_delayed_choice(const std::vector<DelayedChoiceEntry>& schedule,
                                       int64_t shots, Engine engine, uint64_t seed, int shards) {
    DelayedChoiceResult res;
    res.counts.resize(schedule.size(), {0, 0});
    for (size_t e = 0; e < schedule.size(); ++e) {
        uint64_t entry_seed = detail::mix64(seed ^ detail::mix64(0xD00 + e));
        const DelayedChoiceEntry& entry = schedule[e];
        for_each_shard(shots, shards, [&](int64_t lo, int64_t hi) {
            for (int64_t i = lo; i < hi; ++i) {
                SeededRng rng = derive_rng(entry_seed, static_cast<uint64_t>(i));
                int det;
                if (engine == Engine::Qm) {
                    det = qm::mach_zehnder(entry.config, rng) == qm::MzDetector::Da ? 0 : 1;
                } else {
                    ess::MzConfig cfg = entry.config == qm::MzConfig::Open ? ess::MzConfig::Open
                                                                           : ess::MzConfig::Closed;
                    det = ess::ess_mach_zehnder(cfg, entry.timing, rng).detector ==
                                  ess::MzDetector::Da
                              ? 0
                              : 1;
                }
                ++res.counts[e][static_cast<size_t>(det)];
            }
        });
    }

    // Timing independence at fixed seed: identical sequences for both
    // decision times, config by config.
    if (engine == Engine::Ess) {
        int64_t probe = std::min<int64_t>(shots, 4096);
        for (qm::MzConfig cfg : {qm::MzConfig::Open, qm::MzConfig::Closed}) {
            DelayedChoiceEntry before{cfg, ess::DecisionTime::BeforeEntry};
            DelayedChoiceEntry after{cfg, ess::DecisionTime::AfterEntry};
            if (delayed_choice_sequence(before, probe, engine, seed) !=
                delayed_choice_sequence(after, probe, engine, seed)) {
                res.timing_bit_identical = false;
            }
        }
    }
    return res;
}

}  // namespace epistate::experiments
