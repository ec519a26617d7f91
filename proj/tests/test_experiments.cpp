#include <doctest.h>

#include <cmath>

#include "epistate/experiments.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace epistate;
using namespace epistate::experiments;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("two-slit spectrum: normalization, sign changes, mixture identity") {
    auto model = DoubleSlitModel::standard();
    auto spec = double_slit_spectrum(model, true);

    double sum = 0.0;
    for (double t : spec.total) sum += t;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));

    CHECK(interference_sign_changes(spec) >= 3);

    // dropping the cross term reproduces the even classical mixture
    for (size_t k = 0; k < spec.total.size(); ++k) {
        CHECK(std::abs(spec.term_a[k] + spec.term_b[k] - spec.classical_mixture[k]) < 1e-10);
    }
}

TEST_CASE("two-slit spectrum agrees with the full-matrix route") {
    auto model = DoubleSlitModel::standard(32, 2, 8);
    auto spec = double_slit_spectrum(model, true);
    for (int k = 0; k < model.n_sites; ++k) {
        auto split = oracles::matrix_route_split(model, oracles::dft_projector(model.n_sites, k));
        CHECK(std::abs(split.through_a - spec.term_a[static_cast<size_t>(k)]) < 1e-10);
        CHECK(std::abs(split.through_b - spec.term_b[static_cast<size_t>(k)]) < 1e-10);
        CHECK(std::abs(split.cross - spec.interference[static_cast<size_t>(k)]) < 1e-10);
    }
}

TEST_CASE("observables compatible with the slits show no cross term") {
    auto model = DoubleSlitModel::standard();
    for (int site = 0; site < model.n_sites; site += 7) {
        linalg::Matrix k_site(model.n_sites);
        k_site.at(site, site) = 1.0;
        auto split = oracles::matrix_route_split(model, k_site);
        CHECK(std::abs(split.cross) < 1e-12);
    }
}

TEST_CASE("two-slit histogram is deterministic and shard-invariant") {
    auto model = DoubleSlitModel::standard();
    auto h1 = double_slit_sample(model, true, 20000, 77, 1);
    auto h3 = double_slit_sample(model, true, 20000, 77, 3);
    auto h8 = double_slit_sample(model, true, 20000, 77, 8);
    CHECK(h1 == h3);
    CHECK(h1 == h8);
    int64_t total = 0;
    for (int64_t c : h1) total += c;
    CHECK(total == 20000);
}

TEST_CASE("model validation rejects broken geometry") {
    DoubleSlitModel bad = DoubleSlitModel::standard();
    bad.slit_b = bad.slit_a;
    CHECK_THROWS_AS(bad.validate(), ContractViolation);
    DoubleSlitModel empty = DoubleSlitModel::standard();
    empty.slit_a.clear();
    CHECK_THROWS_AS(empty.validate(), ContractViolation);
    DoubleSlitModel holes = DoubleSlitModel::standard();
    holes.momentum_bins.pop_back();
    CHECK_THROWS_AS(holes.validate(), ContractViolation);
}

TEST_CASE("EPR sweep: anticorrelation, the cosine law, both engines") {
    for (Engine engine : {Engine::Qm, Engine::Ess}) {
        auto same = run_epr_sweep({{0.7, 0.7}}, 100000, engine, 91);
        CHECK(same.same_axis_violations == 0);
        CHECK(same.counts[0].correlation() == doctest::Approx(-1.0));

        auto cross = run_epr_sweep({{0.0, kPi / 2}, {0.0, kPi / 3}}, 100000, engine, 92);
        // E = -cos(delta): 0 and -1/2
        CHECK(std::abs(cross.counts[0].correlation()) < 5.0 / std::sqrt(100000.0));
        CHECK(std::abs(cross.counts[1].correlation() + 0.5) < 5.0 / std::sqrt(100000.0));
    }
}

TEST_CASE("EPR sweep is shard-invariant") {
    auto a = run_epr_sweep({{0.0, 1.0}}, 30000, Engine::Qm, 93, 1);
    auto b = run_epr_sweep({{0.0, 1.0}}, 30000, Engine::Qm, 93, 4);
    CHECK(a.counts[0].n == b.counts[0].n);
    auto c = run_epr_sweep({{0.0, 1.0}}, 30000, Engine::Ess, 93, 1);
    auto d = run_epr_sweep({{0.0, 1.0}}, 30000, Engine::Ess, 93, 5);
    CHECK(c.counts[0].n == d.counts[0].n);
}

TEST_CASE("CHSH run: near-maximal violation under the quantum engine") {
    auto res = run_chsh(200000, Engine::Qm, 94);
    CHECK(std::abs(res.feasibility.chsh_witness - 2.0 * std::sqrt(2.0)) < 0.05);
    CHECK_FALSE(res.feasibility.feasible);
}

TEST_CASE("ideal teleportation: unit fidelity, quarter outcomes") {
    SeededRng rng(95);
    auto [alpha, beta] = testutil::random_qubit_amplitudes(rng);
    auto res = run_teleport_ideal(alpha, beta, 100000, 96);
    CHECK(res.mean_fidelity == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(res.min_fidelity == doctest::Approx(1.0).epsilon(1e-10));
    for (int64_t c : res.outcome_counts) CHECK(testutil::within_5sigma(c, 100000, 0.25));

    // corrections off, basis-state input: half the branches teleport as-is
    auto raw = run_teleport_ideal(cx(1, 0), cx(0, 0), 50000, 97, false);
    CHECK(raw.min_fidelity == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(raw.mean_fidelity - 0.5) < 0.02);
}

TEST_CASE("optical teleportation: engine-dependent coincidence tables") {
    TeleportApparatus app;
    app.shots = 100000;

    SUBCASE("quantum engine, aligned, ninety degrees: no minus coincidences") {
        app.engine = Engine::Qm;
        auto counts = run_optical_teleport(app, 98);
        CHECK(counts.n_minus == 0);
        CHECK(testutil::within_5sigma(counts.n_plus, app.shots, 0.25));
    }

    SUBCASE("quantum engine, aligned, forty-five degrees: still no minus") {
        app.engine = Engine::Qm;
        app.encoder_angle_deg = app.pbs_angle_deg = 45.0;
        auto counts = run_optical_teleport(app, 99);
        CHECK(counts.n_minus == 0);
        CHECK(testutil::within_5sigma(counts.n_plus, app.shots, 0.25));
    }

    SUBCASE("quantum engine, misaligned: minus and plus equalize") {
        app.engine = Engine::Qm;
        app.mirror_aligned = false;
        auto counts = run_optical_teleport(app, 100);
        CHECK(testutil::within_5sigma(counts.n_minus, counts.n_minus + counts.n_plus, 0.5));
        CHECK(testutil::within_5sigma(counts.n_minus + counts.n_plus, app.shots, 0.5));
    }

    SUBCASE("elementary-state engine, ninety degrees: exactly zero minus") {
        app.engine = Engine::Ess;
        auto counts = run_optical_teleport(app, 101);
        CHECK(counts.n_minus == 0);
        auto rates = oracles::ess_optical_rates(90.0, 90.0);
        CHECK(rates.minus == 0.0);
        CHECK(testutil::within_5sigma(counts.n_plus, app.shots, rates.plus));
    }

    SUBCASE("elementary-state engine, forty-five degrees: enumeration rates") {
        app.engine = Engine::Ess;
        app.encoder_angle_deg = app.pbs_angle_deg = 45.0;
        auto counts = run_optical_teleport(app, 102);
        auto rates = oracles::ess_optical_rates(45.0, 45.0);
        CHECK(rates.minus == doctest::Approx(0.125).epsilon(1e-15));
        CHECK(rates.plus == doctest::Approx(0.125).epsilon(1e-15));
        CHECK(testutil::within_5sigma(counts.n_minus, app.shots, rates.minus));
        CHECK(testutil::within_5sigma(counts.n_plus, app.shots, rates.plus));
        CHECK(counts.n_minus > 0);
    }

    SUBCASE("records classify consistently and shard merging is invariant") {
        app.engine = Engine::Ess;
        app.encoder_angle_deg = app.pbs_angle_deg = 45.0;
        app.shots = 5000;
        std::vector<CoincidenceRecord> records;
        auto c1 = run_optical_teleport(app, 103, &records, 1);
        for (const auto& rec : records) {
            CHECK(rec.classification == classify(rec));
            CHECK(rec.d0);
            CHECK((rec.d_plus3 != rec.d_minus3));
            if (rec.classification == Coincidence::Minus) {
                CHECK((rec.d1 && rec.d2 && rec.d_minus3 && !rec.d_plus3));
            }
        }
        auto c4 = run_optical_teleport(app, 103, nullptr, 4);
        CHECK(c1.n_minus == c4.n_minus);
        CHECK(c1.n_plus == c4.n_plus);
        CHECK(c1.n_other == c4.n_other);
    }
}

TEST_CASE("rho: exact zero denominators produce the documented extended values") {
    auto ess = rho_statistic(20000, 104, Engine::Ess);
    CHECK(ess.at45.n_minus + ess.at45.n_plus == 20000);
    CHECK(ess.at90.n_minus + ess.at90.n_plus == 20000);
    CHECK(ess.at90.n_minus == 0);
    CHECK(std::isinf(ess.rho));
    CHECK(ess.ci_low > 1.0);
    CHECK(std::isinf(ess.ci_high));
    CHECK(ess.insufficient);  // zero denominator is flagged even with the inf estimate
    // point estimate agrees with the enumeration oracle on the extended reals
    CHECK(std::isinf(oracles::ess_rho_oracle()));

    auto qm = rho_statistic(20000, 105, Engine::Qm);
    CHECK(qm.at45.n_minus == 0);
    CHECK(qm.at90.n_minus == 0);
    CHECK(qm.insufficient);
    CHECK(std::isnan(qm.rho));
    CHECK(qm.ci_low == 0.0);
    CHECK(std::isinf(qm.ci_high));
    CHECK(qm.ci_low <= 1.0);
    CHECK(qm.ci_high >= 1.0);
}

TEST_CASE("rho is reproducible at fixed seed") {
    auto a = rho_statistic(5000, 106, Engine::Ess);
    auto b = rho_statistic(5000, 106, Engine::Ess);
    CHECK(a.at45.n_minus == b.at45.n_minus);
    CHECK(a.at45.shots_run == b.at45.shots_run);
    CHECK(a.at90.shots_run == b.at90.shots_run);
}

TEST_CASE("delayed choice: certainty when closed, parity when open, timing-blind") {
    for (Engine engine : {Engine::Qm, Engine::Ess}) {
        std::vector<DelayedChoiceEntry> schedule = {
            {qm::MzConfig::Closed, ess::DecisionTime::BeforeEntry},
            {qm::MzConfig::Open, ess::DecisionTime::AfterEntry},
        };
        auto res = run_delayed_choice(schedule, 100000, engine, 107);
        CHECK(res.counts[0][0] == 0);
        CHECK(res.counts[0][1] == 100000);
        CHECK(testutil::within_5sigma(res.counts[1][0], 100000, 0.5));
        CHECK(res.timing_bit_identical);
    }
}

TEST_CASE("delayed-choice sequences are bit-identical across timing settings") {
    DelayedChoiceEntry before{qm::MzConfig::Open, ess::DecisionTime::BeforeEntry};
    DelayedChoiceEntry after{qm::MzConfig::Open, ess::DecisionTime::AfterEntry};
    auto s1 = delayed_choice_sequence(before, 50000, Engine::Ess, 108);
    auto s2 = delayed_choice_sequence(after, 50000, Engine::Ess, 108);
    CHECK(s1 == s2);
}
