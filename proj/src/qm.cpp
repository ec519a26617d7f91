#include "epistate/qm.hpp"

#include <cmath>

namespace epistate::qm {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void require(bool ok, const char* msg) {
    if (!ok) throw ContractViolation(msg);
}

}  // namespace

double canonical_polarization_angle(double theta) {
    double t = std::fmod(theta, kPi);
    if (t < 0.0) t += kPi;
    if (t >= kPi) t -= kPi;
    return t;
}

PolarizationState::PolarizationState(double theta) : theta_(canonical_polarization_angle(theta)) {}

StateVector PolarizationState::vector() const {
    return StateVector({cx(std::cos(theta_), 0.0), cx(std::sin(theta_), 0.0)}, {"H", "V"});
}

StateVector bell_vector(BellKind kind) {
    std::vector<std::string> labels = {"++", "+-", "-+", "--"};
    switch (kind) {
        case BellKind::PsiMinus:
            return StateVector({0.0, kInvSqrt2, -kInvSqrt2, 0.0}, labels);
        case BellKind::PsiPlus:
            return StateVector({0.0, kInvSqrt2, kInvSqrt2, 0.0}, labels);
        case BellKind::PhiMinus:
            return StateVector({kInvSqrt2, 0.0, 0.0, -kInvSqrt2}, labels);
        case BellKind::PhiPlus:
            return StateVector({kInvSqrt2, 0.0, 0.0, kInvSqrt2}, labels);
    }
    throw ContractViolation("bell_vector: unknown kind");
}

StateVector singlet() { return bell_vector(BellKind::PsiMinus); }

namespace {

const char* kModeNames[4] = {"uH", "uV", "dH", "dV"};

struct PairTable {
    int index[4][4];
    std::array<int, 2> modes[kTwoPhotonDim];
    PairTable() {
        int n = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) {
                index[i][j] = n;
                index[j][i] = n;
                modes[n] = {i, j};
                ++n;
            }
    }
};

const PairTable& pair_table() {
    static const PairTable t;
    return t;
}

std::vector<std::string> two_photon_labels() {
    std::vector<std::string> labels(kTwoPhotonDim);
    for (int k = 0; k < kTwoPhotonDim; ++k) {
        auto [a, b] = pair_table().modes[k];
        labels[static_cast<size_t>(k)] = std::string(kModeNames[a]) + "," + kModeNames[b];
    }
    return labels;
}

// Beam-splitter map on creation operators, a_in_i -> sum_k U[k][i] b_out_k.
// Upper input keeps the plus sign, lower input picks up the minus on its
// lower-output component; polarization is untouched.
double bs_mode_coefficient(int out_mode, int in_mode) {
    int out_path = out_mode / 2, in_path = in_mode / 2;
    int out_pol = out_mode % 2, in_pol = in_mode % 2;
    if (out_pol != in_pol) return 0.0;
    if (in_path == 0) return kInvSqrt2;                     // u -> (u + d)/sqrt2
    return out_path == 0 ? kInvSqrt2 : -kInvSqrt2;          // d -> (u - d)/sqrt2
}

// The induced two-photon matrix, built once.
const Matrix& two_photon_bs_matrix() {
    static const Matrix t = [] {
        Matrix m(kTwoPhotonDim);
        const double sqrt2 = std::sqrt(2.0);
        for (int col = 0; col < kTwoPhotonDim; ++col) {
            auto [i, j] = pair_table().modes[col];
            double in_norm = (i == j) ? sqrt2 : 1.0;
            for (int row = 0; row < kTwoPhotonDim; ++row) {
                auto [k, l] = pair_table().modes[row];
                double amp;
                if (k == l) {
                    amp = sqrt2 * bs_mode_coefficient(k, i) * bs_mode_coefficient(k, j);
                } else {
                    amp = bs_mode_coefficient(k, i) * bs_mode_coefficient(l, j) +
                          bs_mode_coefficient(l, i) * bs_mode_coefficient(k, j);
                }
                m.at(row, col) = amp / in_norm;
            }
        }
        return m;
    }();
    return t;
}

}  // namespace

DualRailPhoton::DualRailPhoton(StateVector mode_amplitudes) : v_(std::move(mode_amplitudes)) {
    require(v_.dim() == 4, "DualRailPhoton: expected a 4-dim mode vector");
    if (!v_.is_normalized()) throw InvalidState("DualRailPhoton: amplitudes not normalized");
}

DualRailPhoton DualRailPhoton::on_path(bool upper, const PolarizationState& pol) {
    StateVector p = pol.vector();
    std::vector<cx> amp(4, cx(0.0, 0.0));
    int base = upper ? 0 : 2;
    amp[static_cast<size_t>(base)] = p[0];
    amp[static_cast<size_t>(base + 1)] = p[1];
    return DualRailPhoton(StateVector(std::move(amp), {"uH", "uV", "dH", "dV"}));
}

double DualRailPhoton::path_up_weight() const {
    return std::norm(v_[0]) + std::norm(v_[1]);
}

const Matrix& single_photon_bs_matrix() {
    static const Matrix m = [] {
        Matrix u(4);
        for (int out = 0; out < 4; ++out)
            for (int in = 0; in < 4; ++in) u.at(out, in) = bs_mode_coefficient(out, in);
        return u;
    }();
    return m;
}

DualRailPhoton beamsplitter_single(const DualRailPhoton& in) {
    return DualRailPhoton(linalg::apply(single_photon_bs_matrix(), in.amplitudes()));
}

int two_photon_index(int mode_a, int mode_b) {
    require(mode_a >= 0 && mode_a < 4 && mode_b >= 0 && mode_b < 4,
            "two_photon_index: mode out of range");
    return pair_table().index[mode_a][mode_b];
}

std::array<int, 2> two_photon_modes(int index) {
    require(index >= 0 && index < kTwoPhotonDim, "two_photon_modes: index out of range");
    return pair_table().modes[index];
}

StateVector two_photon_basis(int mode_a, int mode_b) {
    return StateVector::basis_state(kTwoPhotonDim, two_photon_index(mode_a, mode_b),
                                    two_photon_labels());
}

StateVector two_photon_product(const StateVector& pol_upper, const StateVector& pol_lower) {
    require(pol_upper.dim() == 2 && pol_lower.dim() == 2,
            "two_photon_product: polarization vectors must be 2-dim");
    std::vector<cx> amp(kTwoPhotonDim, cx(0.0, 0.0));
    for (int pu = 0; pu < 2; ++pu)
        for (int pl = 0; pl < 2; ++pl) {
            int idx = two_photon_index(pu, 2 + pl);  // upper path mode x lower path mode
            amp[static_cast<size_t>(idx)] += pol_upper[pu] * pol_lower[pl];
        }
    return StateVector(std::move(amp), two_photon_labels());
}

StateVector bell_two_photon(BellKind kind) {
    StateVector h = StateVector::basis_state(2, 0, {"H", "V"});
    StateVector v = StateVector::basis_state(2, 1, {"H", "V"});
    auto combine = [&](const StateVector& a1, const StateVector& b1, const StateVector& a2,
                       const StateVector& b2, double sign) {
        StateVector t1 = two_photon_product(a1, b1);
        StateVector t2 = two_photon_product(a2, b2);
        std::vector<cx> amp(kTwoPhotonDim);
        for (int k = 0; k < kTwoPhotonDim; ++k)
            amp[static_cast<size_t>(k)] = (t1[k] + sign * t2[k]) * kInvSqrt2;
        return StateVector(std::move(amp), two_photon_labels());
    };
    switch (kind) {
        case BellKind::PsiMinus: return combine(h, v, v, h, -1.0);
        case BellKind::PsiPlus:  return combine(h, v, v, h, +1.0);
        case BellKind::PhiMinus: return combine(h, h, v, v, -1.0);
        case BellKind::PhiPlus:  return combine(h, h, v, v, +1.0);
    }
    throw ContractViolation("bell_two_photon: unknown kind");
}

StateVector beamsplitter_transform(const StateVector& two_photon_in) {
    require(two_photon_in.dim() == kTwoPhotonDim,
            "beamsplitter_transform: expected the two-photon mode space");
    return linalg::apply(two_photon_bs_matrix(), two_photon_in);
}

const linalg::MeasurementContext& side_pattern_context() {
    static const linalg::MeasurementContext ctx = [] {
        Matrix uu = Matrix::zero(kTwoPhotonDim);
        Matrix ud = Matrix::zero(kTwoPhotonDim);
        Matrix dd = Matrix::zero(kTwoPhotonDim);
        for (int k = 0; k < kTwoPhotonDim; ++k) {
            auto [a, b] = pair_table().modes[k];
            int ups = (a < 2 ? 1 : 0) + (b < 2 ? 1 : 0);
            Matrix& target = (ups == 2) ? uu : (ups == 1 ? ud : dd);
            target.at(k, k) = 1.0;
        }
        return linalg::MeasurementContext({uu, ud, dd});
    }();
    return ctx;
}

std::array<double, 3> side_pattern_weights(const StateVector& two_photon_out) {
    std::array<double, 3> w{0.0, 0.0, 0.0};
    for (int k = 0; k < kTwoPhotonDim; ++k) {
        auto [a, b] = pair_table().modes[k];
        int ups = (a < 2 ? 1 : 0) + (b < 2 ? 1 : 0);
        int slot = (ups == 2) ? 0 : (ups == 1 ? 1 : 2);
        w[static_cast<size_t>(slot)] += std::norm(two_photon_out[k]);
    }
    return w;
}

PbsResult pbs_route(const PolarizationState& photon, double pbs_basis_angle, SeededRng& rng) {
    double basis = canonical_polarization_angle(pbs_basis_angle);
    double diff = photon.theta() - basis;
    double p_plus = std::cos(diff) * std::cos(diff);
    bool plus = rng.next_unit() < p_plus;
    double post_angle = plus ? basis : basis + kPi / 2.0;
    return PbsResult{plus ? PbsBranch::Plus : PbsBranch::Minus, PolarizationState(post_angle)};
}

double mz_closed_db_probability(double delta) {
    // Two-mode amplitudes; reflection multiplies by i, transmission by 1.
    cx arm_a = kInvSqrt2;             // transmitted at the entrance splitter
    cx arm_b = cx(0.0, 1.0) * kInvSqrt2;  // reflected
    arm_b *= std::exp(cx(0.0, delta));
    cx out_db = cx(0.0, 1.0) * kInvSqrt2 * arm_a + kInvSqrt2 * arm_b;
    return std::norm(out_db);
}

MzDetector mach_zehnder(MzConfig config, SeededRng& rng) {
    if (config == MzConfig::Closed) {
        double p_db = mz_closed_db_probability(0.0);
        return rng.next_unit() < p_db ? MzDetector::Db : MzDetector::Da;
    }
    // Open: the photon is found in one arm with probability 1/2 each.
    return rng.next_unit() < 0.5 ? MzDetector::Da : MzDetector::Db;
}

Matrix correction_unitary(BellKind outcome) {
    switch (outcome) {
        case BellKind::PsiMinus:
            return Matrix::identity(2);
        case BellKind::PsiPlus:
            return Matrix(2, {-1.0, 0.0, 0.0, 1.0});
        case BellKind::PhiMinus:
            return Matrix(2, {0.0, 1.0, 1.0, 0.0});
        case BellKind::PhiPlus:
            return Matrix(2, {0.0, -1.0, 1.0, 0.0});
    }
    throw ContractViolation("correction_unitary: unknown kind");
}

namespace {

const linalg::MeasurementContext& bell_measurement_context() {
    // Projectors |B_k><B_k| (x) I on particles 1,2 of the 3-particle space.
    static const linalg::MeasurementContext ctx = [] {
        std::vector<Matrix> ps;
        for (BellKind k : {BellKind::PsiMinus, BellKind::PsiPlus, BellKind::PhiMinus,
                           BellKind::PhiPlus}) {
            Matrix b = Matrix::outer(bell_vector(k));
            ps.push_back(linalg::kron(b, Matrix::identity(2)));
        }
        return linalg::MeasurementContext(std::move(ps));
    }();
    return ctx;
}

StateVector input_state(cx alpha, cx beta) {
    double n = std::sqrt(std::norm(alpha) + std::norm(beta));
    if (std::abs(n - 1.0) > 1e-9)
        throw InvalidState("teleport: |alpha|^2 + |beta|^2 must equal 1");
    return StateVector({alpha, beta}, {"+", "-"});
}

// Particle-3 component of a post-measurement product state |B_k> (x) |phi>.
StateVector extract_particle3(const StateVector& post, BellKind outcome) {
    StateVector bell = bell_vector(outcome);
    std::vector<cx> phi(2, cx(0.0, 0.0));
    for (int m = 0; m < 2; ++m) {
        cx s = 0.0;
        for (int b = 0; b < 4; ++b) s += std::conj(bell[b]) * post[b * 2 + m];
        phi[static_cast<size_t>(m)] = s;
    }
    return StateVector(std::move(phi), {"+", "-"});
}

}  // namespace

TeleportBranch teleport_branch(cx alpha, cx beta, BellKind outcome, bool apply_correction) {
    StateVector psi_in = input_state(alpha, beta);
    StateVector circuit = linalg::tensor(psi_in, singlet());
    StateVector bell = bell_vector(outcome);

    std::vector<cx> phi(2, cx(0.0, 0.0));
    for (int m = 0; m < 2; ++m) {
        cx s = 0.0;
        for (int b = 0; b < 4; ++b) s += std::conj(bell[b]) * circuit[b * 2 + m];
        phi[static_cast<size_t>(m)] = s;
    }
    StateVector raw_unnorm(std::move(phi), {"+", "-"});
    double p = raw_unnorm.norm() * raw_unnorm.norm();
    StateVector raw = raw_unnorm.normalized();

    StateVector corrected = apply_correction ? linalg::apply(correction_unitary(outcome), raw) : raw;
    double f = std::norm(linalg::inner(psi_in, corrected));
    return TeleportBranch{p, raw, corrected, f};
}

TeleportResult teleport(cx alpha, cx beta, SeededRng& rng) {
    StateVector psi_in = input_state(alpha, beta);
    StateVector circuit = linalg::tensor(psi_in, singlet());
    auto outcome = linalg::born_sample(circuit, bell_measurement_context(), rng);
    BellKind kind = static_cast<BellKind>(outcome.index);
    StateVector particle3 = extract_particle3(outcome.post, kind);
    StateVector corrected = linalg::apply(correction_unitary(kind), particle3);
    double f = std::norm(linalg::inner(psi_in, corrected));
    return TeleportResult{kind, corrected, f};
}

}  // namespace epistate::qm
