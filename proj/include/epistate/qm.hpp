// Standard-formalism models of the experiments: Bell states, photon
// polarization, the two-photon beam splitter, the polarizing beam splitter,
// the Mach-Zehnder interferometer, and the teleportation circuit.
//
// Conventions, kept module-local:
//  - single-particle basis order |+> = |H> = 0, |-> = |V> = 1;
//  - the simple beam splitter uses the mode rule u -> (u+d)/sqrt(2),
//    d -> (u-d)/sqrt(2) with polarization untouched;
//  - the interferometer instead uses quarter-wave reflection phases
//    (reflection multiplies the amplitude by i, transmission leaves it).
// The two conventions are not interchangeable.

#pragma once

#include <array>

#include "epistate/linalg.hpp"

namespace epistate::qm {

using linalg::Matrix;
using linalg::StateVector;

// Linear polarization at angle theta, |theta> = cos(theta)|H> + sin(theta)|V>.
// Angles are radians, canonical in [0, pi).
class PolarizationState {
  public:
    explicit PolarizationState(double theta);
    double theta() const { return theta_; }
    StateVector vector() const;

  private:
    double theta_;
};

double canonical_polarization_angle(double theta);

enum class BellKind { PsiMinus, PsiPlus, PhiMinus, PhiPlus };

// The four maximally entangled two-particle vectors; pairwise orthonormal.
StateVector bell_vector(BellKind kind);
StateVector singlet();  // bell_vector(PsiMinus)

// ---- dual-rail spaces ---------------------------------------------------------
//
// Single-photon modes uH=0, uV=1, dH=2, dV=3; the two-photon (bosonic) sector
// is spanned by the 10 occupancy states |mode_i, mode_j>, i <= j.

inline constexpr int kModeUH = 0;
inline constexpr int kModeUV = 1;
inline constexpr int kModeDH = 2;
inline constexpr int kModeDV = 3;
inline constexpr int kTwoPhotonDim = 10;

// One photon across both paths: a normalized 4-dim mode vector.
class DualRailPhoton {
  public:
    explicit DualRailPhoton(StateVector mode_amplitudes);
    static DualRailPhoton on_path(bool upper, const PolarizationState& pol);
    const StateVector& amplitudes() const { return v_; }
    double path_up_weight() const;

  private:
    StateVector v_;
};

// The splitter's single-photon mode map as a 4x4 unitary on (uH,uV,dH,dV):
// u -> (u+d)/sqrt(2), d -> (u-d)/sqrt(2), polarization untouched.
const Matrix& single_photon_bs_matrix();
DualRailPhoton beamsplitter_single(const DualRailPhoton& in);

int two_photon_index(int mode_a, int mode_b);  // unordered pair -> basis index
std::array<int, 2> two_photon_modes(int index);

// Normalized occupancy basis state for one photon in each listed mode (the
// modes may coincide).
StateVector two_photon_basis(int mode_a, int mode_b);

// Product of one photon on the upper path and one on the lower path with the
// given polarization amplitudes (each a 2-vector over H,V).
StateVector two_photon_product(const StateVector& pol_upper, const StateVector& pol_lower);

// Bell state in polarization across the two paths (upper photon x lower photon).
StateVector bell_two_photon(BellKind kind);

// The unitary induced on the two-photon sector by the beam-splitter mode map;
// preserves the norm, sends the singlet to opposite sides and the triplets to
// one side.
StateVector beamsplitter_transform(const StateVector& two_photon_in);

// Output-side classification projectors: both photons up / one each / both down.
enum class SidePattern { BothUp = 0, Opposite = 1, BothDown = 2 };
const linalg::MeasurementContext& side_pattern_context();

// Analytic side-pattern weights of a (normalized) two-photon output state.
std::array<double, 3> side_pattern_weights(const StateVector& two_photon_out);

// ---- polarizing beam splitter ----------------------------------------------

enum class PbsBranch { Plus, Minus };  // Plus = the H branch of the PBS basis

struct PbsResult {
    PbsBranch branch;
    PolarizationState post;  // snapped to the branch axis: a reproducible measurement
};

// Routes with probability cos^2(theta - basis) to the Plus branch. One rng draw.
PbsResult pbs_route(const PolarizationState& photon, double pbs_basis_angle, SeededRng& rng);

// ---- Mach-Zehnder ------------------------------------------------------------

enum class MzConfig { Open, Closed };
enum class MzDetector { Da, Db };

// Detection probability at Db for the closed interferometer with an extra
// relative phase delta on one arm; delta = 0 is the aligned instrument.
double mz_closed_db_probability(double delta);

// One photon through the interferometer. Closed: Db with certainty (the
// quarter-wave reflection phases interfere the Da amplitude away). Open:
// either detector with probability 1/2. Consumes one rng draw.
MzDetector mach_zehnder(MzConfig config, SeededRng& rng);

// ---- teleportation -----------------------------------------------------------

struct TeleportBranch {
    double probability;     // 1/4 for every Bell outcome
    StateVector raw_state;  // particle-3 state before correction
    StateVector corrected;  // after the outcome's fixed unitary
    double fidelity;        // |<psi_in | corrected>|^2
};

// Deterministic per-branch result of the teleportation circuit for input
// alpha|+> + beta|->.
TeleportBranch teleport_branch(cx alpha, cx beta, BellKind outcome, bool apply_correction = true);

struct TeleportResult {
    BellKind outcome;
    StateVector corrected_state;
    double fidelity;
};

// Samples the Bell outcome (one draw through the 8-dim circuit state) and
// applies the outcome's correction.
TeleportResult teleport(cx alpha, cx beta, SeededRng& rng);

// The correction unitary attached to each Bell outcome.
Matrix correction_unitary(BellKind outcome);

}  // namespace epistate::qm
