// The local "elementary state" engine: per-particle records of predetermined
// outcomes, populated lazily. A record answers any single context
// deterministically once asked; a fresh question disturbs it (repaint),
// discarding what was memoized at other contexts. EPR partners are negative
// copies, realized by propagating the first sampled value to the partner and
// consuming the pair link. Spin-1/2 records live on a two-colored sphere with
// opposite colors at antipodes; photon records are per-basis H/V tables.

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>

#include "epistate/common.hpp"
#include "epistate/rng.hpp"

namespace epistate::ess {

struct Dir3 {
    double x = 0.0, y = 0.0, z = 1.0;
    Dir3 normalized() const;
    Dir3 operator-() const { return Dir3{-x, -y, -z}; }
};

double dot(const Dir3& a, const Dir3& b);
Dir3 bloch_axis(double theta);  // x-z plane axis at Bloch angle theta

// Float-safe memo key: components quantized to 1e-9, antipodal directions
// share one key plus a sign flag.
struct AxisKey {
    int64_t qx, qy, qz;
    bool flipped;  // true when the canonical representative is the negation
    bool same_axis(const AxisKey& o) const { return qx == o.qx && qy == o.qy && qz == o.qz; }
};
AxisKey canonical_axis(const Dir3& n);

enum class SpinColor { Black, White };  // Black => +1/2, White => -1/2

class ElementaryStateSphere {
  public:
    ElementaryStateSphere() = default;

    // Paints a definite pure state: the +1/2 direction is `up_axis`.
    static ElementaryStateSphere prepared(const Dir3& up_axis);

    bool has_memo(const Dir3& axis) const;
    std::optional<double> memoized_value(const Dir3& axis) const;  // +-1/2
    const std::optional<Dir3>& preparation_axis() const { return prep_; }
    int memo_size() const { return count_; }

    // Invariant sweep: colors at directions memoized on both partners are
    // opposite. (Antipodal consistency is structural: one key per axis.)
    static bool pair_anticorrelated(const ElementaryStateSphere& a, const ElementaryStateSphere& b);

    friend class SingletSpherePair;
    friend double ess_measure(ElementaryStateSphere& sphere, const Dir3& axis, SeededRng& rng);

  private:
    struct Entry {
        AxisKey key;
        SpinColor color_at_canonical;
    };
    static constexpr int kCap = 4;
    std::array<Entry, kCap> memo_{};
    int count_ = 0;
    std::optional<Dir3> prep_;
    ElementaryStateSphere* partner_ = nullptr;
    bool entangled_ = false;

    const Entry* find(const AxisKey& k) const;
    void insert(const AxisKey& k, SpinColor c);
    void repaint_keep(const AxisKey& k, SpinColor c);
};

// Two spheres that are negative copies of one another. The pair owns both
// records; one experiment shot owns the pair.
class SingletSpherePair {
  public:
    SingletSpherePair();
    SingletSpherePair(const SingletSpherePair&) = delete;
    SingletSpherePair& operator=(const SingletSpherePair&) = delete;

    ElementaryStateSphere& first() { return a_; }
    ElementaryStateSphere& second() { return b_; }

  private:
    ElementaryStateSphere a_, b_;
};

// Spin projection along `axis`: memoized if present, else sampled from the
// Born marginal of the current preparation (fair for an unprepared EPR
// member), then memoized; the opposite color reaches a still-linked partner;
// all other memo entries are invalidated (repaint) and the preparation is
// reset to the measured axis with the measured sign. Returns +-0.5.
double ess_measure(ElementaryStateSphere& sphere, const Dir3& axis, SeededRng& rng);

// ---- photons -----------------------------------------------------------------

enum class HvOutcome { H, V };

class PhotonHvTable {
  public:
    PhotonHvTable() = default;
    static PhotonHvTable prepared(double polarization_angle);

    bool has_memo(double basis) const;
    std::optional<HvOutcome> memoized_outcome(double basis) const;
    const std::optional<double>& preparation_angle() const { return prep_; }
    int memo_size() const { return count_; }

    static bool pair_anticorrelated(const PhotonHvTable& a, const PhotonHvTable& b);

    friend class EprPhotonPair;
    friend HvOutcome photon_hv(PhotonHvTable& table, double basis, SeededRng& rng);

  private:
    struct Entry {
        int64_t qbasis;
        HvOutcome outcome;
    };
    static constexpr int kCap = 4;
    std::array<Entry, kCap> memo_{};
    int count_ = 0;
    std::optional<double> prep_;  // polarization direction in [0, pi)
    PhotonHvTable* partner_ = nullptr;
    bool entangled_ = false;

    const Entry* find(int64_t q) const;
    void insert(int64_t q, HvOutcome o);
};

int64_t quantize_basis(double basis);  // canonical [0, pi) at 1e-9 resolution

class EprPhotonPair {
  public:
    EprPhotonPair();
    EprPhotonPair(const EprPhotonPair&) = delete;
    EprPhotonPair& operator=(const EprPhotonPair&) = delete;

    PhotonHvTable& first() { return a_; }
    PhotonHvTable& second() { return b_; }

  private:
    PhotonHvTable a_, b_;
};

// H with probability cos^2(theta - basis) for a table prepared at theta (fair
// when unprepared); memoized afterwards, partner receives the opposite value
// at the same basis while the pair link holds.
HvOutcome photon_hv(PhotonHvTable& table, double basis, SeededRng& rng);

// ---- beam splitter and interferometer ----------------------------------------

enum class Side { Up, Down };

// Simultaneous arrival at the beam splitter: both records are asked for their
// H/V value in the splitter's basis. Identical values steer both photons to
// one side (a single fair draw picks which); different values route each
// photon independently and fairly.
std::pair<Side, Side> ess_bs_route(PhotonHvTable& p1, PhotonHvTable& p2, double bs_basis,
                                   SeededRng& rng);

// The device-visible part of a particle and the coherent accompaniment that
// spans every open path.
struct KernDarkField {
    Side kern_path;
    std::array<bool, 2> dark_field_paths;  // [up, down] occupancy
    bool coherent = true;
};

enum class MzConfig { Open, Closed };
enum class MzDetector { Da, Db };
enum class DecisionTime { BeforeEntry, AfterEntry };

struct EssMzResult {
    MzDetector detector;
    KernDarkField field;
};

// The kern picks one arm at the entrance splitter (one fair draw); the dark
// field occupies both arms. Closed: the recombined dark field steers the kern
// to Db. Open: the kern's own arm decides. The routing rule never reads
// decision_time, so timing cannot change outcomes.
EssMzResult ess_mach_zehnder(MzConfig config, DecisionTime decision_time, SeededRng& rng);

}  // namespace epistate::ess
