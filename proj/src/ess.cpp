#include "epistate/ess.hpp"

#include <cmath>

namespace epistate::ess {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

int64_t quant(double v) { return static_cast<int64_t>(std::llround(v * 1e9)); }
}  // namespace

Dir3 Dir3::normalized() const {
    double n = std::sqrt(x * x + y * y + z * z);
    if (n < 1e-12) throw ContractViolation("Dir3: zero direction");
    return Dir3{x / n, y / n, z / n};
}

double dot(const Dir3& a, const Dir3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Dir3 bloch_axis(double theta) { return Dir3{std::sin(theta), 0.0, std::cos(theta)}; }

AxisKey canonical_axis(const Dir3& n) {
    Dir3 u = n.normalized();
    int64_t qx = quant(u.x), qy = quant(u.y), qz = quant(u.z);
    // canonical representative: first nonzero of (z, y, x) positive
    bool flip = false;
    if (qz != 0) {
        flip = qz < 0;
    } else if (qy != 0) {
        flip = qy < 0;
    } else {
        flip = qx < 0;
    }
    if (flip) {
        qx = -qx;
        qy = -qy;
        qz = -qz;
    }
    return AxisKey{qx, qy, qz, flip};
}

ElementaryStateSphere ElementaryStateSphere::prepared(const Dir3& up_axis) {
    ElementaryStateSphere s;
    s.prep_ = up_axis.normalized();
    return s;
}

const ElementaryStateSphere::Entry* ElementaryStateSphere::find(const AxisKey& k) const {
    for (int i = 0; i < count_; ++i)
        if (memo_[static_cast<size_t>(i)].key.same_axis(k)) return &memo_[static_cast<size_t>(i)];
    return nullptr;
}

void ElementaryStateSphere::insert(const AxisKey& k, SpinColor c) {
    if (count_ >= kCap) throw InvalidState("ElementaryStateSphere: memo capacity exceeded");
    memo_[static_cast<size_t>(count_++)] = Entry{k, c};
}

void ElementaryStateSphere::repaint_keep(const AxisKey& k, SpinColor c) {
    count_ = 0;
    insert(k, c);
}

bool ElementaryStateSphere::has_memo(const Dir3& axis) const {
    return find(canonical_axis(axis)) != nullptr;
}

std::optional<double> ElementaryStateSphere::memoized_value(const Dir3& axis) const {
    AxisKey k = canonical_axis(axis);
    const Entry* e = find(k);
    if (!e) return std::nullopt;
    SpinColor c = e->color_at_canonical;
    // color seen along the queried direction: antipode flips it
    bool black = (c == SpinColor::Black);
    if (k.flipped) black = !black;
    return black ? 0.5 : -0.5;
}

bool ElementaryStateSphere::pair_anticorrelated(const ElementaryStateSphere& a,
                                                const ElementaryStateSphere& b) {
    for (int i = 0; i < a.count_; ++i) {
        const Entry& ea = a.memo_[static_cast<size_t>(i)];
        const Entry* eb = b.find(ea.key);
        if (eb && eb->color_at_canonical == ea.color_at_canonical) return false;
    }
    return true;
}

SingletSpherePair::SingletSpherePair() {
    a_.partner_ = &b_;
    b_.partner_ = &a_;
    a_.entangled_ = b_.entangled_ = true;
}

double ess_measure(ElementaryStateSphere& sphere, const Dir3& axis, SeededRng& rng) {
    AxisKey key = canonical_axis(axis);
    if (const auto* e = sphere.find(key)) {
        bool black = (e->color_at_canonical == SpinColor::Black);
        if (key.flipped) black = !black;
        return black ? 0.5 : -0.5;
    }

    Dir3 unit = axis.normalized();
    double p_black = 0.5;
    if (sphere.prep_) {
        double c = dot(unit, *sphere.prep_);
        c = std::min(1.0, std::max(-1.0, c));
        p_black = 0.5 * (1.0 + c);  // cos^2 of the half-angle to the up-direction
    }
    bool black_along_axis = rng.next_unit() < p_black;

    SpinColor canonical_color =
        (black_along_axis != key.flipped) ? SpinColor::Black : SpinColor::White;
    sphere.repaint_keep(key, canonical_color);
    sphere.prep_ = black_along_axis ? unit : -unit;

    if (sphere.entangled_ && sphere.partner_) {
        ElementaryStateSphere& p = *sphere.partner_;
        SpinColor opposite =
            (canonical_color == SpinColor::Black) ? SpinColor::White : SpinColor::Black;
        p.insert(key, opposite);
        p.prep_ = black_along_axis ? -unit : unit;
        sphere.entangled_ = p.entangled_ = false;
    }
    return black_along_axis ? 0.5 : -0.5;
}

// ---- photons -----------------------------------------------------------------

int64_t quantize_basis(double basis) {
    double t = std::fmod(basis, kPi);
    if (t < 0.0) t += kPi;
    if (t >= kPi) t -= kPi;
    int64_t q = quant(t);
    int64_t period = quant(kPi);
    if (q >= period) q -= period;
    return q;
}

PhotonHvTable PhotonHvTable::prepared(double polarization_angle) {
    PhotonHvTable t;
    double a = std::fmod(polarization_angle, kPi);
    if (a < 0.0) a += kPi;
    t.prep_ = a;
    return t;
}

const PhotonHvTable::Entry* PhotonHvTable::find(int64_t q) const {
    for (int i = 0; i < count_; ++i)
        if (memo_[static_cast<size_t>(i)].qbasis == q) return &memo_[static_cast<size_t>(i)];
    return nullptr;
}

void PhotonHvTable::insert(int64_t q, HvOutcome o) {
    if (count_ >= kCap) throw InvalidState("PhotonHvTable: memo capacity exceeded");
    memo_[static_cast<size_t>(count_++)] = Entry{q, o};
}

bool PhotonHvTable::has_memo(double basis) const { return find(quantize_basis(basis)) != nullptr; }

std::optional<HvOutcome> PhotonHvTable::memoized_outcome(double basis) const {
    const Entry* e = find(quantize_basis(basis));
    if (!e) return std::nullopt;
    return e->outcome;
}

bool PhotonHvTable::pair_anticorrelated(const PhotonHvTable& a, const PhotonHvTable& b) {
    for (int i = 0; i < a.count_; ++i) {
        const Entry& ea = a.memo_[static_cast<size_t>(i)];
        const Entry* eb = b.find(ea.qbasis);
        if (eb && eb->outcome == ea.outcome) return false;
    }
    return true;
}

EprPhotonPair::EprPhotonPair() {
    a_.partner_ = &b_;
    b_.partner_ = &a_;
    a_.entangled_ = b_.entangled_ = true;
}

HvOutcome photon_hv(PhotonHvTable& table, double basis, SeededRng& rng) {
    int64_t q = quantize_basis(basis);
    if (const auto* e = table.find(q)) return e->outcome;

    double b = static_cast<double>(q) * 1e-9;
    double p_h = 0.5;
    if (table.prep_) {
        double d = std::cos(*table.prep_ - b);
        p_h = d * d;
    }
    HvOutcome out = (rng.next_unit() < p_h) ? HvOutcome::H : HvOutcome::V;

    table.count_ = 0;  // repaint: prior contexts are disturbed
    table.insert(q, out);
    table.prep_ = (out == HvOutcome::H) ? b : std::fmod(b + kPi / 2.0, kPi);

    if (table.entangled_ && table.partner_) {
        PhotonHvTable& p = *table.partner_;
        HvOutcome opp = (out == HvOutcome::H) ? HvOutcome::V : HvOutcome::H;
        p.insert(q, opp);
        p.prep_ = (opp == HvOutcome::H) ? b : std::fmod(b + kPi / 2.0, kPi);
        table.entangled_ = p.entangled_ = false;
    }
    return out;
}

std::pair<Side, Side> ess_bs_route(PhotonHvTable& p1, PhotonHvTable& p2, double bs_basis,
                                   SeededRng& rng) {
    HvOutcome o1 = photon_hv(p1, bs_basis, rng);
    HvOutcome o2 = photon_hv(p2, bs_basis, rng);
    if (o1 == o2) {
        Side s = rng.next_bool() ? Side::Up : Side::Down;
        return {s, s};
    }
    Side s1 = rng.next_bool() ? Side::Up : Side::Down;
    Side s2 = rng.next_bool() ? Side::Up : Side::Down;
    return {s1, s2};
}

EssMzResult ess_mach_zehnder(MzConfig config, DecisionTime decision_time, SeededRng& rng) {
    (void)decision_time;  // the rule must not read it
    Side kern = rng.next_bool() ? Side::Up : Side::Down;
    KernDarkField field{kern, {true, true}, true};
    if (config == MzConfig::Closed) {
        // Both dark-field parts recombine coherently and steer the kern.
        return EssMzResult{MzDetector::Db, field};
    }
    return EssMzResult{kern == Side::Up ? MzDetector::Da : MzDetector::Db, field};
}

}  // namespace epistate::ess
