#include "epistate/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace epistate::linalg {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw ContractViolation(msg);
}

}  // namespace

StateVector::StateVector(std::vector<cx> amplitudes, std::vector<std::string> labels)
    : amp_(std::move(amplitudes)), labels_(std::move(labels)) {
    require(!amp_.empty(), "StateVector: empty amplitude vector");
    require(labels_.empty() || labels_.size() == amp_.size(),
            "StateVector: label count must match dimension");
    for (cx a : amp_) {
        if (!is_finite(a)) throw InvalidState("StateVector: non-finite amplitude");
    }
}

StateVector StateVector::basis_state(int dim, int index, std::vector<std::string> labels) {
    require(dim > 0 && index >= 0 && index < dim, "basis_state: index out of range");
    std::vector<cx> a(static_cast<size_t>(dim), cx(0.0, 0.0));
    a[static_cast<size_t>(index)] = cx(1.0, 0.0);
    return StateVector(std::move(a), std::move(labels));
}

std::string StateVector::label(int i) const {
    if (!labels_.empty()) return labels_[static_cast<size_t>(i)];
    return std::to_string(i);
}

double StateVector::norm() const {
    double s = 0.0;
    for (cx a : amp_) s += std::norm(a);
    return std::sqrt(s);
}

StateVector StateVector::normalized() const {
    double n = norm();
    if (n < 1e-12) throw InvalidState("normalized: vector has (near-)zero norm");
    std::vector<cx> a(amp_);
    for (cx& z : a) z /= n;
    return StateVector(std::move(a), labels_);
}

bool StateVector::is_normalized(double tol) const {
    return std::abs(norm() - 1.0) <= tol;
}

Matrix::Matrix(int dim) : dim_(dim), e_(static_cast<size_t>(dim) * dim, cx(0.0, 0.0)) {
    require(dim > 0, "Matrix: dimension must be positive");
}

Matrix::Matrix(int dim, std::vector<cx> entries) : dim_(dim), e_(std::move(entries)) {
    require(dim > 0, "Matrix: dimension must be positive");
    require(e_.size() == static_cast<size_t>(dim) * dim, "Matrix: entry count != dim^2");
    for (cx z : e_) {
        if (!is_finite(z)) throw InvalidState("Matrix: non-finite entry");
    }
}

Matrix Matrix::identity(int dim) {
    Matrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

Matrix Matrix::zero(int dim) { return Matrix(dim); }

Matrix Matrix::hermitian(int dim, std::vector<cx> entries, double tol) {
    Matrix m(dim, std::move(entries));
    if (!m.is_hermitian(tol)) throw ContractViolation("Matrix::hermitian: M != M^dagger");
    return m;
}

Matrix Matrix::unitary(int dim, std::vector<cx> entries, double tol) {
    Matrix m(dim, std::move(entries));
    if (!m.is_unitary(tol)) throw ContractViolation("Matrix::unitary: M^dagger M != I");
    return m;
}

Matrix Matrix::outer(const StateVector& v) {
    Matrix m(v.dim());
    for (int r = 0; r < v.dim(); ++r)
        for (int c = 0; c < v.dim(); ++c) m.at(r, c) = v[r] * std::conj(v[c]);
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix m(dim_);
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) m.at(r, c) = std::conj(at(c, r));
    return m;
}

cx Matrix::trace() const {
    cx t = 0.0;
    for (int i = 0; i < dim_; ++i) t += at(i, i);
    return t;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (cx z : e_) s += std::norm(z);
    return std::sqrt(s);
}

bool Matrix::is_hermitian(double tol) const {
    for (int r = 0; r < dim_; ++r)
        for (int c = r; c < dim_; ++c)
            if (std::abs(at(r, c) - std::conj(at(c, r))) > tol) return false;
    return true;
}

bool Matrix::is_unitary(double tol) const {
    Matrix p = adjoint() * (*this);
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) {
            cx want = (r == c) ? cx(1.0, 0.0) : cx(0.0, 0.0);
            if (std::abs(p.at(r, c) - want) > tol) return false;
        }
    return true;
}

bool Matrix::is_projector(double tol) const {
    if (!is_hermitian(tol)) return false;
    Matrix sq = (*this) * (*this);
    for (size_t i = 0; i < e_.size(); ++i)
        if (std::abs(sq.entries()[i] - e_[i]) > tol) return false;
    return true;
}

Matrix Matrix::operator+(const Matrix& o) const {
    require(dim_ == o.dim_, "Matrix+: dimension mismatch");
    Matrix m(dim_);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i] + o.e_[i];
    return m;
}

Matrix Matrix::operator-(const Matrix& o) const {
    require(dim_ == o.dim_, "Matrix-: dimension mismatch");
    Matrix m(dim_);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i] - o.e_[i];
    return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
    require(dim_ == o.dim_, "Matrix*: dimension mismatch");
    Matrix m(dim_);
    for (int r = 0; r < dim_; ++r)
        for (int k = 0; k < dim_; ++k) {
            cx a = at(r, k);
            if (a == cx(0.0, 0.0)) continue;
            for (int c = 0; c < dim_; ++c) m.at(r, c) += a * o.at(k, c);
        }
    return m;
}

Matrix Matrix::operator*(cx s) const {
    Matrix m(dim_);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i] * s;
    return m;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix kron(const Matrix& a, const Matrix& b) {
    int da = a.dim(), db = b.dim();
    Matrix m(da * db);
    for (int ra = 0; ra < da; ++ra)
        for (int ca = 0; ca < da; ++ca) {
            cx f = a.at(ra, ca);
            if (f == cx(0.0, 0.0)) continue;
            for (int rb = 0; rb < db; ++rb)
                for (int cb = 0; cb < db; ++cb)
                    m.at(ra * db + rb, ca * db + cb) = f * b.at(rb, cb);
        }
    return m;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    std::vector<cx> amp(static_cast<size_t>(a.dim()) * b.dim());
    std::vector<std::string> labels(amp.size());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j) {
            amp[static_cast<size_t>(i) * b.dim() + j] = a[i] * b[j];
            labels[static_cast<size_t>(i) * b.dim() + j] = a.label(i) + b.label(j);
        }
    return StateVector(std::move(amp), std::move(labels));
}

StateVector apply(const Matrix& m, const StateVector& v) {
    require(m.dim() == v.dim(), "apply: dimension mismatch");
    std::vector<cx> out(static_cast<size_t>(v.dim()), cx(0.0, 0.0));
    for (int r = 0; r < m.dim(); ++r) {
        cx s = 0.0;
        for (int c = 0; c < m.dim(); ++c) s += m.at(r, c) * v[c];
        out[static_cast<size_t>(r)] = s;
    }
    return StateVector(std::move(out), v.labels());
}

cx inner(const StateVector& a, const StateVector& b) {
    require(a.dim() == b.dim(), "inner: dimension mismatch");
    cx s = 0.0;
    for (int i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

MeasurementContext::MeasurementContext(std::vector<Matrix> projectors, double tol)
    : ps_(std::move(projectors)) {
    require(!ps_.empty(), "MeasurementContext: no projectors");
    int d = ps_.front().dim();
    Matrix sum = Matrix::zero(d);
    for (const Matrix& p : ps_) {
        require(p.dim() == d, "MeasurementContext: mixed dimensions");
        if (!p.is_projector(tol))
            throw ContractViolation("MeasurementContext: element is not a projector");
        sum = sum + p;
    }
    for (size_t i = 0; i < ps_.size(); ++i)
        for (size_t j = i + 1; j < ps_.size(); ++j) {
            if ((ps_[i] * ps_[j]).frobenius_norm() > tol)
                throw ContractViolation("MeasurementContext: projectors not orthogonal");
        }
    if ((sum - Matrix::identity(d)).frobenius_norm() > tol)
        throw ContractViolation("MeasurementContext: projectors do not resolve identity");
}

BornOutcome born_sample(const StateVector& v, const MeasurementContext& ctx, SeededRng& rng) {
    require(ctx.dim() == v.dim(), "born_sample: dimension mismatch");
    const auto& ps = ctx.projectors();
    std::vector<double> w(ps.size());
    for (size_t k = 0; k < ps.size(); ++k) {
        StateVector pv = apply(ps[k], v);
        w[k] = std::real(inner(pv, pv));
        if (w[k] < 0.0) w[k] = 0.0;
    }
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    double u = rng.next_unit() * total;  // one draw
    size_t pick = ps.size() - 1;
    double acc = 0.0;
    for (size_t k = 0; k < ps.size(); ++k) {
        acc += w[k];
        if (u < acc) {
            pick = k;
            break;
        }
    }
    StateVector post = apply(ps[pick], v);
    double n = post.norm();
    if (n < 1e-12)
        throw ContractViolation("born_sample: selected a zero-probability branch");
    return BornOutcome{static_cast<int>(pick), post.normalized()};
}

BornOutcome born_sample(const StateVector& v, const std::vector<Matrix>& projectors,
                        SeededRng& rng) {
    MeasurementContext ctx(projectors);
    return born_sample(v, ctx, rng);
}

EigenSystem hermitian_eigensystem(const Matrix& h, double hermitian_tol) {
    if (!h.is_hermitian(hermitian_tol))
        throw ContractViolation("hermitian_eigensystem: matrix is not Hermitian");
    const int n = h.dim();
    Matrix a = h;
    Matrix v = Matrix::identity(n);

    double scale = std::max(1.0, h.frobenius_norm());
    const double stop = 1e-15 * scale;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(a.at(p, q));
        if (std::sqrt(2.0 * off) < stop) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double r = std::abs(a.at(p, q));
                if (r < 1e-300) continue;
                cx phase = a.at(p, q) / r;
                double app = std::real(a.at(p, p));
                double aqq = std::real(a.at(q, q));
                double tau = (aqq - app) / (2.0 * r);
                double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                // columns p,q of both a (two-sided) and v (right side only)
                for (int k = 0; k < n; ++k) {
                    cx akp = a.at(k, p), akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * std::conj(phase) * akq;
                    a.at(k, q) = s * phase * akp + c * akq;
                    cx vkp = v.at(k, p), vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - s * std::conj(phase) * vkq;
                    v.at(k, q) = s * phase * vkp + c * vkq;
                }
                for (int k = 0; k < n; ++k) {
                    cx apk = a.at(p, k), aqk = a.at(q, k);
                    a.at(p, k) = c * apk - s * phase * aqk;
                    a.at(q, k) = s * std::conj(phase) * apk + c * aqk;
                }
            }
        }
    }

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) diag[static_cast<size_t>(i)] = std::real(a.at(i, i));
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return diag[static_cast<size_t>(x)] < diag[static_cast<size_t>(y)]; });

    EigenSystem es;
    es.values.reserve(static_cast<size_t>(n));
    es.vectors.reserve(static_cast<size_t>(n));
    for (int k : order) {
        es.values.push_back(diag[static_cast<size_t>(k)]);
        std::vector<cx> col(static_cast<size_t>(n));
        for (int r = 0; r < n; ++r) col[static_cast<size_t>(r)] = v.at(r, k);
        es.vectors.push_back(StateVector(std::move(col)));
    }
    return es;
}

}  // namespace epistate::linalg
