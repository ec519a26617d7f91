#include "epistate/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "epistate/rng.hpp"

namespace epistate::algebra {

namespace {

cx frob_inner(const Matrix& a, const Matrix& b) {
    // tr(a^dagger b)
    cx s = 0.0;
    for (int r = 0; r < a.dim(); ++r)
        for (int c = 0; c < a.dim(); ++c) s += std::conj(a.at(r, c)) * b.at(r, c);
    return s;
}

// Gram-Schmidt step: remove the span of `basis` from x; returns the residual.
Matrix project_out(const std::vector<Matrix>& basis, Matrix x) {
    for (const Matrix& b : basis) {
        cx c = frob_inner(b, x);
        x = x - b * c;
    }
    return x;
}

// Appends x to the orthonormal basis if it sticks out of the span.
bool absorb(std::vector<Matrix>& basis, const Matrix& x, double tol) {
    Matrix r = project_out(basis, x);
    // second pass for numerical orthogonality
    r = project_out(basis, r);
    double n = r.frobenius_norm();
    if (n <= tol * std::max(1.0, x.frobenius_norm())) return false;
    basis.push_back(r * cx(1.0 / n, 0.0));
    return true;
}

Matrix random_span_element(const std::vector<Matrix>& basis, SeededRng& rng) {
    Matrix x = Matrix::zero(basis.front().dim());
    for (const Matrix& b : basis) {
        cx c(rng.next_unit() * 2.0 - 1.0, rng.next_unit() * 2.0 - 1.0);
        x = x + b * c;
    }
    return x;
}

std::vector<Matrix> close_span(int dim, const std::vector<Matrix>& generators, double tol) {
    std::vector<Matrix> basis;
    absorb(basis, Matrix::identity(dim), tol);
    std::vector<Matrix> work;
    work.push_back(Matrix::identity(dim));
    for (const Matrix& g : generators) {
        if (g.dim() != dim) throw ContractViolation("algebra: generator dimension mismatch");
        if (absorb(basis, g, tol)) work.push_back(g);
        if (absorb(basis, g.adjoint(), tol)) work.push_back(g.adjoint());
    }
    // Multiply until the span stabilizes. Cap at dim^2 basis elements, the
    // dimension of the full matrix algebra.
    const size_t cap = static_cast<size_t>(dim) * dim;
    bool grew = true;
    while (grew && basis.size() < cap) {
        grew = false;
        std::vector<Matrix> snapshot = basis;
        for (const Matrix& a : snapshot) {
            for (const Matrix& b : snapshot) {
                if (absorb(basis, a * b, tol)) grew = true;
                if (basis.size() >= cap) break;
            }
            if (basis.size() >= cap) break;
        }
    }
    return basis;
}

std::vector<cx> span_coordinates(const std::vector<Matrix>& basis, const Matrix& x,
                                 double tol, const char* who) {
    std::vector<cx> coords(basis.size());
    Matrix r = x;
    for (size_t k = 0; k < basis.size(); ++k) {
        coords[k] = frob_inner(basis[k], x);
        r = r - basis[k] * coords[k];
    }
    if (r.frobenius_norm() > tol * std::max(1.0, x.frobenius_norm()))
        throw ContractViolation(std::string(who) + ": element lies outside the span");
    return coords;
}

double span_residual_norm(const std::vector<Matrix>& basis, const Matrix& x) {
    Matrix r = x;
    for (const Matrix& b : basis) r = r - b * frob_inner(b, x);
    return r.frobenius_norm();
}

}  // namespace

std::shared_ptr<const FiniteAlgebra> FiniteAlgebra::generate(int dim,
                                                             std::vector<Matrix> generators) {
    auto a = std::shared_ptr<FiniteAlgebra>(new FiniteAlgebra());
    a->dim_ = dim;
    a->generators_ = std::move(generators);
    a->basis_ = close_span(dim, a->generators_, kNormTol);
    return a;
}

std::shared_ptr<const FiniteAlgebra> FiniteAlgebra::full_matrix_algebra(int dim) {
    std::vector<Matrix> gens;
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) {
            Matrix e(dim);
            e.at(r, c) = 1.0;
            gens.push_back(e);
        }
    return generate(dim, std::move(gens));
}

std::vector<cx> FiniteAlgebra::coordinates(const Matrix& x, double tol) const {
    return span_coordinates(basis_, x, tol, "FiniteAlgebra");
}

bool FiniteAlgebra::contains(const Matrix& x, double tol) const {
    return span_residual_norm(basis_, x) <= tol * std::max(1.0, x.frobenius_norm());
}

double FiniteAlgebra::span_residual(const Matrix& x) const {
    return span_residual_norm(basis_, x);
}

void FiniteAlgebra::validate(double tol) const {
    if (!contains(Matrix::identity(dim_), tol))
        throw InvalidState("FiniteAlgebra: identity not in span");
    for (const Matrix& a : basis_) {
        if (!contains(a.adjoint(), tol))
            throw InvalidState("FiniteAlgebra: span not closed under adjoint");
        for (const Matrix& b : basis_) {
            if (!contains(a * b, tol))
                throw InvalidState("FiniteAlgebra: span not closed under product");
        }
    }
}

CommutativeSubalgebra::CommutativeSubalgebra(std::shared_ptr<const FiniteAlgebra> parent,
                                             std::vector<Matrix> generators, std::string label)
    : parent_(std::move(parent)), label_(std::move(label)), generators_(std::move(generators)) {
    for (size_t i = 0; i < generators_.size(); ++i) {
        if (!parent_->contains(generators_[i]))
            throw ContractViolation("CommutativeSubalgebra: generator outside parent algebra");
        for (size_t j = i + 1; j < generators_.size(); ++j) {
            if (commutator(generators_[i], generators_[j]).frobenius_norm() > kNormTol)
                throw ContractViolation("CommutativeSubalgebra: generators do not commute");
        }
    }
    basis_ = close_span(parent_->matrix_dim(), generators_, kNormTol);
    for (size_t i = 0; i < basis_.size(); ++i)
        for (size_t j = i + 1; j < basis_.size(); ++j) {
            if (commutator(basis_[i], basis_[j]).frobenius_norm() > kNormTol)
                throw ContractViolation("CommutativeSubalgebra: closure is not commutative");
        }
}

std::vector<cx> CommutativeSubalgebra::coordinates(const Matrix& x, double tol) const {
    return span_coordinates(basis_, x, tol, "CommutativeSubalgebra");
}

bool CommutativeSubalgebra::contains(const Matrix& x, double tol) const {
    return span_residual_norm(basis_, x) <= tol * std::max(1.0, x.frobenius_norm());
}

bool check_maximal_commutative(const FiniteAlgebra& parent_algebra,
                               const std::vector<Matrix>& span, double tol) {
    if (span.empty()) return false;
    std::vector<Matrix> sub;
    for (const Matrix& m : span) {
        if (!parent_algebra.contains(m, tol)) return false;
        absorb(sub, m, tol);
    }
    for (size_t i = 0; i < sub.size(); ++i)
        for (size_t j = i + 1; j < sub.size(); ++j)
            if (commutator(sub[i], sub[j]).frobenius_norm() > tol) return false;

    // Centralizer of the span inside the parent: elements X = sum x_k P_k
    // with [X, B_i] = 0 for all i. Its dimension equals the span dimension
    // exactly when the span is maximal commutative.
    const auto& parent = parent_algebra.basis();
    const int n = static_cast<int>(parent.size());
    const int d = parent_algebra.matrix_dim();
    const int rows_per = d * d;
    const int m = static_cast<int>(sub.size()) * rows_per;

    // Normal matrix N = A^dagger A of the linear map x -> ([X,B_i] entries).
    // Nullspace dimension = n - rank(N).
    std::vector<std::vector<cx>> cols(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        cols[static_cast<size_t>(k)].reserve(static_cast<size_t>(m));
        for (const Matrix& b : sub) {
            Matrix c = commutator(parent[static_cast<size_t>(k)], b);
            for (int r = 0; r < d; ++r)
                for (int cc = 0; cc < d; ++cc) cols[static_cast<size_t>(k)].push_back(c.at(r, cc));
        }
    }
    Matrix normal(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cx s = 0.0;
            for (int r = 0; r < m; ++r)
                s += std::conj(cols[static_cast<size_t>(i)][static_cast<size_t>(r)]) *
                     cols[static_cast<size_t>(j)][static_cast<size_t>(r)];
            normal.at(i, j) = s;
        }
    auto es = linalg::hermitian_eigensystem(normal, 1e-8);
    int nullity = 0;
    for (double v : es.values)
        if (v < 1e-12 * std::max(1.0, es.values.back())) ++nullity;
    return nullity == static_cast<int>(sub.size());
}

bool check_maximal_commutative(const CommutativeSubalgebra& q, double tol) {
    return check_maximal_commutative(q.parent(), q.basis(), tol);
}

cx Character::eval(const CommutativeSubalgebra& q, const Matrix& x, double tol) const {
    if (!q.contains(x, tol))
        throw ContractViolation("Character: element outside the subalgebra");
    return (projector * x).trace() / projector.trace();
}

std::vector<Character> enumerate_characters(const CommutativeSubalgebra& q) {
    const auto& basis = q.basis();
    const int d = q.parent().matrix_dim();

    // Simultaneous diagonalization via a generic Hermitian combination of the
    // basis. Verified afterwards; redrawn in the (measure-zero) event of an
    // eigenvalue collision between distinct joint tuples.
    SeededRng rng(0xC0FFEEULL);
    for (int attempt = 0; attempt < 16; ++attempt) {
        Matrix h = Matrix::zero(d);
        for (const Matrix& b : basis) {
            Matrix herm = (b + b.adjoint()) * cx(0.5, 0.0);
            Matrix skew = (b - b.adjoint()) * cx(0.0, -0.5);
            h = h + herm * cx(rng.next_unit() * 2.0 - 1.0, 0.0) +
                skew * cx(rng.next_unit() * 2.0 - 1.0, 0.0);
        }
        std::vector<SpectralPair> blocks = spectral_decompose(h);

        bool clean = true;
        std::vector<Character> out;
        for (const SpectralPair& blk : blocks) {
            Character chi;
            chi.projector = blk.projector;
            double tr = std::real(blk.projector.trace());
            for (const Matrix& g : q.generators()) {
                cx lambda = (blk.projector * g).trace() / tr;
                // the block must be a joint eigenspace: g P = lambda P
                Matrix defect = g * blk.projector - blk.projector * lambda;
                if (defect.frobenius_norm() > 1e-7 * std::max(1.0, g.frobenius_norm())) {
                    clean = false;
                    break;
                }
                chi.generator_values.push_back(std::real(lambda));
            }
            if (!clean) break;
            out.push_back(std::move(chi));
        }
        if (clean) return out;
    }
    throw InvalidState("enumerate_characters: simultaneous diagonalization failed");
}

std::vector<SpectralPair> spectral_decompose(const Matrix& h, double merge_tol) {
    auto es = linalg::hermitian_eigensystem(h);
    std::vector<SpectralPair> out;
    size_t k = 0;
    const size_t n = es.values.size();
    while (k < n) {
        size_t j = k;
        while (j + 1 < n && es.values[j + 1] - es.values[j] <= merge_tol) ++j;
        double mean = 0.0;
        Matrix p = Matrix::zero(h.dim());
        for (size_t i = k; i <= j; ++i) {
            mean += es.values[i];
            p = p + Matrix::outer(es.vectors[i]);
        }
        mean /= static_cast<double>(j - k + 1);
        out.push_back(SpectralPair{mean, std::move(p)});
        k = j + 1;
    }
    return out;
}

StateFunctional::StateFunctional(std::shared_ptr<const FiniteAlgebra> algebra,
                                 std::vector<cx> basis_values)
    : algebra_(std::move(algebra)), basis_values_(std::move(basis_values)) {
    if (basis_values_.size() != static_cast<size_t>(algebra_->span_dim()))
        throw ContractViolation("StateFunctional: value count != basis size");
}

cx StateFunctional::eval(const Matrix& x) const {
    std::vector<cx> coords = algebra_->coordinates(x);
    cx s = 0.0;
    for (size_t k = 0; k < coords.size(); ++k) s += coords[k] * basis_values_[k];
    return s;
}

bool StateFunctional::is_normalized(double tol) const {
    return std::abs(eval(Matrix::identity(algebra_->matrix_dim())) - cx(1.0, 0.0)) <= tol;
}

double StateFunctional::min_positivity(int corpus_size, uint64_t seed) const {
    SeededRng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < corpus_size; ++i) {
        Matrix u = random_span_element(algebra_->basis(), rng);
        double v = std::real(eval(u.adjoint() * u));
        worst = std::min(worst, v);
    }
    return worst;
}

StateFunctional state_from_projector(const Matrix& p,
                                     std::shared_ptr<const FiniteAlgebra> algebra) {
    if (!p.is_projector(kNormTol))
        throw ContractViolation("state_from_projector: p is not a projector");
    if (std::abs(p.trace() - cx(1.0, 0.0)) > 1e-8)
        throw ContractViolation("state_from_projector: projector rank != 1");
    std::vector<cx> values;
    values.reserve(static_cast<size_t>(algebra->span_dim()));
    for (const Matrix& b : algebra->basis()) values.push_back((p * b).trace());
    return StateFunctional(std::move(algebra), std::move(values));
}

GnsRepresentation::GnsRepresentation(const StateFunctional& psi)
    : algebra_(psi.algebra_ptr()), psi_values_(psi.basis_values()) {
    const auto& basis = algebra_->basis();
    const int n = static_cast<int>(basis.size());

    // Gram matrix of the form psi(U*V) on the basis classes.
    Matrix gram(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            gram.at(i, j) = psi.eval(basis[static_cast<size_t>(i)].adjoint() *
                                     basis[static_cast<size_t>(j)]);
    // enforce exact Hermiticity against roundoff before diagonalizing
    gram = (gram + gram.adjoint()) * cx(0.5, 0.0);

    auto es = linalg::hermitian_eigensystem(gram);
    double top = std::max(1.0, es.values.empty() ? 0.0 : std::abs(es.values.back()));
    for (double v : es.values)
        if (v < -1e-8 * top)
            throw InvalidState("gns_construct: functional is not positive");

    // Orthonormal basis of the quotient: kept eigenvectors scaled by
    // 1/sqrt(lambda). Coordinates live in the basis-class space.
    std::vector<std::vector<cx>> onb;
    for (int k = 0; k < n; ++k) {
        double lam = es.values[static_cast<size_t>(k)];
        if (lam <= kGnsNullspaceTol * top) continue;
        std::vector<cx> e(static_cast<size_t>(n));
        double inv = 1.0 / std::sqrt(lam);
        for (int r = 0; r < n; ++r) e[static_cast<size_t>(r)] = es.vectors[static_cast<size_t>(k)][r] * inv;
        onb.push_back(std::move(e));
    }
    rep_dim_ = static_cast<int>(onb.size());

    auto g_inner = [&](const std::vector<cx>& x, const std::vector<cx>& y) {
        // <x, y>_G = x^dagger G y
        cx s = 0.0;
        for (int r = 0; r < n; ++r) {
            cx gy = 0.0;
            for (int c = 0; c < n; ++c) gy += gram.at(r, c) * y[static_cast<size_t>(c)];
            s += std::conj(x[static_cast<size_t>(r)]) * gy;
        }
        return s;
    };

    // Left-multiplication matrices in the quotient ONB.
    basis_images_.reserve(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
        // column k of L_v: coordinates of basis[v] * basis[k]
        std::vector<std::vector<cx>> lcols(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k)
            lcols[static_cast<size_t>(k)] =
                algebra_->coordinates(basis[static_cast<size_t>(v)] * basis[static_cast<size_t>(k)]);
        Matrix img(std::max(rep_dim_, 1));
        for (int j = 0; j < rep_dim_; ++j) {
            // L_v e_j in class coordinates
            std::vector<cx> lv(static_cast<size_t>(n), cx(0.0, 0.0));
            for (int k = 0; k < n; ++k) {
                cx w = onb[static_cast<size_t>(j)][static_cast<size_t>(k)];
                if (w == cx(0.0, 0.0)) continue;
                const auto& col = lcols[static_cast<size_t>(k)];
                for (int r = 0; r < n; ++r) lv[static_cast<size_t>(r)] += w * col[static_cast<size_t>(r)];
            }
            for (int i = 0; i < rep_dim_; ++i) img.at(i, j) = g_inner(onb[static_cast<size_t>(i)], lv);
        }
        basis_images_.push_back(std::move(img));
    }

    // Cyclic vector: the class of the identity, expressed in the ONB.
    std::vector<cx> id_coords = algebra_->coordinates(Matrix::identity(algebra_->matrix_dim()));
    std::vector<cx> xi(static_cast<size_t>(std::max(rep_dim_, 1)), cx(0.0, 0.0));
    for (int i = 0; i < rep_dim_; ++i) xi[static_cast<size_t>(i)] = g_inner(onb[static_cast<size_t>(i)], id_coords);
    cyclic_ = StateVector(std::move(xi));
}

Matrix GnsRepresentation::represent(const Matrix& x) const {
    std::vector<cx> coords = algebra_->coordinates(x);
    Matrix out = Matrix::zero(std::max(rep_dim_, 1));
    for (size_t k = 0; k < coords.size(); ++k) out = out + basis_images_[k] * coords[k];
    return out;
}

cx GnsRepresentation::vacuum_expectation(const Matrix& x) const {
    return linalg::inner(cyclic_, linalg::apply(represent(x), cyclic_));
}

double GnsRepresentation::max_homomorphism_defect() const {
    const auto& basis = algebra_->basis();
    double worst = 0.0;
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = 0; j < basis.size(); ++j) {
            Matrix lhs = represent(basis[i] * basis[j]);
            Matrix rhs = basis_images_[i] * basis_images_[j];
            worst = std::max(worst, (lhs - rhs).frobenius_norm());
        }
    return worst;
}

double GnsRepresentation::max_reproduction_defect() const {
    const auto& basis = algebra_->basis();
    double worst = 0.0;
    for (size_t i = 0; i < basis.size(); ++i) {
        cx got = linalg::inner(cyclic_, linalg::apply(basis_images_[i], cyclic_));
        worst = std::max(worst, std::abs(got - psi_values_[i]));
    }
    return worst;
}

GnsRepresentation gns_construct(const StateFunctional& psi) { return GnsRepresentation(psi); }

namespace spin {

Matrix sx() { return Matrix(2, {0.0, 0.5, 0.5, 0.0}); }
Matrix sy() { return Matrix(2, {0.0, cx(0.0, -0.5), cx(0.0, 0.5), 0.0}); }
Matrix sz() { return Matrix(2, {0.5, 0.0, 0.0, -0.5}); }

Matrix axis(double nx, double ny, double nz) {
    return sx() * cx(nx, 0.0) + sy() * cx(ny, 0.0) + sz() * cx(nz, 0.0);
}

Matrix s1z4() { return kron(sz(), Matrix::identity(2)); }
Matrix s2z4() { return kron(Matrix::identity(2), sz()); }
Matrix total_sz4() { return s1z4() + s2z4(); }

Matrix total_s_squared4() {
    Matrix s = Matrix::zero(4);
    const Matrix comps1[3] = {sx(), sy(), sz()};
    Matrix i2 = Matrix::identity(2);
    for (const Matrix& c : comps1) {
        Matrix t = kron(c, i2) + kron(i2, c);
        s = s + t * t;
    }
    return s;
}

Matrix up_up_projector4() {
    Matrix i4 = Matrix::identity(4);
    Matrix a = i4 + s1z4() * cx(2.0, 0.0);
    Matrix b = i4 + s2z4() * cx(2.0, 0.0);
    return (a * b) * cx(0.25, 0.0);
}

}  // namespace spin

}  // namespace epistate::algebra
