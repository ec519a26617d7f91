// Dense complex linear algebra at the small fixed dimensions used by the
// simulator: state vectors, square matrices, tensor products, Born sampling,
// and a Hermitian eigensolver. Values are immutable in spirit: operations
// return fresh objects and never mutate their inputs (only SeededRng advances).

#pragma once

#include <string>
#include <vector>

#include "epistate/common.hpp"
#include "epistate/rng.hpp"

namespace epistate::linalg {

class StateVector {
  public:
    StateVector() = default;
    explicit StateVector(std::vector<cx> amplitudes, std::vector<std::string> labels = {});

    static StateVector basis_state(int dim, int index, std::vector<std::string> labels = {});

    int dim() const { return static_cast<int>(amp_.size()); }
    const std::vector<cx>& amplitudes() const { return amp_; }
    cx operator[](int i) const { return amp_[static_cast<size_t>(i)]; }
    std::string label(int i) const;
    const std::vector<std::string>& labels() const { return labels_; }

    double norm() const;
    // Rescales to unit norm; throws InvalidState on (near-)zero vectors.
    StateVector normalized() const;
    bool is_normalized(double tol = kNormTol) const;

  private:
    std::vector<cx> amp_;
    std::vector<std::string> labels_;  // empty => index labels
};

class Matrix {
  public:
    Matrix() = default;
    explicit Matrix(int dim);
    Matrix(int dim, std::vector<cx> entries);

    static Matrix identity(int dim);
    static Matrix zero(int dim);
    // Validating constructors for matrices that claim structure.
    static Matrix hermitian(int dim, std::vector<cx> entries, double tol = kNormTol);
    static Matrix unitary(int dim, std::vector<cx> entries, double tol = kNormTol);
    // Rank-anything projector |v><v| from a (not necessarily unit) vector.
    static Matrix outer(const StateVector& v);

    int dim() const { return dim_; }
    cx at(int r, int c) const { return e_[static_cast<size_t>(r) * dim_ + c]; }
    cx& at(int r, int c) { return e_[static_cast<size_t>(r) * dim_ + c]; }
    const std::vector<cx>& entries() const { return e_; }

    Matrix adjoint() const;
    cx trace() const;
    double frobenius_norm() const;
    bool is_hermitian(double tol = kNormTol) const;
    bool is_unitary(double tol = kNormTol) const;
    bool is_projector(double tol = kNormTol) const;

    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator*(const Matrix& o) const;
    Matrix operator*(cx s) const;

  private:
    int dim_ = 0;
    std::vector<cx> e_;  // row-major
};

Matrix commutator(const Matrix& a, const Matrix& b);
Matrix kron(const Matrix& a, const Matrix& b);

// Kronecker product of states; labels concatenate.
StateVector tensor(const StateVector& a, const StateVector& b);

// Plain matrix-vector product. Not renormalized: projectors legitimately
// shrink the norm.
StateVector apply(const Matrix& m, const StateVector& v);

// Scalar product, conjugate-linear in the first argument.
cx inner(const StateVector& a, const StateVector& b);

// A validated resolution of identity: pairwise orthogonal projectors summing
// to I. Pre-building one keeps repeated Born sampling cheap.
class MeasurementContext {
  public:
    explicit MeasurementContext(std::vector<Matrix> projectors, double tol = kNormTol);
    const std::vector<Matrix>& projectors() const { return ps_; }
    int dim() const { return ps_.empty() ? 0 : ps_.front().dim(); }

  private:
    std::vector<Matrix> ps_;
};

struct BornOutcome {
    int index = 0;
    StateVector post;  // renormalized post-measurement state
};

// Samples outcome k with probability <v|P_k|v> and returns the renormalized
// post-measurement state. Consumes exactly one rng draw. Selecting a branch
// whose weight is below numerical resolution is a contract violation (only
// reachable through a degenerate projector set).
BornOutcome born_sample(const StateVector& v, const MeasurementContext& ctx, SeededRng& rng);
BornOutcome born_sample(const StateVector& v, const std::vector<Matrix>& projectors, SeededRng& rng);

struct EigenSystem {
    std::vector<double> values;        // ascending
    std::vector<StateVector> vectors;  // orthonormal, vectors[k] pairs with values[k]
};

// Cyclic Jacobi diagonalization of a Hermitian matrix. Deterministic; accurate
// to ~1e-14 at the dimensions used here.
EigenSystem hermitian_eigensystem(const Matrix& h, double hermitian_tol = kNormTol);

}  // namespace epistate::linalg
