// Finite matrix *-algebras: span closure, maximal commutative subalgebras and
// their characters, spectral decomposition of Hermitian elements, projector
// states, and the GNS representation built from a positive normalized
// functional.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "epistate/linalg.hpp"

namespace epistate::algebra {

using linalg::Matrix;
using linalg::StateVector;

// The unital *-algebra generated by a set of matrices, stored as an
// orthonormal (Frobenius) basis of its linear span. Closure is computed by
// iterated products with span tracking until the span stabilizes; a finite
// matrix algebra closes in at most dim^2 steps.
class FiniteAlgebra {
  public:
    static std::shared_ptr<const FiniteAlgebra> generate(int dim, std::vector<Matrix> generators);
    static std::shared_ptr<const FiniteAlgebra> full_matrix_algebra(int dim);

    int matrix_dim() const { return dim_; }
    const std::vector<Matrix>& generators() const { return generators_; }
    const std::vector<Matrix>& basis() const { return basis_; }
    int span_dim() const { return static_cast<int>(basis_.size()); }

    // Coordinates of x in the orthonormal basis; throws if x lies outside the
    // span by more than tol.
    std::vector<cx> coordinates(const Matrix& x, double tol = kNormTol) const;
    bool contains(const Matrix& x, double tol = kNormTol) const;
    double span_residual(const Matrix& x) const;

    // Invariant check: span closed under product and adjoint, identity inside.
    void validate(double tol = kNormTol) const;

  private:
    FiniteAlgebra() = default;
    int dim_ = 0;
    std::vector<Matrix> generators_;
    std::vector<Matrix> basis_;
};

class CommutativeSubalgebra {
  public:
    // Closure of `generators` inside `parent`; throws ContractViolation if the
    // generators do not commute or fall outside the parent span.
    CommutativeSubalgebra(std::shared_ptr<const FiniteAlgebra> parent,
                          std::vector<Matrix> generators, std::string label);

    const FiniteAlgebra& parent() const { return *parent_; }
    std::shared_ptr<const FiniteAlgebra> parent_ptr() const { return parent_; }
    const std::string& label() const { return label_; }
    const std::vector<Matrix>& generators() const { return generators_; }
    const std::vector<Matrix>& basis() const { return basis_; }
    int span_dim() const { return static_cast<int>(basis_.size()); }

    std::vector<cx> coordinates(const Matrix& x, double tol = kNormTol) const;
    bool contains(const Matrix& x, double tol = kNormTol) const;

  private:
    std::shared_ptr<const FiniteAlgebra> parent_;
    std::string label_;
    std::vector<Matrix> generators_;
    std::vector<Matrix> basis_;
};

// True iff the span commutes and no element of the parent algebra outside it
// commutes with all of it (centralizer dimension check, which subsumes
// testing parent basis elements one by one). The raw-span overload accepts
// non-commuting input and reports false.
bool check_maximal_commutative(const FiniteAlgebra& parent, const std::vector<Matrix>& span,
                               double tol = kNormTol);
bool check_maximal_commutative(const CommutativeSubalgebra& q, double tol = kNormTol);

// A multiplicative functional on one commutative context, represented by its
// (real) values on the subalgebra's Hermitian generator list together with
// the minimal joint eigenprojector that realizes it. On general complex span
// elements the evaluation is the complex joint eigenvalue.
struct Character {
    std::vector<double> generator_values;
    Matrix projector;  // joint eigenprojector within the defining representation

    cx eval(const CommutativeSubalgebra& q, const Matrix& x, double tol = kNormTol) const;
};

// Joint-eigenvalue assignments obtained by simultaneous diagonalization of
// the subalgebra. One character per distinct joint eigenvalue tuple.
std::vector<Character> enumerate_characters(const CommutativeSubalgebra& q);

// Spectral expansion of a Hermitian element: ascending eigenvalues with
// orthogonal projectors summing to the identity. Eigenvalues closer than
// merge_tol collapse into a single projector.
struct SpectralPair {
    double value;
    Matrix projector;
};
std::vector<SpectralPair> spectral_decompose(const Matrix& h, double merge_tol = kEigenMergeTol);

// Linear functional on a finite algebra, stored through its values on the
// orthonormal basis. Positive normalized functionals are states.
class StateFunctional {
  public:
    StateFunctional(std::shared_ptr<const FiniteAlgebra> algebra, std::vector<cx> basis_values);

    const FiniteAlgebra& algebra() const { return *algebra_; }
    std::shared_ptr<const FiniteAlgebra> algebra_ptr() const { return algebra_; }
    const std::vector<cx>& basis_values() const { return basis_values_; }

    cx eval(const Matrix& x) const;

    // Invariant checks: psi(I)=1 and psi(U*U) >= -tol over a seeded random
    // corpus of span elements.
    bool is_normalized(double tol = 1e-12) const;
    double min_positivity(int corpus_size = 100, uint64_t seed = 17) const;

  private:
    std::shared_ptr<const FiniteAlgebra> algebra_;
    std::vector<cx> basis_values_;
};

// The state functional defined by a rank-1 projector p via p A p = psi(A) p,
// extracted as tr(pA)/tr(p). Rank != 1 makes the scalar ill-defined.
StateFunctional state_from_projector(const Matrix& p,
                                     std::shared_ptr<const FiniteAlgebra> algebra);

// GNS representation: the quotient of the algebra by the null space of the
// sesquilinear form psi(U*V), with algebra elements acting by left
// multiplication and the class of the identity as cyclic vector.
class GnsRepresentation {
  public:
    explicit GnsRepresentation(const StateFunctional& psi);

    int rep_dim() const { return rep_dim_; }
    const StateVector& cyclic_vector() const { return cyclic_; }
    const std::vector<Matrix>& basis_images() const { return basis_images_; }

    // Image of an arbitrary span element (linear in basis coordinates).
    Matrix represent(const Matrix& x) const;
    // <cyclic, rep(x) cyclic>; reproduces psi(x) for all span elements.
    cx vacuum_expectation(const Matrix& x) const;

    double max_homomorphism_defect() const;   // over all basis pairs
    double max_reproduction_defect() const;   // over all basis elements

  private:
    std::shared_ptr<const FiniteAlgebra> algebra_;
    std::vector<cx> psi_values_;
    int rep_dim_ = 0;
    StateVector cyclic_;
    std::vector<Matrix> basis_images_;
};

GnsRepresentation gns_construct(const StateFunctional& psi);

// Spin-1/2 building blocks shared by the algebra demos and both engines.
namespace spin {
Matrix sx();
Matrix sy();
Matrix sz();
Matrix axis(double nx, double ny, double nz);  // n.s for a unit 3-vector
Matrix s1z4();                                 // s_z (x) I on the two-spin space
Matrix s2z4();                                 // I (x) s_z
Matrix total_sz4();
Matrix total_s_squared4();                     // (s1+s2)^2
Matrix up_up_projector4();                     // (1+2 s1z)(1+2 s2z)/4
}  // namespace spin

}  // namespace epistate::algebra
