// Kolmogorov probability spaces per measurement context, the mean-value
// functional, the classical two-slit mixture, and the exact joint-measure
// feasibility check behind the CHSH witness.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "epistate/algebra.hpp"

namespace epistate::contextprob {

using algebra::StateFunctional;
using linalg::Matrix;
using linalg::StateVector;

// One commuting context: a finite outcome set with a probability measure.
// The sigma-algebra is the (implicit) power set, closed under union,
// intersection and complement by construction.
class ContextualProbabilitySpace {
  public:
    ContextualProbabilitySpace(std::string context_label, std::vector<std::string> outcomes,
                               std::vector<double> measure);

    const std::string& context_label() const { return label_; }
    const std::vector<std::string>& outcomes() const { return outcomes_; }
    const std::vector<double>& measure() const { return measure_; }
    double probability(size_t outcome_index) const { return measure_.at(outcome_index); }

    // The Born space of one spectral measurement on a state vector.
    static ContextualProbabilitySpace from_measurement(const StateVector& v, const Matrix& observable,
                                                       std::string context_label);

  private:
    std::string label_;
    std::vector<std::string> outcomes_;
    std::vector<double> measure_;
};

// Pairwise correlations between two sides' measurement contexts.
struct CorrelationTable {
    std::vector<std::pair<std::string, std::string>> settings;
    std::vector<double> values;  // expectation of the +-1 product per setting pair

    void validate() const;  // |value| <= 1 + 1e-12
};

// <psi|A|psi> evaluated through the spectral expansion (sum of eigenvalue
// times Born weight), or psi(A) for functional states.
double mean_value(const StateVector& psi, const Matrix& observable);
double mean_value(const StateFunctional& psi, const Matrix& observable);

// |psi(a+b) - psi(a) - psi(b)|; linearity holds for non-commuting pairs too.
double additivity_check(const StateVector& psi, const Matrix& a, const Matrix& b);
double additivity_check(const StateFunctional& psi, const Matrix& a, const Matrix& b);

// The no-interference mixture (1/2) k_a + (1/2) k_b for identical slits.
std::vector<double> classical_double_slit(double p_pass_a, double p_pass_b,
                                          const std::vector<double>& k_given_a,
                                          const std::vector<double>& k_given_b);

// The four correlations E(a,b), E(a,b'), E(a',b), E(a',b') of a 2x2x2
// scenario with +-1 outcomes, plus the per-setting marginals.
struct ChshTable {
    std::array<std::array<double, 2>, 2> correlation;  // [a index][b index]
    std::array<double, 2> marginal_a;
    std::array<double, 2> marginal_b;
};

struct FeasibilityResult {
    bool feasible = false;
    // Largest |sum of the four correlations with an odd number of minus signs|;
    // exceeds 2 exactly on tables outside the local polytope (for no-signaling
    // tables with valid per-setting distributions).
    double chsh_witness = 0.0;
    // Sign pattern (s00,s01,s10,s11) achieving the witness.
    std::array<int, 4> witness_signs{1, 1, 1, -1};
};

// True iff one joint distribution over the 16 deterministic assignments
// reproduces all four correlations and marginals. Solved exactly by a small
// phase-1 simplex over the 16 polytope vertices; no external optimizer.
FeasibilityResult joint_measure_feasible(const ChshTable& table);

// max |s00 E00 + s01 E01 + s10 E10 + s11 E11| over odd-minus sign patterns.
double chsh_witness(const std::array<double, 4>& e);

}  // namespace epistate::contextprob
