// Shared aliases and error types.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace epistate {

using cx = std::complex<double>;

// Analytic checks (norms, projector algebra) use tight tolerances; sampled
// quantities are judged by binomial bounds instead.
inline constexpr double kNormTol = 1e-10;
inline constexpr double kEigenMergeTol = 1e-8;
inline constexpr double kGnsNullspaceTol = 1e-10;

// A caller broke an operation's precondition (dimension mismatch, projector
// set that is not a resolution of identity, non-Hermitian observable, ...).
struct ContractViolation : std::logic_error {
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// Input data that is structurally well-formed but semantically invalid
// (non-positive functional, unnormalized amplitudes, ...).
struct InvalidState : std::runtime_error {
    explicit InvalidState(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_finite(cx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace epistate
