// Shared helpers for the test suites: sampled-statistics bounds and random
// corpora with fixed seeds.

#pragma once

#include <cmath>
#include <vector>

#include "epistate/linalg.hpp"
#include "epistate/rng.hpp"

namespace testutil {

using epistate::SeededRng;
using epistate::cx;
using epistate::linalg::Matrix;
using epistate::linalg::StateVector;

// Allowed |k - n p| for a sampled binomial count at five standard deviations.
inline double binomial_5sigma(double n, double p) {
    return 5.0 * std::sqrt(std::max(n * p * (1.0 - p), 1.0));
}

inline bool within_5sigma(int64_t k, int64_t n, double p) {
    return std::abs(static_cast<double>(k) - static_cast<double>(n) * p) <=
           binomial_5sigma(static_cast<double>(n), p);
}

inline StateVector random_unit_vector(int dim, SeededRng& rng) {
    std::vector<cx> a(static_cast<size_t>(dim));
    for (cx& z : a) z = cx(rng.next_unit() * 2.0 - 1.0, rng.next_unit() * 2.0 - 1.0);
    return StateVector(std::move(a)).normalized();
}

inline Matrix random_matrix(int dim, SeededRng& rng) {
    Matrix m(dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            m.at(r, c) = cx(rng.next_unit() * 2.0 - 1.0, rng.next_unit() * 2.0 - 1.0);
    return m;
}

inline Matrix random_hermitian(int dim, SeededRng& rng) {
    Matrix m = random_matrix(dim, rng);
    return (m + m.adjoint()) * cx(0.5, 0.0);
}

// Haar-ish unitary from Gram-Schmidt on random columns.
inline Matrix random_unitary(int dim, SeededRng& rng) {
    Matrix m = random_matrix(dim, rng);
    for (int c = 0; c < dim; ++c) {
        for (int prev = 0; prev < c; ++prev) {
            cx proj = 0.0;
            for (int r = 0; r < dim; ++r) proj += std::conj(m.at(r, prev)) * m.at(r, c);
            for (int r = 0; r < dim; ++r) m.at(r, c) -= proj * m.at(r, prev);
        }
        double n = 0.0;
        for (int r = 0; r < dim; ++r) n += std::norm(m.at(r, c));
        n = std::sqrt(n);
        for (int r = 0; r < dim; ++r) m.at(r, c) = m.at(r, c) / n;
    }
    return m;
}

// Random normalized amplitude pair (alpha, beta).
inline std::pair<cx, cx> random_qubit_amplitudes(SeededRng& rng) {
    cx a(rng.next_unit() * 2.0 - 1.0, rng.next_unit() * 2.0 - 1.0);
    cx b(rng.next_unit() * 2.0 - 1.0, rng.next_unit() * 2.0 - 1.0);
    double n = std::sqrt(std::norm(a) + std::norm(b));
    return {a / n, b / n};
}

}  // namespace testutil
