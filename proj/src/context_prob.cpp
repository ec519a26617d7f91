#include "epistate/context_prob.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace epistate::contextprob {

ContextualProbabilitySpace::ContextualProbabilitySpace(std::string context_label,
                                                       std::vector<std::string> outcomes,
                                                       std::vector<double> measure)
    : label_(std::move(context_label)), outcomes_(std::move(outcomes)), measure_(std::move(measure)) {
    if (outcomes_.empty() || outcomes_.size() != measure_.size())
        throw ContractViolation("ContextualProbabilitySpace: outcomes/measure size mismatch");
    double sum = 0.0;
    for (double p : measure_) {
        if (!(p >= -1e-12 && p <= 1.0 + 1e-12))
            throw InvalidState("ContextualProbabilitySpace: probability outside [0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw InvalidState("ContextualProbabilitySpace: measure does not sum to 1");
}

ContextualProbabilitySpace ContextualProbabilitySpace::from_measurement(
    const StateVector& v, const Matrix& observable, std::string context_label) {
    auto pairs = algebra::spectral_decompose(observable);
    std::vector<std::string> outcomes;
    std::vector<double> measure;
    for (const auto& [value, projector] : pairs) {
        StateVector pv = linalg::apply(projector, v);
        outcomes.push_back("value=" + std::to_string(value));
        measure.push_back(std::real(linalg::inner(pv, pv)));
    }
    // absorb float dust so the constructor's 1e-12 sum check is meaningful
    double sum = std::accumulate(measure.begin(), measure.end(), 0.0);
    if (sum > 0.0)
        for (double& p : measure) p /= sum;
    return ContextualProbabilitySpace(std::move(context_label), std::move(outcomes),
                                      std::move(measure));
}

void CorrelationTable::validate() const {
    if (settings.size() != values.size())
        throw ContractViolation("CorrelationTable: settings/values size mismatch");
    for (double v : values)
        if (std::abs(v) > 1.0 + 1e-12)
            throw InvalidState("CorrelationTable: |expectation| > 1");
}

double mean_value(const StateVector& psi, const Matrix& observable) {
    if (!observable.is_hermitian())
        throw ContractViolation("mean_value: observable is not Hermitian");
    auto pairs = algebra::spectral_decompose(observable);
    double m = 0.0;
    for (const auto& [value, projector] : pairs) {
        StateVector pv = linalg::apply(projector, psi);
        m += value * std::real(linalg::inner(pv, pv));
    }
    return m;
}

double mean_value(const StateFunctional& psi, const Matrix& observable) {
    if (!observable.is_hermitian())
        throw ContractViolation("mean_value: observable is not Hermitian");
    return std::real(psi.eval(observable));
}

double additivity_check(const StateVector& psi, const Matrix& a, const Matrix& b) {
    return std::abs(mean_value(psi, a + b) - mean_value(psi, a) - mean_value(psi, b));
}

double additivity_check(const StateFunctional& psi, const Matrix& a, const Matrix& b) {
    return std::abs(mean_value(psi, a + b) - mean_value(psi, a) - mean_value(psi, b));
}

std::vector<double> classical_double_slit(double p_pass_a, double p_pass_b,
                                          const std::vector<double>& k_given_a,
                                          const std::vector<double>& k_given_b) {
    auto check_dist = [](const std::vector<double>& d, const char* who) {
        if (d.empty()) throw ContractViolation(std::string(who) + ": empty distribution");
        double s = 0.0;
        for (double p : d) {
            if (!(p >= -1e-12 && p <= 1.0 + 1e-12))
                throw InvalidState(std::string(who) + ": probability outside [0,1]");
            s += p;
        }
        if (std::abs(s - 1.0) > 1e-9)
            throw InvalidState(std::string(who) + ": distribution does not sum to 1");
    };
    check_dist(k_given_a, "classical_double_slit(k_given_a)");
    check_dist(k_given_b, "classical_double_slit(k_given_b)");
    if (k_given_a.size() != k_given_b.size())
        throw ContractViolation("classical_double_slit: conditional supports differ");
    if (!(p_pass_a > 0.0 && p_pass_b > 0.0) || std::abs(p_pass_a - p_pass_b) > 1e-12)
        throw ContractViolation("classical_double_slit: slits must pass equally");
    std::vector<double> out(k_given_a.size());
    for (size_t k = 0; k < out.size(); ++k) out[k] = 0.5 * k_given_a[k] + 0.5 * k_given_b[k];
    return out;
}

namespace {

// Phase-1 simplex: find q >= 0 with Aq = b, feasible iff the artificial
// objective reaches ~0. Bland's rule; the tableau is 9 x 16 here, so
// exactness up to float arithmetic is not a concern.
bool linear_feasible(const std::vector<std::vector<double>>& a, std::vector<double> b) {
    const size_t m = a.size();
    const size_t n = a.empty() ? 0 : a.front().size();
    // Flip rows so b >= 0.
    std::vector<std::vector<double>> rows = a;
    for (size_t r = 0; r < m; ++r)
        if (b[r] < 0.0) {
            b[r] = -b[r];
            for (double& v : rows[r]) v = -v;
        }
    // Tableau columns: n original + m artificial + rhs.
    const size_t cols = n + m + 1;
    std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
    for (size_t r = 0; r < m; ++r) {
        for (size_t c = 0; c < n; ++c) t[r][c] = rows[r][c];
        t[r][n + r] = 1.0;
        t[r][cols - 1] = b[r];
    }
    // Objective: minimize sum of artificials => row = -(sum of constraint rows)
    for (size_t c = 0; c < cols; ++c) {
        double s = 0.0;
        for (size_t r = 0; r < m; ++r) s += t[r][c];
        t[m][c] = -s;
    }
    for (size_t r = 0; r < m; ++r) t[m][n + r] = 0.0;

    std::vector<size_t> basis(m);
    for (size_t r = 0; r < m; ++r) basis[r] = n + r;

    const double eps = 1e-11;
    for (int iter = 0; iter < 10000; ++iter) {
        // Bland: smallest-index entering column with negative reduced cost.
        size_t enter = cols;
        for (size_t c = 0; c + 1 < cols; ++c)
            if (t[m][c] < -eps) {
                enter = c;
                break;
            }
        if (enter == cols) break;
        size_t leave = m;
        double best = 0.0;
        for (size_t r = 0; r < m; ++r) {
            if (t[r][enter] > eps) {
                double ratio = t[r][cols - 1] / t[r][enter];
                if (leave == m || ratio < best - 1e-15 ||
                    (std::abs(ratio - best) <= 1e-15 && basis[r] < basis[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
        }
        if (leave == m) break;  // unbounded: cannot happen for a feasibility LP
        double piv = t[leave][enter];
        for (double& v : t[leave]) v /= piv;
        for (size_t r = 0; r <= m; ++r) {
            if (r == leave) continue;
            double f = t[r][enter];
            if (f == 0.0) continue;
            for (size_t c = 0; c < cols; ++c) t[r][c] -= f * t[leave][c];
        }
        basis[leave] = enter;
    }
    double objective = -t[m][cols - 1];
    return objective <= 1e-9;
}

}  // namespace

FeasibilityResult joint_measure_feasible(const ChshTable& table) {
    for (int x = 0; x < 2; ++x) {
        if (std::abs(table.marginal_a[static_cast<size_t>(x)]) > 1.0 + 1e-12 ||
            std::abs(table.marginal_b[static_cast<size_t>(x)]) > 1.0 + 1e-12)
            throw InvalidState("joint_measure_feasible: |marginal| > 1");
        for (int y = 0; y < 2; ++y)
            if (std::abs(table.correlation[static_cast<size_t>(x)][static_cast<size_t>(y)]) > 1.0 + 1e-12)
                throw InvalidState("joint_measure_feasible: |correlation| > 1");
    }

    // 16 deterministic assignments (A_a, A_a', B_b, B_b') in {+-1}^4.
    std::vector<std::vector<double>> rows(9, std::vector<double>(16, 0.0));
    std::vector<double> rhs(9, 0.0);
    for (int v = 0; v < 16; ++v) {
        int sa0 = (v & 1) ? 1 : -1;
        int sa1 = (v & 2) ? 1 : -1;
        int sb0 = (v & 4) ? 1 : -1;
        int sb1 = (v & 8) ? 1 : -1;
        const size_t vv = static_cast<size_t>(v);
        rows[0][vv] = 1.0;  // normalization
        rows[1][vv] = sa0 * sb0;
        rows[2][vv] = sa0 * sb1;
        rows[3][vv] = sa1 * sb0;
        rows[4][vv] = sa1 * sb1;
        rows[5][vv] = sa0;
        rows[6][vv] = sa1;
        rows[7][vv] = sb0;
        rows[8][vv] = sb1;
    }
    rhs[0] = 1.0;
    rhs[1] = table.correlation[0][0];
    rhs[2] = table.correlation[0][1];
    rhs[3] = table.correlation[1][0];
    rhs[4] = table.correlation[1][1];
    rhs[5] = table.marginal_a[0];
    rhs[6] = table.marginal_a[1];
    rhs[7] = table.marginal_b[0];
    rhs[8] = table.marginal_b[1];

    FeasibilityResult res;
    res.feasible = linear_feasible(rows, rhs);

    const int sign_patterns[4][4] = {
        {1, 1, 1, -1}, {1, 1, -1, 1}, {1, -1, 1, 1}, {-1, 1, 1, 1}};
    double best = -1.0;
    for (const auto& sp : sign_patterns) {
        double s = sp[0] * table.correlation[0][0] + sp[1] * table.correlation[0][1] +
                   sp[2] * table.correlation[1][0] + sp[3] * table.correlation[1][1];
        if (std::abs(s) > best) {
            best = std::abs(s);
            res.witness_signs = {sp[0], sp[1], sp[2], sp[3]};
        }
    }
    res.chsh_witness = best;
    return res;
}

double chsh_witness(const std::array<double, 4>& e) {
    const int sign_patterns[4][4] = {
        {1, 1, 1, -1}, {1, 1, -1, 1}, {1, -1, 1, 1}, {-1, 1, 1, 1}};
    double best = 0.0;
    for (const auto& sp : sign_patterns) {
        double s = sp[0] * e[0] + sp[1] * e[1] + sp[2] * e[2] + sp[3] * e[3];
        best = std::max(best, std::abs(s));
    }
    return best;
}

}  // namespace epistate::contextprob
