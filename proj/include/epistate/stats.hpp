// Sampling-statistics helpers: binomial/multinomial draws for bootstrap
// resampling, percentile bootstrap confidence intervals over count data, and
// the exact conditional (Clopper-Pearson) interval for a ratio of counts,
// which stays meaningful when a cell is zero.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "epistate/rng.hpp"

namespace epistate::stats {

// One draw from Binomial(n, p). Exact inverse-CDF walk for moderate variance,
// clamped normal approximation when n p (1-p) is large (bootstrap-grade
// accuracy; deterministic given the rng).
int64_t binomial_draw(int64_t n, double p, SeededRng& rng);

// Multinomial resample of `counts` holding the total fixed.
std::vector<int64_t> multinomial_resample(const std::vector<int64_t>& counts, SeededRng& rng);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// 95% percentile bootstrap of a statistic of category counts.
// `resamples` defaults to the report convention (1000).
Interval bootstrap_ci(const std::vector<int64_t>& counts,
                      const std::function<double(const std::vector<int64_t>&)>& statistic,
                      SeededRng& rng, int resamples = 1000);

// Regularized incomplete beta I_x(a, b) and the Clopper-Pearson interval for
// a binomial proportion.
double regularized_incomplete_beta(double a, double b, double x);
Interval clopper_pearson(int64_t successes, int64_t trials, double confidence = 0.95);

// Exact conditional interval for the ratio r = x / y of two counts with a
// shared sampling budget: Clopper-Pearson on p = x/(x+y) mapped through the
// monotone r = p/(1-p). Degenerate cells give honest endpoints: [0, inf) when
// both counts vanish, [large, inf) when only the denominator does.
Interval count_ratio_ci(int64_t numerator, int64_t denominator, double confidence = 0.95);

}  // namespace epistate::stats
