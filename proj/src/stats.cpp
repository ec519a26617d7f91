#include "epistate/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "epistate/common.hpp"

namespace epistate::stats {

namespace {

// Acklam's rational approximation to the standard normal quantile.
double normal_quantile(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > phigh) {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double betacf(double a, double b, double x) {
    // Lentz's continued fraction for the incomplete beta.
    const int max_iter = 300;
    const double eps = 3e-15, fpmin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                      b * std::log(1.0 - x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(b) - std::lgamma(a) +
                          b * std::log(1.0 - x) + a * std::log(x)) *
                     betacf(b, a, 1.0 - x) / b;
}

namespace {

// Inverse of I_x(a,b) by bisection; deterministic and accurate to ~1e-12.
double inverse_incomplete_beta(double a, double b, double target) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (regularized_incomplete_beta(a, b, mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

int64_t binomial_draw(int64_t n, double p, SeededRng& rng) {
    if (n < 0) throw ContractViolation("binomial_draw: negative n");
    if (p <= 0.0) {
        rng.next_unit();
        return 0;
    }
    if (p >= 1.0) {
        rng.next_unit();
        return n;
    }
    double npq = static_cast<double>(n) * p * (1.0 - p);
    double u = rng.next_unit();
    if (npq > 900.0) {
        double mean = static_cast<double>(n) * p;
        double k = std::round(mean + std::sqrt(npq) * normal_quantile(u));
        if (k < 0.0) k = 0.0;
        if (k > static_cast<double>(n)) k = static_cast<double>(n);
        return static_cast<int64_t>(k);
    }
    // inverse-CDF walk
    double logq = std::log1p(-p);
    double pk = std::exp(static_cast<double>(n) * logq);  // P(K=0)
    double cdf = pk;
    int64_t k = 0;
    double ratio = p / (1.0 - p);
    while (u > cdf && k < n) {
        ++k;
        pk *= ratio * static_cast<double>(n - k + 1) / static_cast<double>(k);
        cdf += pk;
        if (pk < 1e-320) break;  // tail exhausted by float underflow
    }
    return k;
}

std::vector<int64_t> multinomial_resample(const std::vector<int64_t>& counts, SeededRng& rng) {
    int64_t total = std::accumulate(counts.begin(), counts.end(), int64_t{0});
    std::vector<int64_t> out(counts.size(), 0);
    int64_t remaining = total;
    double mass = 1.0;
    for (size_t i = 0; i + 1 < counts.size(); ++i) {
        if (remaining == 0 || mass <= 0.0) break;
        double p = static_cast<double>(counts[i]) / static_cast<double>(total);
        double cond = std::min(1.0, std::max(0.0, p / mass));
        out[i] = binomial_draw(remaining, cond, rng);
        remaining -= out[i];
        mass -= p;
    }
    if (!counts.empty()) out.back() = remaining;
    return out;
}

Interval bootstrap_ci(const std::vector<int64_t>& counts,
                      const std::function<double(const std::vector<int64_t>&)>& statistic,
                      SeededRng& rng, int resamples) {
    std::vector<double> stats;
    stats.reserve(static_cast<size_t>(resamples));
    for (int r = 0; r < resamples; ++r) {
        stats.push_back(statistic(multinomial_resample(counts, rng)));
    }
    std::sort(stats.begin(), stats.end());
    auto pick = [&](double q) {
        double idx = q * (static_cast<double>(stats.size()) - 1.0);
        size_t k = static_cast<size_t>(std::llround(idx));
        return stats[std::min(k, stats.size() - 1)];
    };
    return Interval{pick(0.025), pick(0.975)};
}

Interval clopper_pearson(int64_t successes, int64_t trials, double confidence) {
    if (trials < 0 || successes < 0 || successes > trials)
        throw ContractViolation("clopper_pearson: bad counts");
    double alpha = 1.0 - confidence;
    if (trials == 0) return Interval{0.0, 1.0};
    double x = static_cast<double>(successes), n = static_cast<double>(trials);
    Interval iv;
    iv.lo = (successes == 0) ? 0.0 : inverse_incomplete_beta(x, n - x + 1.0, alpha / 2.0);
    iv.hi = (successes == trials) ? 1.0
                                  : inverse_incomplete_beta(x + 1.0, n - x, 1.0 - alpha / 2.0);
    return iv;
}

Interval count_ratio_ci(int64_t numerator, int64_t denominator, double confidence) {
    Interval p = clopper_pearson(numerator, numerator + denominator, confidence);
    auto odds = [](double q) {
        if (q >= 1.0) return std::numeric_limits<double>::infinity();
        return q / (1.0 - q);
    };
    return Interval{odds(p.lo), odds(p.hi)};
}

}  // namespace epistate::stats
