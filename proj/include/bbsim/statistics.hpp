// SPDX-License-Identifier: Apache-2.0
//! \file bbsim/statistics.hpp
//! Correlation estimates with uncertainties, the CHSH combination, and an
//! exact Clopper-Pearson interval for individual outcome probabilities.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "bbsim/correlations.hpp"
#include "bbsim/errors.hpp"
#include "bbsim/simulation.hpp"

namespace bbsim {

struct CorrelationEstimate {
    double e_hat{0.0};
    double se{0.0};
    std::uint64_t n{0};
};

//! e_hat = (n_pp + n_mm - n_pm - n_mp) / N, plug-in standard error
//! sqrt((1 - e_hat^2) / N). The SE degenerates to 0 at |e_hat| = 1, which is
//! exact for deterministic outcomes but fragile near-perfect correlations;
//! clopper_pearson below gives exact per-outcome intervals when that matters.
inline CorrelationEstimate estimate_correlation(const CountsTable& counts) {
    std::uint64_t n = counts.total();
    if (n == 0) throw EmptyCountsError("estimate_correlation: no counts");
    double nd = static_cast<double>(n);
    double e = (static_cast<double>(counts.n_pp) + static_cast<double>(counts.n_mm)
                - static_cast<double>(counts.n_pm) - static_cast<double>(counts.n_mp))
               / nd;
    double var = (1.0 - e * e) / nd;
    return {e, var > 0.0 ? std::sqrt(var) : 0.0, n};
}

struct AnglePair {
    double alpha{0.0};
    double beta{0.0};
};

struct ChshResult {
    double s{0.0};
    double se{0.0};
    std::array<AnglePair, 4> settings{};
};

//! S = e1 - e2 + e3 + e4, standard errors propagated in quadrature. The sign
//! placement (minus on the second term) is fixed; the four placements are
//! equivalent up to relabeling of settings.
inline ChshResult chsh(const CorrelationEstimate& e1, const CorrelationEstimate& e2,
                       const CorrelationEstimate& e3, const CorrelationEstimate& e4,
                       const std::array<AnglePair, 4>& settings = {}) {
    double s = e1.e_hat - e2.e_hat + e3.e_hat + e4.e_hat;
    double var = e1.se * e1.se + e2.se * e2.se + e3.se * e3.se + e4.se * e4.se;
    return {s, std::sqrt(var), settings};
}

struct Interval {
    double lo{0.0};
    double hi{1.0};
};

namespace detail {

//! Regularized incomplete beta I_x(a, b) by Lentz continued fraction.
inline double betainc(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    auto cf = [](double a, double b, double x) {
        const double tiny = 1e-300;
        double qab = a + b, qap = a + 1.0, qam = a - 1.0;
        double c = 1.0, d = 1.0 - qab * x / qap;
        if (std::abs(d) < tiny) d = tiny;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m <= 300; ++m) {
            double m2 = 2.0 * m;
            double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
            d = 1.0 + aa * d;
            if (std::abs(d) < tiny) d = tiny;
            c = 1.0 + aa / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            h *= d * c;
            aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
            d = 1.0 + aa * d;
            if (std::abs(d) < tiny) d = tiny;
            c = 1.0 + aa / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            double del = d * c;
            h *= del;
            if (std::abs(del - 1.0) < 1e-15) break;
        }
        return h;
    };
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b)
                      + a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * cf(a, b, x) / a;
    }
    return 1.0 - front * cf(b, a, 1.0 - x) / b;
}

//! Quantile of Beta(a, b) by bisection on betainc.
inline double beta_quantile(double a, double b, double p) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (betainc(a, b, mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

//! Exact Clopper-Pearson interval for a binomial proportion, coverage
//! 1 - alpha.
inline Interval clopper_pearson(std::uint64_t successes, std::uint64_t n,
                                double alpha = 0.05) {
    if (n == 0) throw EmptyCountsError("clopper_pearson: n must be >= 1");
    if (successes > n) throw InvalidInputError("clopper_pearson: successes > n");
    double k = static_cast<double>(successes);
    double nd = static_cast<double>(n);
    Interval iv;
    iv.lo = successes == 0 ? 0.0
                           : detail::beta_quantile(k, nd - k + 1.0, alpha / 2.0);
    iv.hi = successes == n
                ? 1.0
                : detail::beta_quantile(k + 1.0, nd - k, 1.0 - alpha / 2.0);
    return iv;
}

}  // namespace bbsim
