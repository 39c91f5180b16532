// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "bbsim/statistics.hpp"

using namespace bbsim;

namespace {

CountsTable make_counts(std::uint64_t pp, std::uint64_t pm, std::uint64_t mp,
                        std::uint64_t mm) {
    CountsTable t;
    t.n_pp = pp;
    t.n_pm = pm;
    t.n_mp = mp;
    t.n_mm = mm;
    return t;
}

CorrelationEstimate exact(double e) { return {e, 0.0, 1}; }

}  // namespace

TEST_CASE("estimate_correlation examples") {
    SUBCASE("perfect correlation") {
        CorrelationEstimate est = estimate_correlation(make_counts(250, 0, 0, 250));
        CHECK(est.e_hat == 1.0);
        CHECK(est.se == 0.0);
        CHECK(est.n == 500);
    }
    SUBCASE("uniform counts") {
        CorrelationEstimate est =
            estimate_correlation(make_counts(250, 250, 250, 250));
        CHECK(est.e_hat == 0.0);
        CHECK(est.se == doctest::Approx(1.0 / std::sqrt(1000.0)).epsilon(1e-15));
    }
    SUBCASE("mixed counts") {
        CorrelationEstimate est = estimate_correlation(make_counts(433, 67, 67, 433));
        CHECK(est.e_hat == doctest::Approx(0.732).epsilon(1e-12));
        CHECK(est.se == doctest::Approx(std::sqrt((1.0 - 0.732 * 0.732) / 1000.0))
                            .epsilon(1e-12));
        CHECK(est.se == doctest::Approx(0.0215).epsilon(2e-3));
    }
    SUBCASE("empty counts") {
        CHECK_THROWS_AS(estimate_correlation(make_counts(0, 0, 0, 0)),
                        EmptyCountsError);
    }
}

TEST_CASE("estimate_correlation is invariant under uniform count scaling") {
    for (std::uint64_t k : {std::uint64_t{1}, std::uint64_t{7}, std::uint64_t{100}}) {
        CorrelationEstimate est =
            estimate_correlation(make_counts(433 * k, 67 * k, 67 * k, 433 * k));
        CHECK(est.e_hat == doctest::Approx(0.732).epsilon(1e-12));
    }
}

TEST_CASE("chsh combination") {
    SUBCASE("all zeros") {
        ChshResult r = chsh(exact(0), exact(0), exact(0), exact(0));
        CHECK(r.s == 0.0);
        CHECK(r.se == 0.0);
    }
    SUBCASE("QM closed form reaches 2*sqrt(2)") {
        // settings (alpha, alpha') = (0, pi/4), (beta, beta') = (pi/8, -pi/8);
        // minus sign on E(alpha', beta)
        auto e_qm = [](double a, double b) {
            return exact(qm_joint_distribution({a, b}).correlation());
        };
        ChshResult r = chsh(e_qm(0, M_PI / 8), e_qm(M_PI / 4, M_PI / 8),
                            e_qm(0, -M_PI / 8), e_qm(M_PI / 4, -M_PI / 8));
        CHECK(r.s == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("AD closed form reaches sqrt(2) at the same settings") {
        auto e_ad = [](double a, double b) {
            return exact(local_joint_distribution({a, b}).correlation());
        };
        ChshResult r = chsh(e_ad(0, M_PI / 8), e_ad(M_PI / 4, M_PI / 8),
                            e_ad(0, -M_PI / 8), e_ad(M_PI / 4, -M_PI / 8));
        CHECK(r.s == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("standard errors propagate in quadrature") {
        CorrelationEstimate e{0.5, 0.1, 100};
        ChshResult r = chsh(e, e, e, e);
        CHECK(r.se == doctest::Approx(0.2).epsilon(1e-12));
    }
}

TEST_CASE("product-form correlations never exceed |S| = 2 (coarse grid)") {
    // 10-degree grid here; the acceptance suite runs the 1-degree version
    double max_s = 0.0;
    for (int ia = 0; ia < 18; ++ia) {
        for (int ia2 = 0; ia2 < 18; ++ia2) {
            for (int ib = 0; ib < 18; ++ib) {
                for (int ib2 = 0; ib2 < 18; ++ib2) {
                    double f1 = std::cos(2.0 * ia * M_PI / 18.0);
                    double f2 = std::cos(2.0 * ia2 * M_PI / 18.0);
                    double g1 = std::cos(2.0 * ib * M_PI / 18.0);
                    double g2 = std::cos(2.0 * ib2 * M_PI / 18.0);
                    double s = std::abs(f1 * g1 - f2 * g1 + f1 * g2 + f2 * g2);
                    max_s = std::max(max_s, s);
                }
            }
        }
    }
    CHECK(max_s <= 2.0 + 1e-9);
}

TEST_CASE("clopper_pearson sanity") {
    SUBCASE("k = 0 has the closed-form upper limit") {
        Interval iv = clopper_pearson(0, 20, 0.05);
        CHECK(iv.lo == 0.0);
        CHECK(iv.hi == doctest::Approx(1.0 - std::pow(0.025, 1.0 / 20.0))
                           .epsilon(1e-9));
    }
    SUBCASE("k = n mirrors it") {
        Interval iv = clopper_pearson(20, 20, 0.05);
        CHECK(iv.hi == 1.0);
        CHECK(iv.lo == doctest::Approx(std::pow(0.025, 1.0 / 20.0)).epsilon(1e-9));
    }
    SUBCASE("interval brackets the point estimate") {
        Interval iv = clopper_pearson(250, 1000, 0.05);
        CHECK(iv.lo < 0.25);
        CHECK(iv.hi > 0.25);
        CHECK(iv.hi - iv.lo < 0.06);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(clopper_pearson(1, 0), EmptyCountsError);
        CHECK_THROWS_AS(clopper_pearson(5, 4), InvalidInputError);
    }
}
