// SPDX-License-Identifier: Apache-2.0
//! \file bbsim/correlations.hpp
//! Closed-form joint outcome distributions for the QM and local (AD
//! before-before) models, the exact 4-dimensional state-vector oracle, and
//! the AD model-selection rule.
//!
//! Conventions, fixed globally:
//!  - half-wave-plate rotation R(theta): H -> cos(theta) H + sin(theta) V,
//!    V -> -sin(theta) H + cos(theta) V
//!  - the vertically oriented polarizing beam splitter transmits H
//!    (outcome +1) and reflects V (outcome -1)
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "bbsim/errors.hpp"
#include "bbsim/relativity.hpp"

namespace bbsim {

//! Half-wave-plate settings, radians. All formulas are pi-periodic in each
//! angle, so values are accepted as-is; reduce() is available when a
//! canonical representative is wanted.
struct AngleSettings {
    double alpha{0.0};
    double beta{0.0};

    //! Both angles reduced into [0, pi).
    AngleSettings reduce() const {
        auto wrap = [](double a) {
            double r = std::fmod(a, M_PI);
            return r < 0.0 ? r + M_PI : r;
        };
        return {wrap(alpha), wrap(beta)};
    }
};

//! Probabilities over the four outcome pairs (sigma, omega) in {+1,-1}^2.
struct JointDistribution {
    double p_pp{0.0};
    double p_pm{0.0};
    double p_mp{0.0};
    double p_mm{0.0};

    double prob(int sigma, int omega) const {
        if (sigma > 0) return omega > 0 ? p_pp : p_pm;
        return omega > 0 ? p_mp : p_mm;
    }

    //! E = sum sigma*omega*p.
    double correlation() const { return p_pp + p_mm - p_pm - p_mp; }

    double marginal_plus_1() const { return p_pp + p_pm; }
    double marginal_plus_2() const { return p_pp + p_mp; }
};

//! Two-photon polarization amplitudes over {H1H2, H1V2, V1H2, V1V2}.
using StateVector = std::array<std::complex<double>, 4>;

inline double squared_norm(const StateVector& s) {
    double n = 0.0;
    for (const auto& a : s) n += std::norm(a);
    return n;
}

//! (|H1 H2> - |V1 V2>) / sqrt(2)
inline StateVector bell_state() {
    double r = 1.0 / std::sqrt(2.0);
    return {std::complex<double>{r, 0.0}, {0.0, 0.0}, {0.0, 0.0},
            std::complex<double>{-r, 0.0}};
}

//! Apply R(alpha) (x) R(beta) to a two-photon state.
inline StateVector apply_wave_plates(const StateVector& state,
                                     const AngleSettings& angles) {
    double ca = std::cos(angles.alpha), sa = std::sin(angles.alpha);
    double cb = std::cos(angles.beta), sb = std::sin(angles.beta);
    const auto& s = state;
    // Basis order: HH, HV, VH, VV. Photon 1 selects the block, photon 2 the
    // element within it.
    StateVector out;
    out[0] = ca * (cb * s[0] - sb * s[1]) - sa * (cb * s[2] - sb * s[3]);
    out[1] = ca * (sb * s[0] + cb * s[1]) - sa * (sb * s[2] + cb * s[3]);
    out[2] = sa * (cb * s[0] - sb * s[1]) + ca * (cb * s[2] - sb * s[3]);
    out[3] = sa * (sb * s[0] + cb * s[1]) + ca * (sb * s[2] + cb * s[3]);
    return out;
}

//! Independent oracle: rotate the state, then read p(sigma, omega) off the
//! squared amplitudes, H mapping to transmitted (+1) and V to reflected (-1)
//! on each side. Validation path only; the Monte Carlo samples the closed
//! forms below.
inline JointDistribution oracle_joint_distribution(const StateVector& state,
                                                   const AngleSettings& angles) {
    if (std::abs(squared_norm(state) - 1.0) > 1e-9) {
        throw InvalidStateError("oracle_joint_distribution: state not normalized");
    }
    StateVector rotated = apply_wave_plates(state, angles);
    return {std::norm(rotated[0]), std::norm(rotated[1]), std::norm(rotated[2]),
            std::norm(rotated[3])};
}

//! QM closed form, p(sigma,omega) = [1 + sigma*omega*cos 2(alpha+beta)]/4.
inline JointDistribution qm_joint_distribution(const AngleSettings& angles) {
    double e = std::cos(2.0 * (angles.alpha + angles.beta));
    double same = (1.0 + e) / 4.0;
    double diff = (1.0 - e) / 4.0;
    return {same, diff, diff, same};
}

//! Local closed form, p(sigma,omega) = [1 + sigma*omega*cos 2a cos 2b]/4 —
//! the equal-weight mixture of the definite-polarization pairs (H,H), (V,V).
inline JointDistribution local_joint_distribution(const AngleSettings& angles) {
    double e = std::cos(2.0 * angles.alpha) * std::cos(2.0 * angles.beta);
    double same = (1.0 + e) / 4.0;
    double diff = (1.0 - e) / 4.0;
    return {same, diff, diff, same};
}

//! What to do with a (NonBefore, NonBefore) pair, which the AD model leaves
//! unspecified.
enum class NonBeforePolicy { error, treat_as_qm, treat_as_local };

//! AD model selection: one before and one non-before impact reproduces the
//! QM distribution; two before impacts, or any distinguishable impact,
//! decouples the photons into the local distribution.
inline JointDistribution ad_joint_distribution(
    const ExperimentClass& exp_class, const AngleSettings& angles,
    NonBeforePolicy policy = NonBeforePolicy::error) {
    const ImpactClass c1 = exp_class.first;
    const ImpactClass c2 = exp_class.second;
    if (c1 == ImpactClass::distinguishable || c2 == ImpactClass::distinguishable) {
        return local_joint_distribution(angles);
    }
    if (c1 == ImpactClass::before && c2 == ImpactClass::before) {
        return local_joint_distribution(angles);
    }
    if (c1 == ImpactClass::non_before && c2 == ImpactClass::non_before) {
        switch (policy) {
            case NonBeforePolicy::treat_as_qm:
                return qm_joint_distribution(angles);
            case NonBeforePolicy::treat_as_local:
                return local_joint_distribution(angles);
            case NonBeforePolicy::error:
                break;
        }
        throw UnsupportedConfigurationError(
            "ad_joint_distribution: class (NonBefore, NonBefore) has no AD "
            "prediction; set nonbefore_policy to treat-as-qm or treat-as-local "
            "to override");
    }
    // (Before, NonBefore) or (NonBefore, Before)
    return qm_joint_distribution(angles);
}

}  // namespace bbsim
