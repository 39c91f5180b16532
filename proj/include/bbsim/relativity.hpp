// SPDX-License-Identifier: Apache-2.0
//! \file bbsim/relativity.hpp
//! Special-relativistic ordering of the two beam-splitter impacts and their
//! classification as before / non-before / distinguishable.
#pragma once

#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>

#include "bbsim/errors.hpp"

namespace bbsim {

//! Speed of light, m/s, exact by definition.
inline constexpr double speed_of_light = 299792458.0;

//! Lab-frame (time, position) of a photon impact. Positions lie on the single
//! source-splitter axis: source at x = 0, side 1 at negative x, side 2 at
//! positive x.
struct SpacetimeEvent {
    double t{0.0};  //!< seconds
    double x{0.0};  //!< meters

    void validate() const {
        if (!std::isfinite(t) || !std::isfinite(x)) {
            throw InvalidInputError("SpacetimeEvent: t and x must be finite");
        }
    }
};

//! Inertial frame of a beam splitter at the moment of impact. Velocity is
//! signed along the axis; positive means away from the source on side 2.
struct FrameVelocity {
    double v{0.0};      //!< m/s
    double gamma{1.0};  //!< Lorentz factor, derived from v

    static FrameVelocity from_velocity(double v) {
        if (!std::isfinite(v)) {
            throw InvalidInputError("FrameVelocity: velocity must be finite");
        }
        if (std::abs(v) >= speed_of_light) {
            throw InvalidVelocityError(
                "FrameVelocity: |v| must be < c = 299792458 m/s, got "
                + std::to_string(v));
        }
        double beta = v / speed_of_light;
        return FrameVelocity{v, 1.0 / std::sqrt(1.0 - beta * beta)};
    }
};

//! u: impact preserves which-path indistinguishability of the input
//! sub-ensemble; d: impact makes distinguishability possible.
enum class Distinguishability { u, d };

struct ImpactContext {
    SpacetimeEvent event;
    FrameVelocity frame;
    Distinguishability flag{Distinguishability::u};
};

enum class ImpactClass { before, non_before, distinguishable };

//! (class of impact 1, class of impact 2).
using ExperimentClass = std::pair<ImpactClass, ImpactClass>;

//! Time of event e_i minus time of event e_j, both measured in `frame`.
//!
//! Computed in difference form gamma * (dt - v*dx/c^2); transforming absolute
//! coordinates first would cancel catastrophically between large t and the
//! tiny v*x/c^2 term. Negative result means e_i precedes e_j in that frame.
inline double time_difference_in_frame(const SpacetimeEvent& e_i,
                                       const SpacetimeEvent& e_j,
                                       const FrameVelocity& frame) {
    e_i.validate();
    e_j.validate();
    if (std::abs(frame.v) >= speed_of_light) {
        throw InvalidVelocityError("time_difference_in_frame: |v| >= c");
    }
    double dt = e_i.t - e_j.t;
    double dx = e_i.x - e_j.x;
    return frame.gamma * (dt - frame.v * dx / (speed_of_light * speed_of_light));
}

//! Classify one impact against its partner.
//!
//! A d impact is always Distinguishable. A u impact is Before when the
//! partner is d, or when it strictly precedes the partner's impact in its own
//! splitter's rest frame; ties (within tie_tolerance) and later arrivals are
//! NonBefore.
inline ImpactClass classify_impact(const ImpactContext& self,
                                   const ImpactContext& other,
                                   double tie_tolerance = 0.0) {
    if (tie_tolerance < 0.0 || !std::isfinite(tie_tolerance)) {
        throw InvalidInputError("classify_impact: tie_tolerance must be >= 0");
    }
    if (self.flag == Distinguishability::d) {
        return ImpactClass::distinguishable;
    }
    if (other.flag == Distinguishability::d) {
        return ImpactClass::before;
    }
    double diff = time_difference_in_frame(self.event, other.event, self.frame);
    return diff < -tie_tolerance ? ImpactClass::before : ImpactClass::non_before;
}

inline ExperimentClass classify_experiment(const ImpactContext& ctx1,
                                           const ImpactContext& ctx2,
                                           double tie_tolerance = 0.0) {
    return {classify_impact(ctx1, ctx2, tie_tolerance),
            classify_impact(ctx2, ctx1, tie_tolerance)};
}

inline const char* to_string(ImpactClass c) {
    switch (c) {
        case ImpactClass::before: return "Before";
        case ImpactClass::non_before: return "NonBefore";
        case ImpactClass::distinguishable: return "Distinguishable";
    }
    return "?";
}

}  // namespace bbsim
