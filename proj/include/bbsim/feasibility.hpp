// SPDX-License-Identifier: Apache-2.0
//! \file bbsim/feasibility.hpp
//! Feasibility constraints relating splitter velocity V, total distance
//! L = L1 + L2, and the admissible timing window delta_t.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bbsim/errors.hpp"
#include "bbsim/relativity.hpp"

namespace bbsim {

//! Strict upper bound on the path delay: delta_t < V*L/c^2. The emission
//! delay tau is neglected here (down-conversion pairs have tau << delta_t);
//! required_velocity keeps it.
inline double max_delay(double velocity, double total_distance) {
    if (!(velocity > 0.0) || !(velocity < speed_of_light)
        || !std::isfinite(velocity)) {
        throw InvalidQueryError("max_delay: velocity must be in (0, c)");
    }
    if (!(total_distance > 0.0) || !std::isfinite(total_distance)) {
        throw InvalidQueryError("max_delay: distance must be > 0");
    }
    return velocity * total_distance / (speed_of_light * speed_of_light);
}

//! Minimum BS2 velocity for the before-before configuration:
//! V = c^2 * (tau + delta_t) / L.
inline double required_velocity(double delta_t, double tau, double total_distance) {
    if (!(total_distance > 0.0) || !std::isfinite(total_distance)) {
        throw InvalidQueryError("required_velocity: distance must be > 0");
    }
    if (!std::isfinite(delta_t) || !std::isfinite(tau) || !(delta_t + tau > 0.0)) {
        throw InvalidQueryError("required_velocity: tau + delta_t must be > 0");
    }
    double v = speed_of_light * speed_of_light * (tau + delta_t) / total_distance;
    if (v >= speed_of_light) {
        throw InfeasibleConfigurationError(
            "required_velocity: " + std::to_string(v)
            + " m/s exceeds c; no subluminal splitter achieves this delay");
    }
    return v;
}

enum class SweepAxis { velocity, distance, delta_t };

struct SweepRow {
    double input{0.0};   //!< the swept value
    double value{0.0};   //!< max_delay (V/L sweeps) or required_velocity (delta_t sweep)
    bool feasible{false};
    bool error{false};
    std::string message;
};

struct SweepFixed {
    double velocity{0.0};
    double total_distance{0.0};
    double delta_t{0.0};
    double tau{0.0};
};

//! Evaluate the bound along one axis. Rows where the solver rejects the
//! inputs are flagged with error = true and kept in place, not dropped.
//! Feasibility is the paper's strict inequality delta_t < V*L/c^2 evaluated
//! against the row's own parameters.
inline std::vector<SweepRow> sweep(SweepAxis axis, double start, double stop,
                                   double step, const SweepFixed& fixed) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw InvalidQueryError("sweep: step must be > 0");
    }
    if (!(start <= stop)) {
        throw InvalidQueryError("sweep: empty range");
    }
    std::vector<SweepRow> rows;
    // half-step slack so stop lands in the table despite rounding
    for (double x = start; x <= stop + 0.5 * step; x += step) {
        SweepRow row;
        row.input = x;
        try {
            switch (axis) {
                case SweepAxis::velocity:
                    if (x == 0.0) {
                        // a splitter at rest gives no frame reversal
                        row.value = 0.0;
                        row.feasible = false;
                    } else {
                        row.value = max_delay(x, fixed.total_distance);
                        row.feasible = fixed.delta_t < row.value;
                    }
                    break;
                case SweepAxis::distance:
                    row.value = max_delay(fixed.velocity, x);
                    row.feasible = fixed.delta_t < row.value;
                    break;
                case SweepAxis::delta_t:
                    row.value = required_velocity(x, fixed.tau, fixed.total_distance);
                    row.feasible = x < max_delay(fixed.velocity, fixed.total_distance);
                    break;
            }
        } catch (const std::exception& e) {
            row.error = true;
            row.message = e.what();
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace bbsim
