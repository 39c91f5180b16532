// SPDX-License-Identifier: Apache-2.0
//! \file bbsim/rng.hpp
//! Counter-based trial RNG: every trial's stream is a pure function of
//! (seed, trial index), so counts are invariant under any partitioning of
//! trials across workers.
//!
//! Construction mixes seed and counter through two rounds of the SplitMix64
//! finalizer (Steele, Lea & Flood 2014; Vigna's fixed-increment variant);
//! subsequent draws step a SplitMix64 stream from that state. Fixed for
//! reproducibility: the same (seed, index, draw number) yields the same bits
//! on every platform.
#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace bbsim {

namespace detail {
inline std::uint64_t splitmix64_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

class TrialRng {
  public:
    TrialRng(std::uint64_t seed, std::uint64_t trial_index)
        : state_(detail::splitmix64_finalize(
              detail::splitmix64_finalize(seed + 0x9e3779b97f4a7c15ULL)
              ^ trial_index)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return detail::splitmix64_finalize(state_);
    }

    //! Uniform in [0, 1), 53 random bits.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    //! Box-Muller pair of independent standard normals.
    std::pair<double, double> next_gaussian_pair() {
        double u1 = 1.0 - next_uniform();  // (0, 1], keeps log finite
        double u2 = next_uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double phi = 2.0 * M_PI * u2;
        return {r * std::cos(phi), r * std::sin(phi)};
    }

  private:
    std::uint64_t state_;
};

}  // namespace bbsim
