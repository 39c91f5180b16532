// SPDX-License-Identifier: Apache-2.0
//! Umbrella header.
#pragma once

#include "bbsim/config.hpp"
#include "bbsim/correlations.hpp"
#include "bbsim/errors.hpp"
#include "bbsim/feasibility.hpp"
#include "bbsim/manifest.hpp"
#include "bbsim/relativity.hpp"
#include "bbsim/rng.hpp"
#include "bbsim/simulation.hpp"
#include "bbsim/statistics.hpp"
