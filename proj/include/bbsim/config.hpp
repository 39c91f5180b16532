// SPDX-License-Identifier: Apache-2.0
//! \file bbsim/config.hpp
//! JSON run-configuration parsing with strict schema checking.
//!
//! Schema (version 1):
//! {
//!   "schema_version": 1,                 // optional, must be 1 if present
//!   "geometry": {
//!     "L1": m, "L2": m, "V": m/s,        // required
//!     "tau": s,                          // default 0
//!     "delta_t": s,                      // optional, must equal (L2-L1)/c
//!     "tau_jitter_sd": s,                // default 0
//!     "path_jitter_sd": m                // default 0
//!   },
//!   "angles": {"alpha_deg": deg, "beta_deg": deg},   // required
//!   "trials": N,                         // required
//!   "seed": integer,                     // required
//!   "model": "qm" | "ad",                // default "qm"
//!   "tie_tolerance": s,                  // default 0
//!   "nonbefore_policy": "error" | "treat-as-qm" | "treat-as-local",
//!   "distinguishability": ["u"|"d", "u"|"d"]         // default ["u","u"]
//! }
//!
//! Unknown keys are hard errors: a typo in a physics parameter must not be
//! silently ignored.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "bbsim/errors.hpp"
#include "bbsim/simulation.hpp"

namespace bbsim {

inline constexpr const char* artifact_version = "0.1.0";
inline constexpr int config_schema_version = 1;

inline double degrees_to_radians(double deg) { return deg * (M_PI / 180.0); }

//! A validated SimulationConfig plus the angle values as authored (degrees),
//! so a manifest round-trips to bit-identical internal angles.
struct ParsedConfig {
    SimulationConfig sim;
    double alpha_deg{0.0};
    double beta_deg{0.0};
};

namespace detail {

inline void check_keys(const nlohmann::json& obj, const std::string& where,
                       const std::vector<std::string>& allowed) {
    std::string unknown;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const auto& k : allowed) {
            if (it.key() == k) { ok = true; break; }
        }
        if (!ok) unknown += (unknown.empty() ? "" : ", ") + it.key();
    }
    if (!unknown.empty()) {
        throw ConfigError("unknown key(s) in " + where + ": " + unknown);
    }
}

inline double require_number(const nlohmann::json& obj, const std::string& where,
                             const std::string& key) {
    if (!obj.contains(key)) {
        throw ConfigError("missing required key " + where + "." + key);
    }
    if (!obj[key].is_number()) {
        throw ConfigError(where + "." + key + " must be a number");
    }
    return obj[key].get<double>();
}

inline double optional_number(const nlohmann::json& obj, const std::string& key,
                              double fallback) {
    if (!obj.contains(key)) return fallback;
    return obj[key].get<double>();
}

}  // namespace detail

inline ParsedConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    detail::check_keys(j, "config",
                       {"schema_version", "geometry", "angles", "trials", "seed",
                        "model", "tie_tolerance", "nonbefore_policy",
                        "distinguishability"});
    if (j.contains("schema_version")
        && j["schema_version"].get<int>() != config_schema_version) {
        throw ConfigError("unsupported schema_version");
    }
    if (!j.contains("geometry")) throw ConfigError("missing required key geometry");
    if (!j.contains("angles")) throw ConfigError("missing required key angles");

    const auto& g = j["geometry"];
    detail::check_keys(g, "geometry",
                       {"L1", "L2", "V", "tau", "delta_t", "tau_jitter_sd",
                        "path_jitter_sd"});
    ParsedConfig cfg;
    cfg.sim.geometry.L1 = detail::require_number(g, "geometry", "L1");
    cfg.sim.geometry.L2 = detail::require_number(g, "geometry", "L2");
    cfg.sim.geometry.V = detail::require_number(g, "geometry", "V");
    cfg.sim.geometry.tau = detail::optional_number(g, "tau", 0.0);
    cfg.sim.geometry.tau_jitter_sd = detail::optional_number(g, "tau_jitter_sd", 0.0);
    cfg.sim.geometry.path_jitter_sd = detail::optional_number(g, "path_jitter_sd", 0.0);
    if (g.contains("delta_t")) {
        double declared = g["delta_t"].get<double>();
        double derived = cfg.sim.geometry.delta_t();
        double scale = std::max({std::abs(declared), std::abs(derived), 1e-300});
        if (std::abs(declared - derived) > 1e-15 * scale) {
            throw ConfigError(
                "geometry.delta_t is derived as (L2 - L1)/c = "
                + std::to_string(derived) + " s and cannot be set to "
                + std::to_string(declared) + " s");
        }
    }

    const auto& a = j["angles"];
    detail::check_keys(a, "angles", {"alpha_deg", "beta_deg"});
    cfg.alpha_deg = detail::require_number(a, "angles", "alpha_deg");
    cfg.beta_deg = detail::require_number(a, "angles", "beta_deg");
    cfg.sim.angles = {degrees_to_radians(cfg.alpha_deg),
                      degrees_to_radians(cfg.beta_deg)};
    if (!std::isfinite(cfg.sim.angles.alpha) || !std::isfinite(cfg.sim.angles.beta)) {
        throw ConfigError("angles must be finite");
    }

    if (!j.contains("trials")) throw ConfigError("missing required key trials");
    if (!j.contains("seed")) throw ConfigError("missing required key seed");
    if (!j["trials"].is_number_integer() || j["trials"].get<std::int64_t>() < 1) {
        throw ConfigError("trials must be an integer >= 1");
    }
    cfg.sim.trials = j["trials"].get<std::uint64_t>();
    cfg.sim.seed = j["seed"].get<std::uint64_t>();

    std::string model = j.value("model", "qm");
    if (model == "qm") {
        cfg.sim.model = Model::qm;
    } else if (model == "ad") {
        cfg.sim.model = Model::ad;
    } else {
        throw ConfigError("model must be \"qm\" or \"ad\", got \"" + model + "\"");
    }

    cfg.sim.tie_tolerance = detail::optional_number(j, "tie_tolerance", 0.0);
    if (cfg.sim.tie_tolerance < 0.0) {
        throw ConfigError("tie_tolerance must be >= 0");
    }

    std::string policy = j.value("nonbefore_policy", "error");
    if (policy == "error") {
        cfg.sim.nonbefore_policy = NonBeforePolicy::error;
    } else if (policy == "treat-as-qm") {
        cfg.sim.nonbefore_policy = NonBeforePolicy::treat_as_qm;
    } else if (policy == "treat-as-local") {
        cfg.sim.nonbefore_policy = NonBeforePolicy::treat_as_local;
    } else {
        throw ConfigError("nonbefore_policy must be one of error, treat-as-qm, "
                          "treat-as-local");
    }

    if (j.contains("distinguishability")) {
        const auto& d = j["distinguishability"];
        if (!d.is_array() || d.size() != 2) {
            throw ConfigError("distinguishability must be a two-element array");
        }
        auto parse_flag = [](const std::string& s) {
            if (s == "u") return Distinguishability::u;
            if (s == "d") return Distinguishability::d;
            throw ConfigError("distinguishability flags must be \"u\" or \"d\"");
        };
        cfg.sim.flag1 = parse_flag(d[0].get<std::string>());
        cfg.sim.flag2 = parse_flag(d[1].get<std::string>());
    }

    try {
        cfg.sim.validate();
    } catch (const InvalidVelocityError& e) {
        throw ConfigError(std::string("geometry.V: ") + e.what());
    } catch (const InvalidInputError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

inline ParsedConfig parse_config_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

//! Serialize with every default expanded, so the emitted document alone
//! reproduces the run.
inline nlohmann::json config_to_json(const ParsedConfig& cfg) {
    const auto& s = cfg.sim;
    nlohmann::json j;
    j["schema_version"] = config_schema_version;
    j["geometry"] = {{"L1", s.geometry.L1},
                     {"L2", s.geometry.L2},
                     {"V", s.geometry.V},
                     {"tau", s.geometry.tau},
                     {"delta_t", s.geometry.delta_t()},
                     {"tau_jitter_sd", s.geometry.tau_jitter_sd},
                     {"path_jitter_sd", s.geometry.path_jitter_sd}};
    j["angles"] = {{"alpha_deg", cfg.alpha_deg}, {"beta_deg", cfg.beta_deg}};
    j["trials"] = s.trials;
    j["seed"] = s.seed;
    j["model"] = s.model == Model::qm ? "qm" : "ad";
    j["tie_tolerance"] = s.tie_tolerance;
    switch (s.nonbefore_policy) {
        case NonBeforePolicy::error: j["nonbefore_policy"] = "error"; break;
        case NonBeforePolicy::treat_as_qm: j["nonbefore_policy"] = "treat-as-qm"; break;
        case NonBeforePolicy::treat_as_local:
            j["nonbefore_policy"] = "treat-as-local";
            break;
    }
    auto flag = [](Distinguishability f) {
        return f == Distinguishability::u ? "u" : "d";
    };
    j["distinguishability"] = {flag(s.flag1), flag(s.flag2)};
    return j;
}

}  // namespace bbsim
