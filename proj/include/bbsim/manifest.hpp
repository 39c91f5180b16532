// SPDX-License-Identifier: Apache-2.0
//! \file bbsim/manifest.hpp
//! Run manifest: the fully resolved config plus the run summary, sufficient
//! on its own to reproduce the run bit-exactly.
#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <string>

#include <json.hpp>

#include "bbsim/config.hpp"
#include "bbsim/statistics.hpp"

namespace bbsim {

inline std::string iso8601_utc_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

//! Build the manifest for a finished run. `include_timestamp = false` is the
//! canonical-comparison mode: without the timestamp field two runs of the
//! same config are byte-identical.
inline nlohmann::json make_manifest(const ParsedConfig& cfg,
                                    const CountsTable& counts,
                                    bool include_timestamp = true) {
    nlohmann::json j;
    j["version"] = artifact_version;
    if (include_timestamp) j["timestamp"] = iso8601_utc_now();
    j["seed"] = cfg.sim.seed;
    j["config"] = config_to_json(cfg);

    nlohmann::json counts_json = {{"n_pp", counts.n_pp},
                                  {"n_pm", counts.n_pm},
                                  {"n_mp", counts.n_mp},
                                  {"n_mm", counts.n_mm}};
    nlohmann::json class_json = nlohmann::json::object();
    for (int c1 = 0; c1 < 3; ++c1) {
        for (int c2 = 0; c2 < 3; ++c2) {
            std::uint64_t n = counts.class_counts[3 * c1 + c2];
            if (n == 0) continue;
            std::string key = std::string(to_string(static_cast<ImpactClass>(c1)))
                              + "," + to_string(static_cast<ImpactClass>(c2));
            class_json[key] = n;
        }
    }
    CorrelationEstimate est = estimate_correlation(counts);
    j["summary"] = {{"counts", counts_json},
                    {"class_counts", class_json},
                    {"e_hat", est.e_hat},
                    {"se", est.se},
                    {"n", est.n}};
    return j;
}

}  // namespace bbsim
