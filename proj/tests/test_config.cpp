// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <functional>
#include <string>

#include "bbsim/config.hpp"
#include "bbsim/manifest.hpp"

using namespace bbsim;

namespace {

nlohmann::json minimal_config() {
    return nlohmann::json{
        {"geometry", {{"L1", 2000.0}, {"L2", 2000.0012}, {"V", 100.0}}},
        {"angles", {{"alpha_deg", 45.0}, {"beta_deg", -45.0}}},
        {"trials", 1000},
        {"seed", 7}};
}

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("parse_config fills defaults") {
    ParsedConfig cfg = parse_config(minimal_config());
    CHECK(cfg.sim.geometry.L1 == 2000.0);
    CHECK(cfg.sim.geometry.tau == 0.0);
    CHECK(cfg.sim.geometry.tau_jitter_sd == 0.0);
    CHECK(cfg.sim.geometry.path_jitter_sd == 0.0);
    CHECK(cfg.sim.model == Model::qm);
    CHECK(cfg.sim.tie_tolerance == 0.0);
    CHECK(cfg.sim.nonbefore_policy == NonBeforePolicy::error);
    CHECK(cfg.sim.flag1 == Distinguishability::u);
    CHECK(cfg.sim.flag2 == Distinguishability::u);
    CHECK(cfg.sim.trials == 1000);
    CHECK(cfg.sim.seed == 7);
    // degrees converted once at the boundary
    CHECK(cfg.sim.angles.alpha == degrees_to_radians(45.0));
    CHECK(cfg.sim.angles.alpha + cfg.sim.angles.beta == 0.0);
}

TEST_CASE("parse_config rejects superluminal V naming the bound") {
    auto j = minimal_config();
    j["geometry"]["V"] = 3e8;
    std::string msg = message_of([&] { parse_config(j); });
    CHECK(msg.find("299792458") != std::string::npos);
    CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("parse_config rejects an inconsistent delta_t") {
    auto j = minimal_config();
    j["geometry"]["delta_t"] = 9e-12;  // derived value is 4.0024e-12
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    // the exactly consistent value is accepted
    j["geometry"]["delta_t"] = (2000.0012 - 2000.0) / speed_of_light;
    CHECK_NOTHROW(parse_config(j));
}

TEST_CASE("parse_config lists unknown keys") {
    auto j = minimal_config();
    j["trails"] = 5;  // typo
    j["geometry"]["velocity"] = 1.0;
    std::string msg = message_of([&] { parse_config(j); });
    CHECK((msg.find("trails") != std::string::npos
           || msg.find("velocity") != std::string::npos));
    CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("parse_config validates enums and ranges") {
    auto j = minimal_config();
    j["model"] = "both";
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = minimal_config();
    j["trials"] = 0;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = minimal_config();
    j["nonbefore_policy"] = "ignore";
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = minimal_config();
    j["distinguishability"] = {"u"};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = minimal_config();
    j["distinguishability"] = {"u", "x"};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = minimal_config();
    j["schema_version"] = 99;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("parse_config_text rejects malformed JSON") {
    CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
}

TEST_CASE("config round-trips through serialization bit-exactly") {
    auto j = minimal_config();
    j["model"] = "ad";
    j["distinguishability"] = {"u", "d"};
    ParsedConfig cfg = parse_config(j);
    ParsedConfig again = parse_config(config_to_json(cfg));
    CHECK(again.sim.geometry.L1 == cfg.sim.geometry.L1);
    CHECK(again.sim.geometry.L2 == cfg.sim.geometry.L2);
    CHECK(again.sim.angles.alpha == cfg.sim.angles.alpha);
    CHECK(again.sim.angles.beta == cfg.sim.angles.beta);
    CHECK(again.sim.model == Model::ad);
    CHECK(again.sim.flag2 == Distinguishability::d);
}

TEST_CASE("manifest reproduces the run") {
    ParsedConfig cfg = parse_config(minimal_config());
    CountsTable counts = run_trials(cfg.sim);
    nlohmann::json manifest = make_manifest(cfg, counts, /*include_timestamp=*/false);
    CHECK(manifest["version"] == artifact_version);
    CHECK_FALSE(manifest.contains("timestamp"));
    CHECK(manifest["summary"]["counts"]["n_pp"].get<std::uint64_t>() == counts.n_pp);

    // re-parse the embedded config and re-run: identical counts
    ParsedConfig again = parse_config(manifest["config"]);
    CHECK(run_trials(again.sim) == counts);

    // canonical-comparison mode is byte-stable
    nlohmann::json manifest2 = make_manifest(again, counts, false);
    CHECK(manifest.dump() == manifest2.dump());
}
