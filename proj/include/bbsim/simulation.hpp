// SPDX-License-Identifier: Apache-2.0
//! \file bbsim/simulation.hpp
//! Per-trial impact generation from the experiment geometry, classification,
//! model selection, and seeded outcome sampling.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bbsim/correlations.hpp"
#include "bbsim/errors.hpp"
#include "bbsim/relativity.hpp"
#include "bbsim/rng.hpp"

namespace bbsim {

//! Geometry of the two-arm setup: source at the origin, BS1 at rest at -L1,
//! BS2 at +L2 moving with velocity V at impact time. Arrival times are
//! optical path over c; fiber index is absorbed into the path lengths.
struct ExperimentGeometry {
    double L1{0.0};   //!< source -> BS1 optical path, m
    double L2{0.0};   //!< source -> BS2 optical path, m
    double V{0.0};    //!< BS2 velocity at impact, m/s (positive = away from source)
    double tau{0.0};  //!< emission delay between the two photons, s
    double tau_jitter_sd{0.0};   //!< per-trial Gaussian sd on tau, s
    double path_jitter_sd{0.0};  //!< per-trial Gaussian sd on L2 - L1, m

    //! Path delay, derived: (L2 - L1) / c.
    double delta_t() const { return (L2 - L1) / speed_of_light; }

    void validate() const {
        if (!(L1 > 0.0) || !(L2 > 0.0) || !std::isfinite(L1) || !std::isfinite(L2)) {
            throw InvalidInputError("ExperimentGeometry: L1 and L2 must be positive and finite");
        }
        if (!std::isfinite(V) || std::abs(V) >= speed_of_light) {
            throw InvalidVelocityError(
                "ExperimentGeometry: |V| must be < c = 299792458 m/s");
        }
        if (!std::isfinite(tau)) {
            throw InvalidInputError("ExperimentGeometry: tau must be finite");
        }
        if (tau_jitter_sd < 0.0 || path_jitter_sd < 0.0) {
            throw InvalidInputError("ExperimentGeometry: jitter SDs must be >= 0");
        }
    }
};

enum class Model { qm, ad };

struct SimulationConfig {
    ExperimentGeometry geometry;
    AngleSettings angles;  //!< radians
    Model model{Model::qm};
    std::uint64_t trials{1};
    std::uint64_t seed{0};
    double tie_tolerance{0.0};
    NonBeforePolicy nonbefore_policy{NonBeforePolicy::error};
    Distinguishability flag1{Distinguishability::u};
    Distinguishability flag2{Distinguishability::u};

    void validate() const {
        geometry.validate();
        if (trials < 1) throw InvalidInputError("SimulationConfig: trials must be >= 1");
        if (tie_tolerance < 0.0) {
            throw InvalidInputError("SimulationConfig: tie_tolerance must be >= 0");
        }
    }
};

struct TrialRecord {
    std::uint64_t index{0};
    SpacetimeEvent impact1;
    SpacetimeEvent impact2;
    ExperimentClass exp_class{ImpactClass::non_before, ImpactClass::non_before};
    int sigma{0};
    int omega{0};
};

inline std::size_t class_index(ImpactClass c) {
    return static_cast<std::size_t>(c);
}

//! Outcome counts plus a per-class breakdown over the 9 possible
//! (ImpactClass, ImpactClass) pairs, indexed 3*class1 + class2.
struct CountsTable {
    std::uint64_t n_pp{0};
    std::uint64_t n_pm{0};
    std::uint64_t n_mp{0};
    std::uint64_t n_mm{0};
    std::array<std::uint64_t, 9> class_counts{};

    std::uint64_t total() const { return n_pp + n_pm + n_mp + n_mm; }

    std::uint64_t class_count(const ExperimentClass& c) const {
        return class_counts[3 * class_index(c.first) + class_index(c.second)];
    }

    CountsTable& operator+=(const CountsTable& o) {
        n_pp += o.n_pp;
        n_pm += o.n_pm;
        n_mp += o.n_mp;
        n_mm += o.n_mm;
        for (std::size_t i = 0; i < class_counts.size(); ++i) {
            class_counts[i] += o.class_counts[i];
        }
        return *this;
    }

    bool operator==(const CountsTable&) const = default;
};

//! Build both impact contexts for one trial. tau_jitter (seconds) perturbs
//! the emission delay, path_jitter (meters) perturbs L2.
inline std::pair<ImpactContext, ImpactContext> build_impact_contexts(
    const ExperimentGeometry& geo, double tau_jitter, double path_jitter,
    Distinguishability flag1 = Distinguishability::u,
    Distinguishability flag2 = Distinguishability::u) {
    geo.validate();
    double l2 = geo.L2 + path_jitter;
    if (!(l2 > 0.0)) {
        throw DegenerateGeometryError(
            "build_impact_contexts: jittered L2 <= 0 (path jitter "
            + std::to_string(path_jitter) + " m)");
    }
    // BS1 is at rest when photon 1 arrives.
    ImpactContext ctx1{SpacetimeEvent{geo.L1 / speed_of_light, -geo.L1},
                       FrameVelocity::from_velocity(0.0), flag1};
    double tau = geo.tau + tau_jitter;
    ImpactContext ctx2{SpacetimeEvent{tau + l2 / speed_of_light, geo.L2},
                       FrameVelocity::from_velocity(geo.V), flag2};
    return {ctx1, ctx2};
}

namespace detail {

//! Inverse-transform draw from the 4-entry table, fixed outcome ordering
//! (++, +-, -+, --).
inline std::pair<int, int> sample_outcome(const JointDistribution& d, double u) {
    if (u < d.p_pp) return {+1, +1};
    if (u < d.p_pp + d.p_pm) return {+1, -1};
    if (u < d.p_pp + d.p_pm + d.p_mp) return {-1, +1};
    return {-1, -1};
}

struct TrialResult {
    ExperimentClass exp_class;
    SpacetimeEvent impact1;
    SpacetimeEvent impact2;
    int sigma;
    int omega;
};

//! Which closed form AD uses for a class pair; Model::qm means the QM
//! distribution, Model::ad the local one.
inline Model ad_model_route(const ExperimentClass& cls, NonBeforePolicy policy) {
    const ImpactClass c1 = cls.first;
    const ImpactClass c2 = cls.second;
    if (c1 == ImpactClass::distinguishable || c2 == ImpactClass::distinguishable
        || (c1 == ImpactClass::before && c2 == ImpactClass::before)) {
        return Model::ad;
    }
    if (c1 == ImpactClass::non_before && c2 == ImpactClass::non_before) {
        switch (policy) {
            case NonBeforePolicy::treat_as_qm: return Model::qm;
            case NonBeforePolicy::treat_as_local: return Model::ad;
            case NonBeforePolicy::error: break;
        }
        throw UnsupportedConfigurationError(
            "run_trials: class (NonBefore, NonBefore) has no AD prediction");
    }
    return Model::qm;
}

//! One trial; pure function of (config, index).
inline TrialResult run_one_trial(const SimulationConfig& cfg,
                                 const JointDistribution& qm_dist,
                                 const JointDistribution& local_dist,
                                 std::uint64_t index) {
    TrialRng rng(cfg.seed, index);
    auto [g_tau, g_path] = rng.next_gaussian_pair();
    auto [ctx1, ctx2] = build_impact_contexts(
        cfg.geometry, g_tau * cfg.geometry.tau_jitter_sd,
        g_path * cfg.geometry.path_jitter_sd, cfg.flag1, cfg.flag2);
    ExperimentClass cls = classify_experiment(ctx1, ctx2, cfg.tie_tolerance);

    const JointDistribution* dist = nullptr;
    if (cfg.model == Model::qm) {
        // QM ignores timing: local only when a d flag breaks indistinguishability.
        bool any_d = cfg.flag1 == Distinguishability::d
                     || cfg.flag2 == Distinguishability::d;
        dist = any_d ? &local_dist : &qm_dist;
    } else {
        switch (ad_model_route(cls, cfg.nonbefore_policy)) {
            case Model::qm: dist = &qm_dist; break;
            case Model::ad: dist = &local_dist; break;
        }
    }
    auto [sigma, omega] = sample_outcome(*dist, rng.next_uniform());
    return {cls, ctx1.event, ctx2.event, sigma, omega};
}

}  // namespace detail

//! Run all trials. Trials are partitioned into `workers` contiguous chunks;
//! because each trial's randomness depends only on (seed, index) and the
//! counts reduction is a sum, the result is identical for any worker count.
//! When `records` is non-null, per-trial records are appended in trial-index
//! order.
inline CountsTable run_trials(const SimulationConfig& cfg, unsigned workers = 1,
                              std::vector<TrialRecord>* records = nullptr) {
    cfg.validate();
    if (workers < 1) workers = 1;
    JointDistribution qm_dist = qm_joint_distribution(cfg.angles);
    JointDistribution local_dist = local_joint_distribution(cfg.angles);

    auto run_range = [&](std::uint64_t begin, std::uint64_t end,
                         CountsTable& counts, std::vector<TrialRecord>* recs,
                         std::exception_ptr& err) {
        try {
            for (std::uint64_t i = begin; i < end; ++i) {
                detail::TrialResult r;
                try {
                    r = detail::run_one_trial(cfg, qm_dist, local_dist, i);
                } catch (const UnsupportedConfigurationError& e) {
                    throw UnsupportedConfigurationError(
                        "trial " + std::to_string(i) + ": " + e.what());
                } catch (const DegenerateGeometryError& e) {
                    throw DegenerateGeometryError(
                        "trial " + std::to_string(i) + ": " + e.what());
                }
                if (r.sigma > 0) {
                    (r.omega > 0 ? counts.n_pp : counts.n_pm)++;
                } else {
                    (r.omega > 0 ? counts.n_mp : counts.n_mm)++;
                }
                counts.class_counts[3 * class_index(r.exp_class.first)
                                    + class_index(r.exp_class.second)]++;
                if (recs) {
                    recs->push_back({i, r.impact1, r.impact2, r.exp_class,
                                     r.sigma, r.omega});
                }
            }
        } catch (...) {
            err = std::current_exception();
        }
    };

    std::uint64_t n = cfg.trials;
    if (workers == 1) {
        CountsTable counts;
        std::exception_ptr err;
        run_range(0, n, counts, records, err);
        if (err) std::rethrow_exception(err);
        return counts;
    }

    std::vector<CountsTable> partials(workers);
    std::vector<std::vector<TrialRecord>> partial_recs(records ? workers : 0);
    std::vector<std::exception_ptr> errs(workers);
    std::vector<std::thread> threads;
    std::uint64_t chunk = n / workers;
    std::uint64_t rem = n % workers;
    std::uint64_t begin = 0;
    for (unsigned w = 0; w < workers; ++w) {
        std::uint64_t end = begin + chunk + (w < rem ? 1 : 0);
        threads.emplace_back(run_range, begin, end, std::ref(partials[w]),
                             records ? &partial_recs[w] : nullptr,
                             std::ref(errs[w]));
        begin = end;
    }
    for (auto& t : threads) t.join();
    for (auto& err : errs) {
        if (err) std::rethrow_exception(err);
    }
    CountsTable counts;
    for (unsigned w = 0; w < workers; ++w) {
        counts += partials[w];
        if (records) {
            records->insert(records->end(), partial_recs[w].begin(),
                            partial_recs[w].end());
        }
    }
    return counts;
}

}  // namespace bbsim
