// SPDX-License-Identifier: Apache-2.0
// bbsim: Monte Carlo simulator and feasibility planner for the moving
// beam-splitter two-photon experiment.
//
// Subcommands:
//   simulate    run trials, write a JSON run manifest (and optional CSV records)
//   classify    report the zero-jitter impact classification of a geometry
//   feasibility solve or sweep the delta_t < V*L/c^2 bound
//   scan        tabulate closed-form and simulated E over an angle grid
//
// Exit codes: 0 success, 1 usage/config error, 2 physics-infeasible,
// 3 unsupported configuration (non-before/non-before under default policy).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bbsim/bbsim.hpp"

namespace {

// Locale-independent float formatting for CSV output.
std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bbsim::ParsedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw bbsim::ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return bbsim::parse_config_text(ss.str());
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw bbsim::ConfigError("cannot open output file: " + path);
    out << text;
}

struct GridSpec {
    double start, stop, step;
};

GridSpec parse_grid(const std::string& s) {
    GridSpec g{};
    char extra;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf%c", &g.start, &g.stop, &g.step, &extra)
        != 3) {
        throw bbsim::ConfigError("grid spec must be start:stop:step, got " + s);
    }
    if (!(g.step > 0.0) || g.start > g.stop) {
        throw bbsim::ConfigError("grid spec must have step > 0 and start <= stop");
    }
    return g;
}

std::vector<double> expand_grid(const GridSpec& g) {
    std::vector<double> values;
    for (double x = g.start; x <= g.stop + 0.5 * g.step; x += g.step) {
        values.push_back(x);
    }
    return values;
}

int cmd_simulate(const std::string& config_path, const std::string& model_override,
                 std::uint64_t trials_override, std::int64_t seed_override,
                 const std::string& records_path, const std::string& out_path,
                 unsigned workers, bool no_timestamp) {
    bbsim::ParsedConfig cfg = load_config(config_path);
    if (model_override == "qm") cfg.sim.model = bbsim::Model::qm;
    else if (model_override == "ad") cfg.sim.model = bbsim::Model::ad;
    else if (!model_override.empty()) {
        throw bbsim::ConfigError("--model must be qm or ad");
    }
    if (trials_override > 0) cfg.sim.trials = trials_override;
    if (seed_override >= 0) cfg.sim.seed = static_cast<std::uint64_t>(seed_override);

    std::vector<bbsim::TrialRecord> records;
    std::vector<bbsim::TrialRecord>* rec_ptr =
        records_path.empty() ? nullptr : &records;
    bbsim::CountsTable counts = bbsim::run_trials(cfg.sim, workers, rec_ptr);

    if (rec_ptr) {
        std::ostringstream csv;
        csv << "trial,t1,x1,t2,x2,class1,class2,sigma,omega\n";
        for (const auto& r : records) {
            csv << r.index << ',' << fmt_double(r.impact1.t) << ','
                << fmt_double(r.impact1.x) << ',' << fmt_double(r.impact2.t) << ','
                << fmt_double(r.impact2.x) << ','
                << bbsim::to_string(r.exp_class.first) << ','
                << bbsim::to_string(r.exp_class.second) << ',' << r.sigma << ','
                << r.omega << '\n';
        }
        write_text(records_path, csv.str());
    }

    nlohmann::json manifest = bbsim::make_manifest(cfg, counts, !no_timestamp);
    write_text(out_path, manifest.dump(2) + "\n");
    return 0;
}

int cmd_classify(const std::string& config_path) {
    bbsim::ParsedConfig cfg = load_config(config_path);
    auto [ctx1, ctx2] = bbsim::build_impact_contexts(
        cfg.sim.geometry, 0.0, 0.0, cfg.sim.flag1, cfg.sim.flag2);
    bbsim::ExperimentClass cls =
        bbsim::classify_experiment(ctx1, ctx2, cfg.sim.tie_tolerance);
    double d12 = bbsim::time_difference_in_frame(ctx1.event, ctx2.event, ctx1.frame);
    double d21 = bbsim::time_difference_in_frame(ctx2.event, ctx1.event, ctx2.frame);
    std::cout << "class = (" << bbsim::to_string(cls.first) << ", "
              << bbsim::to_string(cls.second) << ")\n";
    std::cout << "T1 - T2 in BS1 frame = " << fmt_double(d12) << " s\n";
    std::cout << "T2 - T1 in BS2 frame = " << fmt_double(d21) << " s\n";
    double dt = ctx2.event.t - ctx1.event.t;
    double dx = ctx2.event.x - ctx1.event.x;
    if (dt > 0.0 && dx > 0.0) {
        double v_threshold =
            bbsim::speed_of_light * bbsim::speed_of_light * dt / dx;
        std::cout << "threshold velocity for before-before = "
                  << fmt_double(v_threshold) << " m/s\n";
    }
    if (cls.first == bbsim::ImpactClass::non_before
        && cls.second == bbsim::ImpactClass::non_before) {
        std::cout << "warning: the AD model is unspecified for "
                     "(NonBefore, NonBefore); simulate --model ad will fail "
                     "under the default nonbefore_policy\n";
    }
    return 0;
}

int cmd_feasibility(std::optional<double> velocity, std::optional<double> distance,
                    std::optional<double> delta_t, double tau,
                    const std::string& sweep_spec, const std::string& out_path) {
    if (!sweep_spec.empty()) {
        auto colon = sweep_spec.find(':');
        if (colon == std::string::npos) {
            throw bbsim::ConfigError("--sweep must be axis:start:stop:step");
        }
        std::string axis_name = sweep_spec.substr(0, colon);
        GridSpec g = parse_grid(sweep_spec.substr(colon + 1));
        bbsim::SweepAxis axis;
        if (axis_name == "V") axis = bbsim::SweepAxis::velocity;
        else if (axis_name == "L") axis = bbsim::SweepAxis::distance;
        else if (axis_name == "delta_t") axis = bbsim::SweepAxis::delta_t;
        else throw bbsim::ConfigError("sweep axis must be V, L, or delta_t");

        bbsim::SweepFixed fixed;
        fixed.velocity = velocity.value_or(0.0);
        fixed.total_distance = distance.value_or(0.0);
        fixed.delta_t = delta_t.value_or(0.0);
        fixed.tau = tau;
        auto rows = bbsim::sweep(axis, g.start, g.stop, g.step, fixed);
        std::ostringstream csv;
        csv << "input,value,feasible\n";
        for (const auto& row : rows) {
            csv << fmt_double(row.input) << ',';
            if (row.error) csv << "error";
            else csv << fmt_double(row.value);
            csv << ',' << (row.feasible ? 1 : 0) << '\n';
        }
        write_text(out_path, csv.str());
        return 0;
    }

    if (!distance) throw bbsim::ConfigError("--L is required");
    bool have_v = velocity.has_value();
    bool have_dt = delta_t.has_value();
    if (have_v == have_dt) {
        throw bbsim::ConfigError(
            "exactly one of --V and --delta-t must be left unknown");
    }
    if (have_v) {
        double bound = bbsim::max_delay(*velocity, *distance);
        std::cout << "delta_t_max = " << fmt_double(bound) << " s\n";
    } else {
        double v_min = bbsim::required_velocity(*delta_t, tau, *distance);
        std::cout << "V_min = " << fmt_double(v_min) << " m/s\n";
    }
    return 0;
}

int cmd_scan(const std::string& config_path, const std::string& alpha_spec,
             const std::string& beta_spec, const std::string& out_path,
             unsigned workers) {
    bbsim::ParsedConfig cfg = load_config(config_path);
    std::vector<double> alphas = expand_grid(parse_grid(alpha_spec));
    if (alphas.empty()) throw bbsim::ConfigError("empty angle grid");

    // Grid points: cross product when --beta-grid is given, else beta = -alpha.
    std::vector<std::pair<double, double>> points;
    if (beta_spec.empty()) {
        for (double a : alphas) points.emplace_back(a, -a);
    } else {
        std::vector<double> betas = expand_grid(parse_grid(beta_spec));
        for (double a : alphas) {
            for (double b : betas) points.emplace_back(a, b);
        }
    }

    // AD closed form depends on the zero-jitter class of this geometry.
    auto [ctx1, ctx2] = bbsim::build_impact_contexts(
        cfg.sim.geometry, 0.0, 0.0, cfg.sim.flag1, cfg.sim.flag2);
    bbsim::ExperimentClass cls =
        bbsim::classify_experiment(ctx1, ctx2, cfg.sim.tie_tolerance);

    std::ostringstream csv;
    csv << "alpha,beta,model,E_closed,E_hat,SE,N\n";
    std::uint64_t point_index = 0;
    for (auto [a_deg, b_deg] : points) {
        bbsim::AngleSettings angles{bbsim::degrees_to_radians(a_deg),
                                    bbsim::degrees_to_radians(b_deg)};
        for (bbsim::Model model : {bbsim::Model::qm, bbsim::Model::ad}) {
            double e_closed =
                model == bbsim::Model::qm
                    ? bbsim::qm_joint_distribution(angles).correlation()
                    : bbsim::ad_joint_distribution(cls, angles,
                                                   cfg.sim.nonbefore_policy)
                          .correlation();
            bbsim::SimulationConfig run = cfg.sim;
            run.angles = angles;
            run.model = model;
            // Decorrelate grid points: each gets its own derived seed.
            run.seed = bbsim::detail::splitmix64_finalize(cfg.sim.seed ^ point_index);
            bbsim::CountsTable counts = bbsim::run_trials(run, workers);
            bbsim::CorrelationEstimate est = bbsim::estimate_correlation(counts);
            csv << fmt_double(a_deg) << ',' << fmt_double(b_deg) << ','
                << (model == bbsim::Model::qm ? "qm" : "ad") << ','
                << fmt_double(e_closed) << ',' << fmt_double(est.e_hat) << ','
                << fmt_double(est.se) << ',' << est.n << '\n';
            ++point_index;
        }
    }
    write_text(out_path, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo simulator and feasibility planner for the moving "
                 "beam-splitter two-photon experiment"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run trials and emit a run manifest");
    std::string sim_config, sim_model, sim_records, sim_out;
    std::uint64_t sim_trials = 0;
    std::int64_t sim_seed = -1;
    unsigned sim_workers = 1;
    bool sim_no_ts = false;
    sim->add_option("config", sim_config, "JSON config file")->required();
    sim->add_option("--model", sim_model, "Override model: qm or ad");
    sim->add_option("--trials", sim_trials, "Override trial count");
    sim->add_option("--seed", sim_seed, "Override RNG seed (default: from config)");
    sim->add_option("--records", sim_records, "Write per-trial CSV to this path");
    sim->add_option("--out", sim_out, "Manifest path (default: stdout)");
    sim->add_option("--workers", sim_workers,
                    "Worker threads; counts are worker-count invariant (default 1)");
    sim->add_flag("--no-timestamp", sim_no_ts,
                  "Omit the timestamp for byte-exact manifest comparison");

    // classify
    auto* cls = app.add_subcommand(
        "classify", "Report the zero-jitter impact classification");
    std::string cls_config;
    cls->add_option("config", cls_config, "JSON config file")->required();

    // feasibility
    auto* feas = app.add_subcommand(
        "feasibility", "Solve or sweep the delta_t < V*L/c^2 bound");
    std::optional<double> feas_v, feas_l, feas_dt;
    double feas_tau = 0.0;
    std::string feas_sweep, feas_out;
    feas->add_option("--V", feas_v, "Splitter velocity, m/s");
    feas->add_option("--L", feas_l, "Total distance L1+L2, m");
    feas->add_option("--delta-t", feas_dt, "Path delay, s");
    feas->add_option("--tau", feas_tau, "Emission delay, s (default 0)");
    feas->add_option("--sweep", feas_sweep,
                     "Sweep one axis: {V|L|delta_t}:start:stop:step, CSV output");
    feas->add_option("--out", feas_out, "CSV path (default: stdout)");

    // scan
    auto* scan = app.add_subcommand(
        "scan", "Closed-form and simulated E over an angle grid (degrees)");
    std::string scan_config, scan_alpha, scan_beta, scan_out;
    unsigned scan_workers = 1;
    scan->add_option("config", scan_config, "JSON config file")->required();
    scan->add_option("--angle-grid", scan_alpha,
                     "Alpha grid start:stop:step in degrees")
        ->required();
    scan->add_option("--beta-grid", scan_beta,
                     "Beta grid start:stop:step in degrees (default: beta = -alpha)");
    scan->add_option("--out", scan_out, "CSV path (default: stdout)");
    scan->add_option("--workers", scan_workers, "Worker threads (default 1)");

    try {
        app.parse(argc, argv);
        if (*sim) {
            return cmd_simulate(sim_config, sim_model, sim_trials, sim_seed,
                                sim_records, sim_out, sim_workers, sim_no_ts);
        }
        if (*cls) return cmd_classify(cls_config);
        if (*feas) {
            return cmd_feasibility(feas_v, feas_l, feas_dt, feas_tau, feas_sweep,
                                   feas_out);
        }
        if (*scan) {
            return cmd_scan(scan_config, scan_alpha, scan_beta, scan_out,
                            scan_workers);
        }
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const bbsim::InfeasibleConfigurationError& e) {
        std::cerr << "error: infeasible-configuration: " << e.what() << '\n';
        return 2;
    } catch (const bbsim::UnsupportedConfigurationError& e) {
        std::cerr << "error: unsupported-configuration: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: config: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
