#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "frontlab/run_config.hpp"

namespace fs = std::filesystem;
using namespace frontlab;

namespace {

struct Common {
    std::string config_path;
    std::string scenario;
    std::string out_override;
    double horizon_override = -1.0;

    RunConfig load() const {
        RunConfig cfg;
        if (!config_path.empty())
            cfg = load_config(config_path);
        else if (!scenario.empty())
            cfg = scenario_config(scenario);
        else
            throw ConfigError("pass --config FILE or --scenario NAME");
        if (horizon_override > 0.0) cfg.horizon = horizon_override;
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (const char* root = std::getenv("FRONTLAB_OUT"))
            cfg.out_dir = (fs::path(root) / cfg.out_dir).string();
        fs::create_directories(cfg.out_dir);
        return cfg;
    }
};

void add_common(CLI::App* cmd, Common& common) {
    cmd->add_option("--config", common.config_path, "JSON config file");
    cmd->add_option("--scenario", common.scenario, "built-in scenario name");
    cmd->add_option("--out", common.out_override, "output directory");
    cmd->add_option("--horizon", common.horizon_override, "override run horizon");
}

WaveProfile floor_wave(const ReactionEnv& env, double tol = 1e-8) {
    return solve_ignition_wave([&env](double u) { return env.f_min(u); }, env.theta(), tol);
}

WaveProfile ceil_wave(const ReactionEnv& env, double tol = 1e-8) {
    return solve_ignition_wave([&env](double u) { return env.f_max(u); }, env.theta(), tol);
}

double pick_kappa(const RunConfig& cfg, double c_min) {
    return cfg.kappa > 0.0 ? cfg.kappa : 0.25 * c_min * c_min;
}

RunOptions make_run_options(const RunConfig& cfg, double kappa) {
    RunOptions opt;
    opt.observe_every = cfg.observe_every;
    opt.snapshot_every = cfg.snapshot_every;
    opt.shift_tol = cfg.shift_tol;
    opt.tracker = cfg.make_tracker(kappa);
    return opt;
}

int cmd_wave(const Common& common, const std::string& kind, double delta_B) {
    const RunConfig cfg = common.load();
    const ReactionEnv env = cfg.make_env();
    const fs::path out(cfg.out_dir);
    if (kind == "ignition" || kind == "both") {
        const WaveProfile w = floor_wave(env);
        write_profile_csv(w, (out / "profile_ignition.csv").string());
        write_speed_json(w, (out / "speed_ignition.json").string());
        std::cout << "ignition wave speed " << w.speed << " residual " << w.residual_max << "\n";
    }
    if (kind == "bistable" || kind == "both") {
        const BistableCompanion fB(env, delta_B);
        const WaveProfile w = solve_bistable_wave(fB);
        write_profile_csv(w, (out / "profile_bistable.csv").string());
        write_speed_json(w, (out / "speed_bistable.json").string());
        std::cout << "bistable wave speed " << w.speed << " residual " << w.residual_max << "\n";
    }
    return 0;
}

int cmd_evolve(const Common& common) {
    const RunConfig cfg = common.load();
    const ReactionEnv env = cfg.make_env();
    const WaveProfile phi = floor_wave(env);
    const StepperConfig stepper = cfg.make_stepper(env);
    const RunRecord run = run_approximating(env, phi, 0.0, cfg.horizon, stepper,
                                            make_run_options(cfg, pick_kappa(cfg, phi.speed)),
                                            phi.speed);
    const fs::path out(cfg.out_dir);
    write_run_record(run, (out / "run_record.json").string());
    write_trace_csv(run.trace, (out / "trace.csv").string());
    write_snapshot_csv(run.snapshots.back(), (out / "final_snapshot.csv").string());
    std::cout << "evolved to t = " << run.t_end << ", snapshots " << run.snapshots.size() << "\n";
    return 0;
}

int cmd_front(const Common& common) {
    const RunConfig cfg = common.load();
    const ReactionEnv env = cfg.make_env();
    const WaveProfile phi = floor_wave(env);
    const StepperConfig stepper = cfg.make_stepper(env);
    const fs::path out(cfg.out_dir);
    try {
        const FrontEstimate est =
            build_front(env, phi, cfg.s_list, cfg.horizon, stepper,
                        make_run_options(cfg, pick_kappa(cfg, phi.speed)), phi.speed,
                        cfg.cauchy_tol);
        nlohmann::json root{{"format_version", 1},
                            {"s_list", est.s_list},
                            {"x_s", est.x_s},
                            {"gaps", est.gaps},
                            {"speed_estimate", est.speed_estimate},
                            {"interface_t", est.deepest.trace.times()},
                            {"interface_xi", est.deepest.trace.xi_series(env.theta())}};
        std::ofstream fe((out / "front_estimate.json").string());
        fe << root.dump(2) << "\n";
        write_run_record(est.deepest, (out / "run_record.json").string());
        write_trace_csv(est.deepest.trace, (out / "trace.csv").string());
        int k = 0;
        for (const auto& snap : est.deepest.snapshots) {
            if (k++ % 20 == 0)
                write_snapshot_csv(snap,
                                   (out / ("snapshot_" + std::to_string(k - 1) + ".csv")).string());
        }
        std::cout << "front built; final gap " << est.gaps.back() << ", speed "
                  << est.speed_estimate << "\n";
    } catch (const NonCauchy& e) {
        std::cerr << "front construction failed: " << e.what() << "\ngaps:";
        for (double g : e.gaps) std::cerr << " " << g;
        std::cerr << "\n";
        return 1;
    }
    return 0;
}

int cmd_periodic(const Common& common) {
    const RunConfig cfg = common.load();
    const ReactionEnv env = cfg.make_env();
    const WaveProfile phi = floor_wave(env);
    const WaveProfile phi_hi = ceil_wave(env);
    const StepperConfig stepper = cfg.make_stepper(env);
    const fs::path out(cfg.out_dir);
    const PeriodicWave wave = periodic_wave(env, phi, stepper, cfg.per_tol, cfg.burn_in);
    nlohmann::json root{{"format_version", 1},
                        {"period", wave.period},
                        {"c_T", wave.c_T},
                        {"c_min", phi.speed},
                        {"c_max", phi_hi.speed},
                        {"residuals", wave.residuals},
                        {"period_displacements", wave.period_displacements},
                        {"profile_equation_residual", wave.profile_equation_residual},
                        {"t_converged", wave.t_converged}};
    std::ofstream pj((out / "periodic_wave.json").string());
    pj << root.dump(2) << "\n";
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < wave.offsets.size(); ++i)
        rows.push_back({wave.offsets[i], wave.profile[i]});
    write_csv((out / "periodic_profile.csv").string(), {"x", "psi"}, rows);
    std::cout << "periodic wave speed " << wave.c_T << " residual "
              << wave.profile_equation_residual << "\n";
    return 0;
}

int cmd_ensemble(const Common& common) {
    const RunConfig cfg = common.load();
    const ReactionEnv env = cfg.make_env();
    const WaveProfile phi = floor_wave(env);
    const WaveProfile phi_hi = ceil_wave(env);
    const StepperConfig stepper = cfg.make_stepper(env);
    const fs::path out(cfg.out_dir);

    EnsembleConfig ens;
    ens.horizon = cfg.horizon;
    ens.burn_in = cfg.burn_in;
    ens.checkpoints = cfg.checkpoints;
    ens.workers = cfg.workers;
    std::vector<std::uint64_t> seeds = cfg.seeds;
    if (seeds.empty())
        for (std::uint64_t s = 1; s <= 8; ++s) seeds.push_back(s);

    const std::string jsonl = (out / "ensemble.jsonl").string();
    std::vector<Realization> prior;
    if (fs::exists(jsonl)) prior = read_checkpoints_jsonl(jsonl, ens.checkpoints);

    const EnsembleReport report =
        run_ensemble(env, phi, seeds, stepper, ens, phi.speed, phi_hi.speed, &prior);
    write_checkpoints_jsonl(report, jsonl);
    write_ensemble_summary(report, (out / "ensemble_summary.json").string());

    std::vector<std::vector<double>> rows;
    std::vector<double> mean(report.offsets.size(), 0.0);
    int n_ok = 0;
    for (const auto& r : report.realizations) {
        if (r.failed || r.psi_star.empty()) continue;
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += r.psi_star[i];
        ++n_ok;
    }
    const auto& first = report.realizations.front();
    for (std::size_t i = 0; i < report.offsets.size(); ++i)
        rows.push_back({report.offsets[i], n_ok > 0 ? mean[i] / n_ok : 0.0,
                        first.psi_star.empty() ? 0.0 : first.psi_star[i]});
    write_csv((out / "psi_star.csv").string(), {"x", "psi_star_mean", "psi_star_first_seed"},
              rows);

    std::cout << "ensemble n_effective " << report.n_effective << "; terminal mean speed "
              << report.checkpoint_mean.back() << " std " << report.checkpoint_std.back() << "\n";
    for (const auto& r : report.realizations)
        if (r.failed) std::cerr << "seed " << r.seed << " failed: " << r.error << "\n";
    return 0;
}

int cmd_verify(const Common& common) {
    const RunConfig cfg = common.load();
    const ReactionEnv env = cfg.make_env();
    const fs::path out(cfg.out_dir);
    const RunRecord run = read_run_record((out / "run_record.json").string());

    const WaveProfile phi = floor_wave(env);
    const double c_min = phi.speed;
    const double kappa = pick_kappa(cfg, c_min);

    std::set<std::string> enabled(cfg.checks.begin(), cfg.checks.end());
    const auto on = [&](const std::string& name) {
        return enabled.empty() || enabled.count(name) > 0;
    };

    std::vector<CheckReport> reports;
    if (on("monotone_range")) reports.push_back(check_monotone_range(run));
    if (on("envelope_speed")) reports.push_back(check_envelope_speed(run, env, kappa));
    if (on("super_exponential")) {
        const double c = supersolution_speed(env, c_min, run.cfg.dx, run.cfg.dt);
        const double y0 = envelope_offset(phi, c_min);
        reports.push_back(check_super_exponential(run, env, c_min, c, y0));
    }
    if (on("lower_translate"))
        reports.push_back(check_lower_translate(run, env, phi, c_min));
    if (on("decay_ahead")) {
        AheadDecayOptions opt;
        if (env.model().kind() == AmplitudeKind::Telegraph) opt.safety = 0.85;
        reports.push_back(check_decay_ahead(run, opt));
    }
    if (on("decay_behind")) {
        const auto params = scan_behind_params(run, env, 0.625);
        reports.push_back(check_decay_behind(run, env, params));
    }
    if (on("width_bounded"))
        reports.push_back(check_width_bounded(run, 0.1, 0.9, 0.5 * (run.s + run.t_end)));
    if (on("steepness")) {
        AheadDecayOptions opt;
        if (env.model().kind() == AmplitudeKind::Telegraph) opt.safety = 0.85;
        const auto ahead = check_decay_ahead(run, opt);
        reports.push_back(check_steepness(run, ahead.values.at("c_hat")));
    }
    if (on("speed_formula")) {
        // tolerance pinned at the periodic scenario's resolution, scaled
        // linearly to the run's (dx, dt)
        const double tol = 1e-3 * 0.5 * (run.cfg.dx / 0.0125 + run.cfg.dt / 0.0025);
        reports.push_back(check_speed_formula(run, std::max(1e-3, tol)));
    }
    if (on("omega_pair"))
        reports.push_back(check_omega_pair(env, phi, c_min, run.s, 0.1 * (1.0 - env.theta()),
                                           std::min(20.0, run.t_end - run.s)));
    if (on("bistable_push")) {
        const BistableCompanion fB(env, 0.05);
        const WaveProfile wB = solve_bistable_wave(fB);
        const double t0 = run.trace.estimate_delay();
        reports.push_back(check_bistable_push(run, wB.speed, 0.5, t0));
    }

    for (auto& r : reports) r.scenario = cfg.scenario;
    const bool all_pass =
        write_verification_manifest(reports, cfg.scenario, (out / "verification.json").string());
    for (const auto& r : reports)
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " margin " << r.worst_margin
                  << "\n";
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"construction and verification lab for ignition reaction-diffusion fronts"};
    app.require_subcommand(1);

    Common common;
    std::string wave_kind = "ignition";
    double delta_B = 0.05;

    auto* wave = app.add_subcommand("wave", "solve traveling-wave profiles");
    add_common(wave, common);
    wave->add_option("--kind", wave_kind, "ignition|bistable|both");
    wave->add_option("--delta-b", delta_B, "bistable companion negativity depth");

    auto* evolve_cmd = app.add_subcommand("evolve", "single run from wave initial data");
    add_common(evolve_cmd, common);

    auto* front = app.add_subcommand("front", "approximating-run family and limit diagnostics");
    add_common(front, common);

    auto* periodic = app.add_subcommand("periodic", "period-map fixed point and wave speed");
    add_common(periodic, common);

    auto* ensemble = app.add_subcommand("ensemble", "seeded random-media ensemble");
    add_common(ensemble, common);

    auto* verify = app.add_subcommand("verify", "replay estimate checks over recorded runs");
    add_common(verify, common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (wave->parsed()) return cmd_wave(common, wave_kind, delta_B);
        if (evolve_cmd->parsed()) return cmd_evolve(common);
        if (front->parsed()) return cmd_front(common);
        if (periodic->parsed()) return cmd_periodic(common);
        if (ensemble->parsed()) return cmd_ensemble(common);
        if (verify->parsed()) return cmd_verify(common);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
