#include "frontlab/run_config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace frontlab {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!known.count(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

AmplitudeModel RunConfig::make_amplitude() const {
    if (amplitude_model == "constant") return AmplitudeModel::constant(amplitude);
    if (amplitude_model == "periodic")
        return AmplitudeModel::periodic(mean, rel_amplitude, period);
    if (amplitude_model == "quasi_periodic")
        return AmplitudeModel::quasi_periodic(mean, harmonics);
    if (amplitude_model == "telegraph")
        return AmplitudeModel::telegraph(a_min, a_max, holding_rate, seed);
    throw ConfigError("unknown amplitude model '" + amplitude_model + "'");
}

ReactionEnv RunConfig::make_env() const {
    if (shape != "quadratic")
        throw ConfigError("unknown reaction shape '" + shape + "'");
    return ReactionEnv(theta, make_amplitude());
}

StepperConfig RunConfig::make_stepper(const ReactionEnv& env) const {
    if (!(dx > 0.0) || !(dt > 0.0) || !(window > 0.0) || !(margin > 0.0) || margin >= window)
        throw ConfigError("solver block requires dx, dt > 0 and 0 < margin < window");
    StepperConfig cfg;
    cfg.dx = dx;
    cfg.dt = dt;
    cfg.lipschitz_bound = env.lipschitz_bound();
    cfg.window_width = window;
    cfg.shift_margin = margin;
    if (cfg.dt * cfg.lipschitz_bound > 1.0)
        throw ConfigError("dt violates the monotonicity condition dt*L <= 1");
    return cfg;
}

TrackerConfig RunConfig::make_tracker(double kappa_value) const {
    TrackerConfig t;
    t.levels = levels;
    t.kappa = kappa_value;
    return t;
}

RunConfig parse_config(const std::string& json_text) {
    json root = json::parse(json_text);
    RunConfig c;
    reject_unknown(root, {"scenario", "reaction", "solver", "tracker", "run", "ensemble",
                          "verify", "out_dir"},
                   "config");
    c.scenario = root.value("scenario", c.scenario);
    c.out_dir = root.value("out_dir", c.out_dir);

    if (root.contains("reaction")) {
        const auto& r = root["reaction"];
        reject_unknown(r, {"theta", "shape", "amplitude"}, "reaction");
        c.theta = r.value("theta", c.theta);
        c.shape = r.value("shape", c.shape);
        if (r.contains("amplitude")) {
            const auto& a = r["amplitude"];
            reject_unknown(a, {"model", "params", "seed"}, "reaction.amplitude");
            c.amplitude_model = a.value("model", c.amplitude_model);
            c.seed = a.value("seed", c.seed);
            if (a.contains("params")) {
                const auto& p = a["params"];
                if (c.amplitude_model == "constant") {
                    reject_unknown(p, {"a"}, "amplitude.params");
                    c.amplitude = p.value("a", c.amplitude);
                } else if (c.amplitude_model == "periodic") {
                    reject_unknown(p, {"mean", "rel_amplitude", "period"}, "amplitude.params");
                    c.mean = p.value("mean", c.mean);
                    c.rel_amplitude = p.value("rel_amplitude", c.rel_amplitude);
                    c.period = p.value("period", c.period);
                } else if (c.amplitude_model == "quasi_periodic") {
                    reject_unknown(p, {"mean", "terms"}, "amplitude.params");
                    c.mean = p.value("mean", c.mean);
                    if (p.contains("terms")) {
                        c.harmonics.clear();
                        for (const auto& t : p["terms"]) {
                            reject_unknown(t, {"rel_amplitude", "frequency"}, "amplitude term");
                            c.harmonics.push_back(
                                {t.at("rel_amplitude").get<double>(), t.at("frequency").get<double>()});
                        }
                    }
                } else if (c.amplitude_model == "telegraph") {
                    reject_unknown(p, {"a_min", "a_max", "holding_rate"}, "amplitude.params");
                    c.a_min = p.value("a_min", c.a_min);
                    c.a_max = p.value("a_max", c.a_max);
                    c.holding_rate = p.value("holding_rate", c.holding_rate);
                } else {
                    throw ConfigError("unknown amplitude model '" + c.amplitude_model + "'");
                }
            }
        }
    }

    if (root.contains("solver")) {
        const auto& s = root["solver"];
        reject_unknown(s, {"dx", "dt", "window", "margin"}, "solver");
        c.dx = s.value("dx", c.dx);
        c.dt = s.value("dt", c.dt);
        c.window = s.value("window", c.window);
        c.margin = s.value("margin", c.margin);
    }

    if (root.contains("tracker")) {
        const auto& t = root["tracker"];
        reject_unknown(t, {"levels", "kappa"}, "tracker");
        if (t.contains("levels")) c.levels = t["levels"].get<std::vector<double>>();
        c.kappa = t.value("kappa", c.kappa);
    }

    if (root.contains("run")) {
        const auto& r = root["run"];
        reject_unknown(r,
                       {"horizon", "observe_every", "snapshot_every", "s_list", "shift_tol",
                        "cauchy_tol", "per_tol", "burn_in"},
                       "run");
        c.horizon = r.value("horizon", c.horizon);
        c.observe_every = r.value("observe_every", c.observe_every);
        c.snapshot_every = r.value("snapshot_every", c.snapshot_every);
        if (r.contains("s_list")) c.s_list = r["s_list"].get<std::vector<double>>();
        c.shift_tol = r.value("shift_tol", c.shift_tol);
        c.cauchy_tol = r.value("cauchy_tol", c.cauchy_tol);
        c.per_tol = r.value("per_tol", c.per_tol);
        c.burn_in = r.value("burn_in", c.burn_in);
    }

    if (root.contains("ensemble")) {
        const auto& e = root["ensemble"];
        reject_unknown(e, {"seeds", "workers", "checkpoints"}, "ensemble");
        if (e.contains("seeds")) c.seeds = e["seeds"].get<std::vector<std::uint64_t>>();
        c.workers = e.value("workers", c.workers);
        c.checkpoints = e.value("checkpoints", c.checkpoints);
    }

    if (root.contains("verify")) {
        const auto& v = root["verify"];
        reject_unknown(v, {"checks"}, "verify");
        if (v.contains("checks")) c.checks = v["checks"].get<std::vector<std::string>>();
    }

    // Module preconditions checked eagerly so a bad file fails at load time.
    if (!(c.theta > 0.0 && c.theta < 1.0)) throw ConfigError("theta must lie in (0,1)");
    if (!(c.horizon >= 0.0)) throw ConfigError("horizon must be nonnegative");
    if (!(c.observe_every > 0.0)) throw ConfigError("observe_every must be positive");
    if (!(c.dx > 0.0) || !(c.dt > 0.0)) throw ConfigError("dx and dt must be positive");
    if (!(c.margin > 0.0) || !(c.margin < c.window))
        throw ConfigError("margin must lie in (0, window)");
    for (double l : c.levels)
        if (!(l > 0.0 && l < 1.0)) throw ConfigError("tracker levels must lie in (0,1)");
    (void)c.make_stepper(c.make_env());
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
    json amplitude;
    amplitude["model"] = c.amplitude_model;
    amplitude["seed"] = c.seed;
    json params;
    if (c.amplitude_model == "constant") {
        params["a"] = c.amplitude;
    } else if (c.amplitude_model == "periodic") {
        params["mean"] = c.mean;
        params["rel_amplitude"] = c.rel_amplitude;
        params["period"] = c.period;
    } else if (c.amplitude_model == "quasi_periodic") {
        params["mean"] = c.mean;
        json terms = json::array();
        for (const auto& h : c.harmonics)
            terms.push_back({{"rel_amplitude", h.rel_amplitude}, {"frequency", h.frequency}});
        params["terms"] = terms;
    } else {
        params["a_min"] = c.a_min;
        params["a_max"] = c.a_max;
        params["holding_rate"] = c.holding_rate;
    }
    amplitude["params"] = params;

    json root;
    root["scenario"] = c.scenario;
    root["out_dir"] = c.out_dir;
    root["reaction"] = {{"theta", c.theta}, {"shape", c.shape}, {"amplitude", amplitude}};
    root["solver"] = {{"dx", c.dx}, {"dt", c.dt}, {"window", c.window}, {"margin", c.margin}};
    root["tracker"] = {{"levels", c.levels}, {"kappa", c.kappa}};
    root["run"] = {{"horizon", c.horizon},
                   {"observe_every", c.observe_every},
                   {"snapshot_every", c.snapshot_every},
                   {"s_list", c.s_list},
                   {"shift_tol", c.shift_tol},
                   {"cauchy_tol", c.cauchy_tol},
                   {"per_tol", c.per_tol},
                   {"burn_in", c.burn_in}};
    root["ensemble"] = {{"seeds", c.seeds}, {"workers", c.workers}, {"checkpoints", c.checkpoints}};
    root["verify"] = {{"checks", c.checks}};
    return root.dump(2) + "\n";
}

std::vector<std::string> scenario_names() {
    return {"frozen", "periodic", "telegraph", "quasiperiodic", "ensemble32"};
}

RunConfig scenario_config(const std::string& name) {
    RunConfig c;
    c.scenario = name;
    if (name == "frozen") {
        c.amplitude_model = "constant";
        c.amplitude = 1.0;
        c.horizon = 120.0;
        c.s_list = {-20.0, -40.0};
    } else if (name == "periodic") {
        // resolution pinned by the speed-formula consistency tolerance
        c.amplitude_model = "periodic";
        c.mean = 1.0;
        c.rel_amplitude = 0.5;
        c.period = 10.0;
        c.dx = 0.0125;
        c.dt = 0.0025;
        c.horizon = 200.0;
        c.observe_every = 0.25;
        c.snapshot_every = 1.0;
        c.s_list = {-20.0, -40.0, -80.0, -160.0};
        c.per_tol = 5e-6;
    } else if (name == "telegraph") {
        c.amplitude_model = "telegraph";
        c.a_min = 0.5;
        c.a_max = 2.0;
        c.holding_rate = 0.2;
        c.seed = 7;
        c.horizon = 400.0;
    } else if (name == "quasiperiodic") {
        c.amplitude_model = "quasi_periodic";
        c.mean = 1.0;
        c.harmonics = {{0.25, 0.1}, {0.2, 0.1 / std::sqrt(2.0)}};
        c.horizon = 200.0;
    } else if (name == "ensemble32") {
        c.amplitude_model = "telegraph";
        c.a_min = 0.5;
        c.a_max = 2.0;
        c.holding_rate = 0.2;
        c.horizon = 400.0;
        c.burn_in = 50.0;
        c.observe_every = 1.0;
        for (std::uint64_t s = 101; s <= 132; ++s) c.seeds.push_back(s);
    } else {
        throw ConfigError("unknown scenario '" + name + "'");
    }
    return c;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path);
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << format_double(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
}

void write_profile_csv(const WaveProfile& w, const std::string& path) {
    std::vector<std::vector<double>> rows;
    rows.reserve(w.phi.size());
    for (std::size_t i = 0; i < w.phi.size(); ++i)
        rows.push_back({w.x_lo + static_cast<double>(i) * w.dx, w.phi[i]});
    write_csv(path, {"x", "phi"}, rows);
}

void write_speed_json(const WaveProfile& w, const std::string& path) {
    json root{{"format_version", 1},
              {"kind", w.kind == WaveProfile::Kind::Ignition ? "ignition" : "bistable"},
              {"speed", w.speed},
              {"theta", w.theta},
              {"residual_max", w.residual_max},
              {"c_over", w.c_over},
              {"c_under", w.c_under},
              {"tol", w.tol},
              {"x_lo", w.x_lo},
              {"x_hi", w.x_hi}};
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path);
    out << root.dump(2) << "\n";
}

void write_snapshot_csv(const Snapshot& snap, const std::string& path) {
    std::vector<std::vector<double>> rows;
    rows.reserve(snap.u.size());
    for (int i = 0; i < snap.grid.n; ++i) rows.push_back({snap.grid.x(i), snap.u[i]});
    write_csv(path, {"x", "u"}, rows);
}

void write_trace_csv(const InterfaceTrace& trace, const std::string& path) {
    std::vector<std::string> cols{"t", "xi_theta", "xi_envelope"};
    for (double l : trace.cfg.levels) cols.push_back("xi_" + format_double(l));
    cols.push_back("slope_at_theta");
    cols.push_back("speed_formula");
    cols.push_back("speed_fd");
    const int j_theta = trace.level_index(trace.theta);
    const auto fd = trace.speed_fd_series(trace.theta);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
        const auto& r = trace.rows[i];
        std::vector<double> row{r.t, r.xi[j_theta], r.xi_env};
        for (double xi : r.xi) row.push_back(xi);
        row.push_back(r.slope[j_theta]);
        row.push_back(r.speed[j_theta]);
        row.push_back(fd[i]);
        rows.push_back(std::move(row));
    }
    write_csv(path, cols, rows);
}

namespace {

json snapshot_to_json(const Snapshot& s) {
    return json{{"t", s.t},
                {"x_left", s.grid.x_left},
                {"dx", s.grid.dx},
                {"n", s.grid.n},
                {"values", s.u}};
}

Snapshot snapshot_from_json(const json& j) {
    Snapshot s;
    s.t = j.at("t").get<double>();
    s.grid.x_left = j.at("x_left").get<double>();
    s.grid.dx = j.at("dx").get<double>();
    s.grid.n = j.at("n").get<int>();
    s.u = j.at("values").get<std::vector<double>>();
    return s;
}

// Non-finite doubles serialize as null; map them back to NaN.
double as_double(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::vector<double> as_doubles(const json& j) {
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(as_double(v));
    return out;
}

}  // namespace

void write_run_record(const RunRecord& run, const std::string& path) {
    json root;
    root["format_version"] = 1;
    root["s"] = run.s;
    root["x_s"] = run.x_s;
    root["t_end"] = run.t_end;
    root["theta"] = run.theta;
    root["dx"] = run.dx;
    root["dt"] = run.dt;
    root["u00"] = run.u00;
    root["cfg"] = {{"dx", run.cfg.dx},
                   {"dt", run.cfg.dt},
                   {"lipschitz_bound", run.cfg.lipschitz_bound},
                   {"window_width", run.cfg.window_width},
                   {"shift_margin", run.cfg.shift_margin}};
    json snaps = json::array();
    for (const auto& s : run.snapshots) snaps.push_back(snapshot_to_json(s));
    root["snapshots"] = snaps;

    json trace;
    trace["levels"] = run.trace.cfg.levels;
    trace["kappa"] = run.trace.cfg.kappa;
    trace["radius"] = run.trace.cfg.slope_window_radius;
    trace["theta"] = run.trace.theta;
    json rows = json::array();
    for (const auto& r : run.trace.rows) {
        rows.push_back(json{{"t", r.t},
                            {"xi", r.xi},
                            {"slope", r.slope},
                            {"speed", r.speed},
                            {"xi_env", r.xi_env},
                            {"ux_first_x", r.ux_first_x},
                            {"ux_dx", r.ux_dx},
                            {"ux", r.ux_window}});
    }
    trace["rows"] = rows;
    root["trace"] = trace;

    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path);
    out << root.dump() << "\n";
}

RunRecord read_run_record(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("missing run artifact " + path);
    json root = json::parse(in);
    RunRecord run;
    run.s = root.at("s").get<double>();
    run.x_s = root.at("x_s").get<double>();
    run.t_end = root.at("t_end").get<double>();
    run.theta = root.at("theta").get<double>();
    run.dx = root.at("dx").get<double>();
    run.dt = root.at("dt").get<double>();
    run.u00 = as_double(root.at("u00"));
    const auto& cfg = root.at("cfg");
    run.cfg.dx = cfg.at("dx").get<double>();
    run.cfg.dt = cfg.at("dt").get<double>();
    run.cfg.lipschitz_bound = cfg.at("lipschitz_bound").get<double>();
    run.cfg.window_width = cfg.at("window_width").get<double>();
    run.cfg.shift_margin = cfg.at("shift_margin").get<double>();
    for (const auto& s : root.at("snapshots")) run.snapshots.push_back(snapshot_from_json(s));

    const auto& trace = root.at("trace");
    run.trace.cfg.levels = trace.at("levels").get<std::vector<double>>();
    run.trace.cfg.kappa = trace.at("kappa").get<double>();
    run.trace.cfg.slope_window_radius = trace.at("radius").get<double>();
    run.trace.theta = trace.at("theta").get<double>();
    for (const auto& r : trace.at("rows")) {
        TraceRow row;
        row.t = r.at("t").get<double>();
        row.xi = as_doubles(r.at("xi"));
        row.slope = as_doubles(r.at("slope"));
        row.speed = as_doubles(r.at("speed"));
        row.xi_env = as_double(r.at("xi_env"));
        row.ux_first_x = r.at("ux_first_x").get<double>();
        row.ux_dx = r.at("ux_dx").get<double>();
        row.ux_window = r.at("ux").get<std::vector<double>>();
        run.trace.rows.push_back(std::move(row));
    }
    return run;
}

bool write_verification_manifest(const std::vector<CheckReport>& reports,
                                 const std::string& scenario, const std::string& path) {
    json checks = json::array();
    bool all_pass = true;
    for (const auto& r : reports) {
        all_pass = all_pass && r.pass;
        json values;
        for (const auto& [k, v] : r.values) values[k] = v;
        checks.push_back(json{{"name", r.name},
                              {"pass", r.pass},
                              {"worst_margin", r.worst_margin},
                              {"location", {{"t", r.worst_t}, {"x", r.worst_x}}},
                              {"tolerance", r.tolerance},
                              {"values", values},
                              {"note", r.note}});
    }
    json root{{"format_version", 1}, {"scenario", scenario}, {"all_pass", all_pass},
              {"checks", checks}};
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path);
    out << root.dump(2) << "\n";
    return all_pass;
}

void write_ensemble_summary(const EnsembleReport& report, const std::string& path) {
    json seeds = json::array();
    for (const auto& r : report.realizations) {
        json cps = json::array();
        for (const auto& cp : r.checkpoints)
            cps.push_back(json{{"t", cp.t}, {"xi", cp.xi}, {"speed", cp.speed}});
        seeds.push_back(json{{"seed", r.seed},
                             {"failed", r.failed},
                             {"error", r.error},
                             {"checkpoints", cps}});
    }
    json root{{"format_version", 1},
              {"n_effective", report.n_effective},
              {"c_low", report.c_low},
              {"c_high", report.c_high},
              {"checkpoint_mean", report.checkpoint_mean},
              {"checkpoint_std", report.checkpoint_std},
              {"realizations", seeds}};
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path);
    out << root.dump(2) << "\n";
}

}  // namespace frontlab
