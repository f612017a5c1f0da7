#ifndef FRONTLAB_RUN_CONFIG_HPP
#define FRONTLAB_RUN_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "frontlab/comparison_verify.hpp"
#include "frontlab/ensemble_random.hpp"
#include "frontlab/interface_track.hpp"
#include "frontlab/pde_core.hpp"

namespace frontlab {

/// One scenario: environment, solver, tracker and horizon settings.
/// Unknown keys are rejected at load time; parse -> serialize -> parse is
/// the identity.
struct RunConfig {
    std::string scenario = "custom";

    // reaction block
    double theta = 0.25;
    std::string shape = "quadratic";
    std::string amplitude_model = "constant";  // constant|periodic|quasi_periodic|telegraph
    double amplitude = 1.0;                    // constant model
    double mean = 1.0, rel_amplitude = 0.0, period = 10.0;
    std::vector<HarmonicTerm> harmonics;
    double a_min = 1.0, a_max = 1.0, holding_rate = 0.2;
    std::uint64_t seed = 1;

    // solver block
    double dx = 0.05, dt = 0.02;
    double window = 400.0, margin = 50.0;

    // tracker block
    std::vector<double> levels{0.05, 0.1, 0.25, 0.5, 0.625, 0.9, 0.95};
    double kappa = 0.0;  // 0: use (c_min/2)^2 computed at run time

    // run block
    double horizon = 100.0;
    double observe_every = 0.5;
    double snapshot_every = 0.5;
    std::vector<double> s_list{-20.0, -40.0};
    double shift_tol = 1e-8;
    double cauchy_tol = 1e-4;
    double per_tol = 1e-4;
    double burn_in = 50.0;

    // ensemble block
    std::vector<std::uint64_t> seeds;
    int workers = 8;
    int checkpoints = 8;

    // verification toggles (all on by default)
    std::vector<std::string> checks;

    std::string out_dir = "out";

    AmplitudeModel make_amplitude() const;
    ReactionEnv make_env() const;
    StepperConfig make_stepper(const ReactionEnv& env) const;
    TrackerConfig make_tracker(double kappa_value) const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

/// Built-in scenario registry (the canonical acceptance scenarios).
std::vector<std::string> scenario_names();
RunConfig scenario_config(const std::string& name);

// --- file emission -------------------------------------------------------

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);
void write_profile_csv(const WaveProfile& w, const std::string& path);
void write_speed_json(const WaveProfile& w, const std::string& path);
void write_snapshot_csv(const Snapshot& snap, const std::string& path);
void write_trace_csv(const InterfaceTrace& trace, const std::string& path);

void write_run_record(const RunRecord& run, const std::string& path);
RunRecord read_run_record(const std::string& path);

/// Aggregated manifest of verifier checks; returns true iff every check passed.
bool write_verification_manifest(const std::vector<CheckReport>& reports,
                                 const std::string& scenario, const std::string& path);

void write_ensemble_summary(const EnsembleReport& report, const std::string& path);

}  // namespace frontlab

#endif
