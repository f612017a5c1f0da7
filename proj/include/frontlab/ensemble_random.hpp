#ifndef FRONTLAB_ENSEMBLE_RANDOM_HPP
#define FRONTLAB_ENSEMBLE_RANDOM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frontlab/front_builder.hpp"

namespace frontlab {

struct EnsembleConfig {
    double horizon = 400.0;
    double burn_in = 50.0;
    int checkpoints = 8;          // at k * horizon / checkpoints
    int workers = 8;              // capped by hardware concurrency
    double psi_cadence = 1.0;     // front-centered sampling period
    double psi_radius = 40.0;     // offsets [-radius, radius]
    std::uint64_t profile_seed = 0;  // seed whose snapshot stack is kept
};

struct CheckpointStat {
    double t = 0.0;
    double xi = 0.0;     // xi_theta(t) - xi_theta(0), statistics clock
    double speed = 0.0;  // xi / t
};

struct Realization {
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
    std::vector<CheckpointStat> checkpoints;
    std::vector<double> psi_star;  // time-averaged front-centered profile
    // Snapshot stack retained only for the designated profile seed.
    std::vector<double> psi_times;
    std::vector<std::vector<double>> psi_stack;
};

struct EnsembleReport {
    EnsembleConfig cfg;
    std::vector<double> offsets;  // abscissas of psi_star columns
    std::vector<Realization> realizations;
    int n_effective = 0;
    double c_low = 0.0, c_high = 0.0;  // frozen-media sandwich speeds
    std::vector<double> checkpoint_mean;
    std::vector<double> checkpoint_std;

    const Realization& by_seed(std::uint64_t seed) const;
};

/// Independent telegraph realizations from a common normalized front datum:
/// burn-in, then interface statistics at the checkpoint times.  Failures are
/// recorded per realization, never dropped silently.  Deterministic per
/// seed, independent of worker scheduling.
EnsembleReport run_ensemble(const ReactionEnv& env_template, const WaveProfile& phi,
                            const std::vector<std::uint64_t>& seeds, const StepperConfig& cfg,
                            const EnsembleConfig& ens, double c_low, double c_high,
                            const std::vector<Realization>* prior = nullptr);

/// Trapezoidal time average of the front-centered profile of one
/// realization.  Uses the retained snapshot stack when present, otherwise
/// re-runs the seed (bit-for-bit deterministic).
std::vector<double> averaged_profile(const EnsembleReport& report,
                                     const ReactionEnv& env_template, const WaveProfile& phi,
                                     const StepperConfig& cfg, std::uint64_t seed);

/// JSONL persistence: one record per (seed, checkpoint).  Loading a partial
/// file lets run_ensemble skip completed seeds; recomputation of incomplete
/// seeds reproduces the uninterrupted result exactly.
void write_checkpoints_jsonl(const EnsembleReport& report, const std::string& path);
std::vector<Realization> read_checkpoints_jsonl(const std::string& path, int expected_checkpoints);

}  // namespace frontlab

#endif
