#include "frontlab/ensemble_random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include <json.hpp>

namespace frontlab {

namespace {

std::vector<double> make_offsets(double radius, double dx) {
    std::vector<double> offsets;
    for (double off = -radius; off <= radius + 1e-12; off += dx) offsets.push_back(off);
    return offsets;
}

Realization run_one(const ReactionEnv& tmpl, const WaveProfile& phi, const StepperConfig& cfg,
                    const EnsembleConfig& ens, std::uint64_t seed, bool keep_stack,
                    const std::vector<double>& offsets) {
    Realization r;
    r.seed = seed;
    try {
        const auto& m = tmpl.model();
        ReactionEnv env(tmpl.theta(),
                        AmplitudeModel::telegraph(m.a_min(), m.a_max(), m.holding_rate(), seed));
        Field f = make_front_field(phi, 0.0, 0.0, cfg.dx, cfg.window_width);

        std::vector<std::pair<double, double>> xi_series;
        std::vector<double> acc(offsets.size(), 0.0);
        std::vector<double> prev_sample;
        double prev_t = 0.0, first_t = 0.0;
        bool have_prev = false;

        Observer obs = [&](const Field& field, const Derivatives&) {
            if (field.t < ens.burn_in - 1e-9) return;
            const double xi = xi_lambda(field, env.theta());
            xi_series.emplace_back(field.t, xi);
            std::vector<double> sample(offsets.size());
            for (std::size_t j = 0; j < offsets.size(); ++j)
                sample[j] = field.value(xi + offsets[j]);
            if (have_prev) {
                const double w = 0.5 * (field.t - prev_t);
                for (std::size_t j = 0; j < offsets.size(); ++j)
                    acc[j] += w * (prev_sample[j] + sample[j]);
            } else {
                first_t = field.t;
                have_prev = true;
            }
            if (keep_stack) {
                r.psi_times.push_back(field.t);
                r.psi_stack.push_back(sample);
            }
            prev_t = field.t;
            prev_sample = std::move(sample);
        };

        evolve(f, env, cfg, ens.burn_in + ens.horizon, {obs}, ens.psi_cadence);

        if (prev_t > first_t) {
            r.psi_star.resize(offsets.size());
            for (std::size_t j = 0; j < offsets.size(); ++j)
                r.psi_star[j] = acc[j] / (prev_t - first_t);
        }

        double xi0 = 0.0;
        for (const auto& [t, xi] : xi_series)
            if (std::abs(t - ens.burn_in) < 1e-7) xi0 = xi;
        const double spacing = ens.horizon / ens.checkpoints;
        for (int k = 1; k <= ens.checkpoints; ++k) {
            const double target = ens.burn_in + k * spacing;
            for (const auto& [t, xi] : xi_series) {
                if (std::abs(t - target) < 1e-7) {
                    const double rel_t = t - ens.burn_in;
                    r.checkpoints.push_back({rel_t, xi - xi0, (xi - xi0) / rel_t});
                    break;
                }
            }
        }
        if (static_cast<int>(r.checkpoints.size()) != ens.checkpoints)
            throw Error("missing checkpoint samples");
    } catch (const std::exception& e) {
        r.failed = true;
        r.error = e.what();
        r.checkpoints.clear();
    }
    return r;
}

}  // namespace

const Realization& EnsembleReport::by_seed(std::uint64_t seed) const {
    for (const auto& r : realizations)
        if (r.seed == seed) return r;
    throw ConfigError("seed not present in the report");
}

EnsembleReport run_ensemble(const ReactionEnv& env_template, const WaveProfile& phi,
                            const std::vector<std::uint64_t>& seeds, const StepperConfig& cfg,
                            const EnsembleConfig& ens, double c_low, double c_high,
                            const std::vector<Realization>* prior) {
    if (env_template.model().kind() != AmplitudeKind::Telegraph)
        throw ConfigError("ensemble requires a telegraph amplitude template");
    for (std::size_t i = 0; i < seeds.size(); ++i)
        for (std::size_t j = i + 1; j < seeds.size(); ++j)
            if (seeds[i] == seeds[j]) throw ConfigError("ensemble seeds must be distinct");

    EnsembleReport report;
    report.cfg = ens;
    report.c_low = c_low;
    report.c_high = c_high;
    report.offsets = make_offsets(ens.psi_radius, cfg.dx);
    report.realizations.resize(seeds.size());

    // No shared mutable state between realizations: each worker writes only
    // its own slot, so the outcome is independent of scheduling.
    std::atomic<std::size_t> next{0};
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_workers =
        std::min<unsigned>(std::max(1, ens.workers), std::min<std::size_t>(hw, seeds.size()));
    const std::uint64_t profile_seed = ens.profile_seed != 0 ? ens.profile_seed : seeds.front();

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= seeds.size()) return;
            if (prior != nullptr) {
                const auto it = std::find_if(prior->begin(), prior->end(),
                                             [&](const Realization& r) { return r.seed == seeds[i]; });
                if (it != prior->end() && !it->failed) {
                    report.realizations[i] = *it;
                    continue;
                }
            }
            report.realizations[i] = run_one(env_template, phi, cfg, ens, seeds[i],
                                             seeds[i] == profile_seed, report.offsets);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    report.checkpoint_mean.assign(ens.checkpoints, 0.0);
    report.checkpoint_std.assign(ens.checkpoints, 0.0);
    report.n_effective = 0;
    for (const auto& r : report.realizations)
        if (!r.failed) ++report.n_effective;
    if (report.n_effective > 0) {
        for (int k = 0; k < ens.checkpoints; ++k) {
            double sum = 0.0, sq = 0.0;
            for (const auto& r : report.realizations) {
                if (r.failed) continue;
                sum += r.checkpoints[k].speed;
                sq += r.checkpoints[k].speed * r.checkpoints[k].speed;
            }
            const double mean = sum / report.n_effective;
            report.checkpoint_mean[k] = mean;
            report.checkpoint_std[k] =
                std::sqrt(std::max(0.0, sq / report.n_effective - mean * mean));
        }
    }
    return report;
}

std::vector<double> averaged_profile(const EnsembleReport& report,
                                     const ReactionEnv& env_template, const WaveProfile& phi,
                                     const StepperConfig& cfg, std::uint64_t seed) {
    const Realization* r = &report.by_seed(seed);
    Realization recomputed;
    if (r->psi_stack.empty()) {
        recomputed = run_one(env_template, phi, cfg, report.cfg, seed, true, report.offsets);
        if (recomputed.failed) throw Error("realization failed: " + recomputed.error);
        r = &recomputed;
    }
    if (r->psi_stack.size() < 2)
        throw InsufficientSnapshots("need at least two front-centered snapshots");
    std::vector<double> avg(report.offsets.size(), 0.0);
    for (std::size_t j = 1; j < r->psi_stack.size(); ++j) {
        const double w = 0.5 * (r->psi_times[j] - r->psi_times[j - 1]);
        for (std::size_t i = 0; i < avg.size(); ++i)
            avg[i] += w * (r->psi_stack[j - 1][i] + r->psi_stack[j][i]);
    }
    const double span = r->psi_times.back() - r->psi_times.front();
    for (auto& v : avg) v /= span;
    return avg;
}

void write_checkpoints_jsonl(const EnsembleReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path);
    for (const auto& r : report.realizations) {
        for (const auto& cp : r.checkpoints) {
            nlohmann::json row{{"format_version", 1}, {"type", "checkpoint"},
                               {"seed", r.seed},      {"t", cp.t},
                               {"xi", cp.xi},         {"speed", cp.speed}};
            out << row.dump() << '\n';
        }
        if (!r.failed && !r.psi_star.empty()) {
            nlohmann::json row{{"format_version", 1},
                               {"type", "psi_star"},
                               {"seed", r.seed},
                               {"values", r.psi_star}};
            out << row.dump() << '\n';
        }
        if (r.failed) {
            nlohmann::json row{{"format_version", 1},
                               {"type", "failure"},
                               {"seed", r.seed},
                               {"error", r.error}};
            out << row.dump() << '\n';
        }
    }
}

std::vector<Realization> read_checkpoints_jsonl(const std::string& path,
                                                int expected_checkpoints) {
    std::ifstream in(path);
    std::vector<Realization> out;
    if (!in) return out;
    auto find = [&out](std::uint64_t seed) -> Realization& {
        for (auto& r : out)
            if (r.seed == seed) return r;
        out.emplace_back();
        out.back().seed = seed;
        return out.back();
    };
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto row = nlohmann::json::parse(line);
        auto& r = find(row.at("seed").get<std::uint64_t>());
        const std::string type = row.at("type").get<std::string>();
        if (type == "checkpoint")
            r.checkpoints.push_back({row.at("t").get<double>(), row.at("xi").get<double>(),
                                     row.at("speed").get<double>()});
        else if (type == "psi_star")
            r.psi_star = row.at("values").get<std::vector<double>>();
        else if (type == "failure") {
            r.failed = true;
            r.error = row.at("error").get<std::string>();
        }
    }
    // Only complete records are usable for resume.
    std::vector<Realization> complete;
    for (auto& r : out)
        if (r.failed ||
            (static_cast<int>(r.checkpoints.size()) == expected_checkpoints && !r.psi_star.empty()))
            complete.push_back(std::move(r));
    return complete;
}

}  // namespace frontlab
