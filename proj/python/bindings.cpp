#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "frontlab/comparison_verify.hpp"
#include "frontlab/ensemble_random.hpp"
#include "frontlab/front_builder.hpp"
#include "frontlab/run_config.hpp"

namespace py = pybind11;
using namespace frontlab;

namespace {

AmplitudeModel model_from_kwargs(const std::string& kind, py::kwargs kw) {
    const auto get = [&](const char* key, double fallback) {
        return kw.contains(key) ? kw[key].cast<double>() : fallback;
    };
    if (kind == "constant") return AmplitudeModel::constant(get("a", 1.0));
    if (kind == "periodic")
        return AmplitudeModel::periodic(get("mean", 1.0), get("rel_amplitude", 0.5),
                                        get("period", 10.0));
    if (kind == "quasi_periodic") {
        std::vector<HarmonicTerm> terms;
        for (const auto& item : kw["terms"].cast<py::list>()) {
            const auto pair = item.cast<std::pair<double, double>>();
            terms.push_back({pair.first, pair.second});
        }
        return AmplitudeModel::quasi_periodic(get("mean", 1.0), terms);
    }
    if (kind == "telegraph")
        return AmplitudeModel::telegraph(get("a_min", 0.5), get("a_max", 2.0),
                                         get("holding_rate", 0.2),
                                         kw.contains("seed") ? kw["seed"].cast<std::uint64_t>() : 1);
    throw ConfigError("unknown amplitude model '" + kind + "'");
}

}  // namespace

PYBIND11_MODULE(_frontlab, m) {
    m.doc() = "ignition reaction-diffusion front laboratory";

    py::register_exception<Error>(m, "FrontlabError");

    py::class_<AmplitudeModel>(m, "AmplitudeModel")
        .def(py::init([](const std::string& kind, py::kwargs kw) {
                 return model_from_kwargs(kind, kw);
             }),
             py::arg("kind"))
        .def("__call__", &AmplitudeModel::operator())
        .def("next_switch_after", &AmplitudeModel::next_switch_after)
        .def_property_readonly("a_min", &AmplitudeModel::a_min)
        .def_property_readonly("a_max", &AmplitudeModel::a_max);

    py::class_<ReactionEnv>(m, "ReactionEnv")
        .def(py::init<double, AmplitudeModel>(), py::arg("theta"), py::arg("model"))
        .def_property_readonly("theta", &ReactionEnv::theta)
        .def_property_readonly("a_min", &ReactionEnv::a_min)
        .def_property_readonly("a_max", &ReactionEnv::a_max)
        .def("eval", &ReactionEnv::eval, py::arg("t"), py::arg("u"))
        .def("amplitude", &ReactionEnv::amplitude)
        .def("f_min", &ReactionEnv::f_min)
        .def("f_max", &ReactionEnv::f_max)
        .def("growth_bound", &ReactionEnv::growth_bound)
        .def("lipschitz_bound", &ReactionEnv::lipschitz_bound, py::arg("u_hi") = 1.05);

    m.def("ode_flow", &ode_flow, py::arg("env"), py::arg("t0"), py::arg("a0"), py::arg("t1"),
          py::arg("tol") = 1e-10);

    py::class_<BistableCompanion>(m, "BistableCompanion")
        .def(py::init<const ReactionEnv&, double>(), py::arg("env"), py::arg("delta_B"))
        .def("__call__", &BistableCompanion::operator())
        .def_property_readonly("integral", &BistableCompanion::integral)
        .def_property_readonly("delta_B", &BistableCompanion::delta_B);

    py::class_<WaveProfile>(m, "WaveProfile")
        .def_readonly("speed", &WaveProfile::speed)
        .def_readonly("theta", &WaveProfile::theta)
        .def_readonly("x_lo", &WaveProfile::x_lo)
        .def_readonly("x_hi", &WaveProfile::x_hi)
        .def_readonly("residual_max", &WaveProfile::residual_max)
        .def_readonly("phi", &WaveProfile::phi)
        .def("value", &WaveProfile::value)
        .def("derivative", &WaveProfile::derivative);

    m.def(
        "solve_ignition_wave",
        [](const std::function<double(double)>& f, double theta, double tol) {
            return solve_ignition_wave(f, theta, tol);
        },
        py::arg("f"), py::arg("theta"), py::arg("tol") = 1e-8);
    m.def(
        "solve_bistable_wave",
        [](const std::function<double(double)>& f, double level, double tol) {
            return solve_bistable_wave(f, level, tol);
        },
        py::arg("f"), py::arg("normalize_level"), py::arg("tol") = 1e-8);
    m.def(
        "solve_companion_wave",
        [](const BistableCompanion& fB, double tol) { return solve_bistable_wave(fB, tol); },
        py::arg("companion"), py::arg("tol") = 1e-8);

    py::class_<KppParams>(m, "KppParams")
        .def_readonly("lambda_kappa", &KppParams::lambda)
        .def_readonly("c_star", &KppParams::c_star);
    m.def("kpp_envelope_params", &kpp_envelope_params, py::arg("kappa"));

    py::class_<EnvelopeBound>(m, "EnvelopeBound")
        .def_readonly("kappa0", &EnvelopeBound::kappa0)
        .def_readonly("lambda_kappa", &EnvelopeBound::lambda_kappa)
        .def_readonly("c_kappa0", &EnvelopeBound::c_kappa0);
    m.def("envelope_speed_bound",
          py::overload_cast<const ReactionEnv&, double>(&envelope_speed_bound), py::arg("env"),
          py::arg("kappa"));
    m.def("level_kappa_crossing", &level_kappa_crossing, py::arg("env"), py::arg("kappa"));

    py::class_<Grid>(m, "Grid")
        .def_readonly("x_left", &Grid::x_left)
        .def_readonly("dx", &Grid::dx)
        .def_readonly("n", &Grid::n)
        .def("x", &Grid::x);

    py::class_<Field>(m, "Field")
        .def_readonly("grid", &Field::grid)
        .def_readonly("t", &Field::t)
        .def_readonly("u", &Field::u)
        .def("value", &Field::value);

    py::class_<StepperConfig>(m, "StepperConfig")
        .def(py::init<>())
        .def_readwrite("dx", &StepperConfig::dx)
        .def_readwrite("dt", &StepperConfig::dt)
        .def_readwrite("lipschitz_bound", &StepperConfig::lipschitz_bound)
        .def_readwrite("window_width", &StepperConfig::window_width)
        .def_readwrite("shift_margin", &StepperConfig::shift_margin);

    m.def("make_front_field", &make_front_field, py::arg("profile"), py::arg("center"),
          py::arg("t0"), py::arg("dx"), py::arg("width"));
    m.def("step", &step, py::arg("field"), py::arg("env"), py::arg("cfg"));
    m.def(
        "evolve",
        [](Field& field, const ReactionEnv& env, const StepperConfig& cfg, double t_end) {
            evolve(field, env, cfg, t_end);
            return field;
        },
        py::arg("field"), py::arg("env"), py::arg("cfg"), py::arg("t_end"));

    m.def("xi_lambda", &xi_lambda, py::arg("field"), py::arg("level"));
    m.def("xi_envelope", &xi_envelope, py::arg("field"), py::arg("kappa"),
          py::arg("u_floor") = 1e-12);
    m.def(
        "interface_speed",
        [](const Field& field, const ReactionEnv& env, double level) {
            return interface_speed(field, env, level);
        },
        py::arg("field"), py::arg("env"), py::arg("level"));

    m.def(
        "find_shift",
        [](const ReactionEnv& env, const WaveProfile& phi, double s, double tol,
           const StepperConfig& cfg, double c_min) {
            return find_shift(env, phi, s, tol, cfg, c_min);
        },
        py::arg("env"), py::arg("phi"), py::arg("s"), py::arg("tol"), py::arg("cfg"),
        py::arg("c_min"));

    py::class_<PeriodicWave>(m, "PeriodicWave")
        .def_readonly("period", &PeriodicWave::period)
        .def_readonly("c_T", &PeriodicWave::c_T)
        .def_readonly("residuals", &PeriodicWave::residuals)
        .def_readonly("offsets", &PeriodicWave::offsets)
        .def_readonly("profile", &PeriodicWave::profile)
        .def_readonly("profile_equation_residual", &PeriodicWave::profile_equation_residual);
    m.def("periodic_wave", &periodic_wave, py::arg("env"), py::arg("phi"), py::arg("cfg"),
          py::arg("per_tol") = 1e-4, py::arg("burn_in") = 50.0, py::arg("max_periods") = 60);

    m.def("scenario_names", &scenario_names);
    m.def(
        "scenario_config_json",
        [](const std::string& name) { return serialize_config(scenario_config(name)); },
        py::arg("name"));
}
