"""Construction and verification lab for ignition reaction-diffusion fronts.

The compiled core lives in ``_frontlab``; this package re-exports its
surface.
"""

from _frontlab import (  # noqa: F401
    AmplitudeModel,
    BistableCompanion,
    EnvelopeBound,
    Field,
    FrontlabError,
    Grid,
    KppParams,
    PeriodicWave,
    ReactionEnv,
    StepperConfig,
    WaveProfile,
    envelope_speed_bound,
    evolve,
    find_shift,
    interface_speed,
    kpp_envelope_params,
    level_kappa_crossing,
    make_front_field,
    ode_flow,
    periodic_wave,
    scenario_config_json,
    scenario_names,
    solve_bistable_wave,
    solve_companion_wave,
    solve_ignition_wave,
    step,
    xi_envelope,
    xi_lambda,
)

__all__ = [name for name in dir() if not name.startswith("_")]
