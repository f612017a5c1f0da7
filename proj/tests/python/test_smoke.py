"""Smoke tests for the python surface of the compiled core.

Runs standalone (python test_smoke.py) or under pytest.
"""

import math

import _frontlab as fl


def test_reaction_env_eval():
    env = fl.ReactionEnv(0.25, fl.AmplitudeModel("constant", a=1.0))
    assert env.eval(0.0, 0.25) == 0.0
    assert env.eval(5.0, 1.0) == 0.0
    assert abs(env.eval(-2.0, 0.5) - 0.125) < 1e-15
    assert env.eval(0.0, 1.2) < 0.0


def test_amplitude_models():
    per = fl.AmplitudeModel("periodic", mean=1.0, rel_amplitude=0.5, period=10.0)
    assert abs(per(0.0) - 1.0) < 1e-12
    assert abs(per(2.5) - 1.5) < 1e-12

    tg = fl.AmplitudeModel("telegraph", a_min=0.5, a_max=2.0, holding_rate=0.2, seed=7)
    tg2 = fl.AmplitudeModel("telegraph", a_min=0.5, a_max=2.0, holding_rate=0.2, seed=7)
    for t in (-20.0, -1.5, 0.0, 3.25, 111.0):
        assert tg(t) == tg2(t)
        assert 0.5 <= tg(t) <= 2.0


def test_ode_flow_monotone():
    env = fl.ReactionEnv(0.25, fl.AmplitudeModel("periodic", mean=1.0, rel_amplitude=0.5, period=10.0))
    assert fl.ode_flow(env, 0.0, 0.2, 5.0) == 0.2
    assert fl.ode_flow(env, 0.0, 1.0, 5.0) == 1.0
    lo = fl.ode_flow(env, -2.0, 0.3, 4.0)
    hi = fl.ode_flow(env, -2.0, 0.4, 4.0)
    assert lo <= hi + 1e-12


def test_wave_and_tail():
    env = fl.ReactionEnv(0.25, fl.AmplitudeModel("constant", a=1.0))
    wave = fl.solve_ignition_wave(env.f_min, 0.25, 1e-8)
    assert wave.speed > 0.0
    worst = max(
        abs(wave.value(x) - 0.25 * math.exp(-wave.speed * x))
        for x in [i * 0.01 for i in range(1001)]
    )
    assert worst <= 1e-6
    assert wave.residual_max <= 5e-4

    params = fl.kpp_envelope_params(0.04)
    assert abs(params.lambda_kappa - 0.2) < 1e-15
    assert abs(params.c_star - 0.4) < 1e-15


def test_companion_ordering():
    env = fl.ReactionEnv(0.25, fl.AmplitudeModel("constant", a=1.0))
    comp = fl.BistableCompanion(env, 0.05)
    assert comp.integral > 0.0
    wB = fl.solve_companion_wave(comp)
    wI = fl.solve_ignition_wave(env.f_min, 0.25, 1e-8)
    assert 0.0 < wB.speed < wI.speed


def test_evolution_and_interfaces():
    env = fl.ReactionEnv(0.25, fl.AmplitudeModel("constant", a=1.0))
    wave = fl.solve_ignition_wave(env.f_min, 0.25, 1e-8)
    cfg = fl.StepperConfig()
    cfg.lipschitz_bound = env.lipschitz_bound()
    cfg.window_width = 200.0

    field = fl.make_front_field(wave, 0.0, 0.0, cfg.dx, cfg.window_width)
    xi0 = fl.xi_lambda(field, 0.25)
    assert abs(xi0) < 1e-6

    field = fl.evolve(field, env, cfg, 20.0)
    displacement = fl.xi_lambda(field, 0.25) - xi0
    assert abs(displacement - wave.speed * 20.0) / (wave.speed * 20.0) < 0.01

    # the envelope interface dominates the theta crossing
    kappa = 0.25 * wave.speed**2
    y = fl.xi_envelope(field, kappa)
    assert y >= fl.xi_lambda(field, 0.25) + math.log(0.25) / math.sqrt(kappa) - 1e-9

    speed = fl.interface_speed(field, env, 0.25)
    assert abs(speed - wave.speed) / wave.speed < 0.01

    # monotone snapshot
    u = field.u
    assert all(u[i + 1] <= u[i] + 1e-12 for i in range(len(u) - 1))


def test_scenarios_listed():
    names = fl.scenario_names()
    assert len(names) == 5
    assert "periodic" in names
    text = fl.scenario_config_json("telegraph")
    assert '"telegraph"' in text


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"[PASS] {test.__name__}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    main()
