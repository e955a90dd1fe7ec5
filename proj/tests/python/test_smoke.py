import math

import pytest

import levyq


def test_version():
    assert levyq.__version__ == "0.1.0"


def test_psi_facts():
    assert levyq.psi(-2.0).value == pytest.approx(-0.5, abs=1e-12)
    assert levyq.psi(3.0).value == pytest.approx(3.0, abs=1e-12)
    assert levyq.psi(-0.5).d1 == pytest.approx(0.5, abs=1e-12)


def test_stable_constant_matches_quadrature():
    for alpha in (1.2, 1.5, 1.8):
        closed = levyq.stable_levy_constant(alpha)
        quad = levyq.stable_levy_constant_quadrature(alpha)
        assert closed == pytest.approx(quad, rel=1e-7)


def test_recentred_params_beta():
    params = levyq.recentred_params(2, 1.0, [1.0, 2.0], [0.0, 0.0])
    assert params.beta() == pytest.approx(1.0, abs=1e-12)


def test_lyapunov_eval_positive():
    spec = levyq.LyapunovSpec()
    spec.p = 1.2
    spec.delta = 0.05625
    spec.mu = [1.0, 2.0]
    ev = levyq.lyapunov_eval(spec, [1.0, -2.0])
    assert ev.value > 0.0
    assert len(ev.gradient) == 2


def test_simulate_endpoint_runs():
    params = levyq.recentred_params(2, 1.0, [1.0, 2.0], [0.0, 0.0])
    driver = levyq.Driver()
    driver.variant = levyq.DriverVariant.Stable
    driver.alpha = 1.5
    driver.xi = [1.0, 1.0]
    policy = levyq.constant_policy([0.5, 0.5])
    x = levyq.simulate_endpoint(params, policy, driver, [0.0, 0.0], 1.0, 0.01, 7)
    assert len(x) == 2
    assert all(math.isfinite(v) for v in x)


def test_simulate_queue_conserves_counts():
    qp = levyq.QueueParams()
    qp.m = 2
    qp.n = 25
    qp.lambda_ = [0.5, 1.0]
    qp.mu = [1.0, 2.0]
    qp.gamma = [0.0, 0.5]
    qp.ell = [-0.5, -1.0]
    qp.alpha = 1.5
    qp.family = levyq.RenewalFamily.Pareto
    res = levyq.simulate_queue(qp, levyq.constant_policy([0.3, 0.7]), [12, 13], 50.0, 11)
    assert res["events"] > 0
    assert len(res["final_X"]) == 2


def test_hill_on_pareto():
    import random

    rng = random.Random(5)
    draws = [rng.random() ** (-1.0 / 1.5) for _ in range(200000)]
    est = levyq.hill_tail_index(draws, 3000)
    assert est.index == pytest.approx(1.5, abs=0.1)


def test_parse_config_rejects_bad_input():
    with pytest.raises(levyq.ConfigError):
        levyq.parse_config('{"model": {}}')
