import math

import numpy as np
import pytest

import bella


def test_kernel_roundtrip():
    k = bella.make_kernel("quartic:1:1", 2)
    x = np.array([0.3, -0.7])
    back = k.gradient_conjugate(k.gradient(x))
    assert np.linalg.norm(back - x) <= 1e-10


def test_bregman_distance_euclidean():
    k = bella.make_kernel("euclidean", 2)
    x = np.array([3.0, 4.0])
    y = np.zeros(2)
    assert bella.bregman_distance(k, x, y) == pytest.approx(12.5, abs=1e-12)


def test_envelope_values_on_quadratic():
    p = bella.builtin_problem("quadratic", 1, 0)
    x = np.array([2.0])
    assert p.smooth_value(x) == 2.0
    assert bella.forward_step(p, 0.5, x)[0] == pytest.approx(1.0)
    assert bella.bfbe(p, 0.5, x) == pytest.approx(1.0)
    assert bella.bfbe_gradient(p, 0.5, x)[0] == pytest.approx(1.0)
    step = bella.fb_operator(p, 0.5, x)
    assert step.x_bar[0] == pytest.approx(1.0)
    assert step.bregman_residual == pytest.approx(0.5)


def test_solve_quadratic_converges():
    p = bella.builtin_problem("quadratic", 1, 0)
    config = bella.SolverConfig()
    config.gamma = 0.5
    config.sigma = 0.5
    config.epsilon = 1e-8
    result = bella.solve(p, config, np.array([2.0]), direction="bfbs")
    assert result.status == "Converged"
    assert result.final_bregman_residual <= 1e-8
    assert abs(result.x_hat[0]) < 1e-3
    # envelope values decrease monotonically along the run
    values = [rec.bfbe_value for rec in result.iterations]
    assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


def test_lbfgs_beats_plain_splitting_on_circle():
    p = bella.builtin_problem("circle", 2, 0)
    config = bella.default_solver_config(p.rel_smoothness)
    config.epsilon = 1e-20
    x0 = np.array([2.0, 0.5])
    fast = bella.solve(p, config, x0, direction="lbfgs:10")
    slow = bella.solve(p, config, x0, direction="bfbs")
    assert fast.status == "Converged" and slow.status == "Converged"
    assert len(fast.iterations) < len(slow.iterations)
    assert abs(np.linalg.norm(fast.x_hat) - 1.0) < 1e-9


def test_envelope_never_exceeds_objective():
    rng = np.random.default_rng(7)
    p = bella.builtin_problem("l1-ls", 4, 3)
    gamma = 0.9 / p.rel_smoothness
    for _ in range(50):
        x = rng.uniform(-2.0, 2.0, size=4)
        phi = p.objective(x)
        assert bella.bfbe(p, gamma, x) <= phi + 1e-8


def test_certificate_formula():
    p = bella.builtin_problem("quadratic", 1, 0)
    x = np.array([0.0])
    xb = np.array([math.sqrt(2e-8)])
    cert = bella.residual_certificate(p, 0.5, x, xb, 1.0, 1.0)
    assert cert == pytest.approx(3.0 * math.sqrt(2e-8), rel=1e-10)


def test_bad_config_raises():
    p = bella.builtin_problem("quadratic", 1, 0)
    config = bella.SolverConfig()
    config.gamma = 0.5
    config.sigma = 2.0  # outside (0, (1 - gamma L)/gamma) = (0, 1)
    with pytest.raises(ValueError):
        bella.solve(p, config, np.array([2.0]))
