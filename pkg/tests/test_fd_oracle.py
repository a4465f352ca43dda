import ast
import math
from pathlib import Path

import numpy as np
import pytest

import thinplate.fd_oracle as fd
from thinplate.evolution import solve
from thinplate.fd_oracle import FDConfig, adi_solve, adi_steps, discrete_l2, fd_mean, fd_solve, trapezoid_weights
from thinplate.fields import GridField, sample

PI2 = math.pi ** 2


def test_oracle_imports_no_spectral_code():
    tree = ast.parse(Path(fd.__file__).read_text())
    imported = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            imported.add(node.module or "")
    assert not any(m.endswith(("eigenbasis", "projection", "evolution", "limit1d")) for m in imported)


def test_constant_is_equilibrium():
    one = sample(lambda a, b: 1.0, 17, 9)
    np.testing.assert_allclose(fd_solve(one, 0.3, 1.0, FDConfig(0.01)).values, 1.0, atol=1e-13)


def test_cos_x1_matches_closed_form():
    v0 = sample(lambda a, b: np.cos(np.pi * a), 65, 65)
    out = fd_solve(v0, 0.5, 0.1, FDConfig(1e-3))
    assert discrete_l2(out, math.exp(-0.1 * PI2) * v0.values) < 2e-4


def test_cos_x2_matches_closed_form():
    v0 = sample(lambda a, b: np.cos(np.pi * b), 65, 65)
    out = fd_solve(v0, 0.5, 0.1, FDConfig(1e-4))
    assert discrete_l2(out, math.exp(-0.4 * PI2) * v0.values) < 5e-4


@pytest.mark.parametrize(
    "f, expected",
    [
        (lambda a, b: 3.5 + 0 * a, 3.5),
        (lambda a, b: np.cos(np.pi * a), 0.0),
        (lambda a, b: np.cos(2 * np.pi * a) * np.cos(2 * np.pi * b), 0.0),
    ],
)
def test_fd_mean_examples(f, expected):
    assert fd_mean(sample(f, 17, 33)) == pytest.approx(expected, abs=1e-12)


def test_discrete_conservation_and_stability():
    rng = np.random.default_rng(7)
    u = 2.0 + rng.standard_normal((21, 15))
    m0 = fd_mean(u)
    w1, w2 = trapezoid_weights(21), trapezoid_weights(15)
    norm = lambda v: math.sqrt(w1 @ (v * v) @ w2)  # noqa: E731
    prev = norm(u)
    for dt in (1e-4, 1e-2, 1.0):
        for v in adi_steps(u, 0.2, dt, 20):
            assert fd_mean(v) == pytest.approx(m0, rel=1e-12)
            assert norm(v) <= prev * (1 + 1e-14)
            prev = norm(v)
        prev = norm(u)


def test_partial_last_step():
    v0 = sample(lambda a, b: np.cos(np.pi * a), 33, 5)
    a = adi_solve(v0.values, 1.0, 0.105, 0.01)
    b = adi_solve(v0.values, 1.0, 0.1, 0.01)
    assert not np.allclose(a, b)
    assert discrete_l2(a, math.exp(-0.105 * PI2) * v0.values) < 1e-3


def test_even_grids_through_raw_arrays():
    x = np.linspace(0, 1, 20)
    u0 = np.repeat(np.cos(np.pi * x)[:, None], 4, axis=1)
    out = adi_solve(u0, 0.5, 0.05, 1e-3)
    assert discrete_l2(out, math.exp(-0.05 * PI2) * u0) < 1e-3


def test_refinement_order():
    errors = []
    for n, dt in [(17, 4e-4), (33, 2e-4), (65, 1e-4)]:
        v0 = sample(lambda a, b: np.cos(np.pi * a) + np.cos(np.pi * b), n, n)
        errors.append(discrete_l2(fd_solve(v0, 0.5, 0.1, FDConfig(dt)), solve(v0, 0.5, 0.1)))
    orders = [math.log2(errors[i] / errors[i + 1]) for i in range(2)]
    assert min(orders) >= 1.9


def test_config_validation():
    with pytest.raises(ValueError):
        FDConfig(dt=0)
    with pytest.raises(ValueError):
        FDConfig(scheme="explicit")
    v0 = sample(lambda a, b: a, 5, 5)
    with pytest.raises(ValueError):
        fd_solve(v0, 0.5, 0.1, FDConfig(1e-3, nx1=7))
    with pytest.raises(ValueError):
        fd_solve(GridField(v0.values, "physical", 0.5), 0.5, 0.1)
