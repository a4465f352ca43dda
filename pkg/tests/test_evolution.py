import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PI2, brute_spectrum
from thinplate._validation import GridMismatchError
from thinplate.eigenbasis import EigenPair, ModeIndex, ordered_spectrum
from thinplate.evolution import (
    TruncationPolicy,
    TruncationWarning,
    choose_truncation,
    evolve,
    lattice_partition_bound,
    solve,
    solve_physical,
    truncation_for,
)
from thinplate.fields import GridField, sample, sample_physical
from thinplate.projection import SpectralState, inner_product, project, reconstruct


def _state(rng, eps=0.5, count=12):
    pairs = ordered_spectrum(eps, count)
    coef = rng.standard_normal(count)
    return SpectralState(eps, pairs, coef, float(coef @ coef))


def test_evolve_examples():
    s = _state(np.random.default_rng(0))
    assert evolve(s, 0.0) is s
    const = SpectralState(0.5, ordered_spectrum(0.5, 1), [1.0], 1.0)
    assert evolve(const, 100.0).coefficients[0] == 1.0
    pairs = ordered_spectrum(0.5, 2)
    one = SpectralState(0.5, pairs, [0.0, 1 / math.sqrt(2)], 0.5)
    assert evolve(one, 0.1).coefficients[1] == pytest.approx(math.exp(-0.1 * PI2) / math.sqrt(2), rel=1e-15)


def test_evolve_rejects_negative_time():
    with pytest.raises(ValueError):
        evolve(_state(np.random.default_rng(1)), -1.0)


def test_evolve_infinite_eigenvalue_gives_zero():
    pairs = ordered_spectrum(1e-300, 3)
    # only n = 0 modes here; append an overflowed one by hand
    pairs = pairs + [EigenPair(ModeIndex(0, 10 ** 9), math.inf, 4)]
    s = SpectralState(1e-300, pairs, [1.0, 1.0, 1.0, 1.0], 4.0)
    out = evolve(s, 1e-3).coefficients
    assert out[-1] == 0.0 and np.all(np.isfinite(out))


@settings(max_examples=100)
@given(st.integers(0, 2 ** 32 - 1), st.floats(0, 10), st.floats(0, 10))
def test_semigroup_and_conservation(seed, t1, t2):
    s = _state(np.random.default_rng(seed))
    two = evolve(evolve(s, t1), t2).coefficients
    one = evolve(s, t1 + t2).coefficients
    np.testing.assert_array_max_ulp(two, one, maxulp=1)
    assert evolve(s, t1).coefficients[0] == s.coefficients[0]
    assert evolve(s, t1 + t2).energy() <= evolve(s, t1).energy() <= s.energy()


def test_strict_contraction_when_energy_off_kernel():
    s = _state(np.random.default_rng(3))
    assert evolve(s, 0.01).energy() < s.energy()


def _brute_truncation(eps, t, norm_bound, tol, n_modes=10_000):
    rows = brute_spectrum(eps, n_modes)
    terms = np.exp(-2 * t * np.array([r[0] for r in rows]))
    tails = np.append(np.cumsum(terms[::-1])[::-1], 0.0)
    for k in range(1, n_modes):
        if norm_bound * math.sqrt(tails[k]) <= tol:
            return k
    raise AssertionError("brute force did not converge")


def test_choose_truncation_examples():
    policy = TruncationPolicy(tol=1e-12)
    assert choose_truncation(0.5, 1.0, 1.0, policy) == 2
    assert _brute_truncation(0.5, 1.0, 1.0, 1e-12) == 2
    assert choose_truncation(0.3, 0.2, 0.0) == 1
    k = choose_truncation(0.1, 0.01, 1.0, TruncationPolicy(tol=1e-6))
    assert k == _brute_truncation(0.1, 0.01, 1.0, 1e-6)


@pytest.mark.parametrize("eps, t, tol", [(1.0, 0.05, 1e-10), (0.25, 0.001, 1e-8), (2.0, 0.3, 1e-12)])
def test_choose_truncation_matches_brute_force(eps, t, tol):
    assert choose_truncation(eps, t, 1.0, TruncationPolicy(tol=tol)) == _brute_truncation(eps, t, 1.0, tol)


def test_choose_truncation_rejects_small_t():
    with pytest.raises(ValueError):
        choose_truncation(0.5, 1e-8, 1.0)


def test_choose_truncation_warns_when_capped():
    with pytest.warns(TruncationWarning):
        k = choose_truncation(0.5, 1e-4, 1.0, TruncationPolicy(tol=1e-12, max_modes=10))
    assert k == 10


def test_partition_bound_dominates_sum():
    for eps, t in [(0.5, 0.1), (0.1, 0.01), (2.0, 1e-3)]:
        rows = brute_spectrum(eps, 20_000)
        assert sum(math.exp(-t * r[0]) for r in rows) <= lattice_partition_bound(eps, t)


def test_solve_examples():
    one = sample(lambda a, b: 1.0, 65, 65)
    np.testing.assert_allclose(solve(one, 0.3, 5.0).values, 1.0, atol=1e-14)
    f = sample(lambda a, b: np.cos(np.pi * a), 65, 65)
    assert np.max(np.abs(solve(f, 0.5, 0.1).values - math.exp(-0.1 * PI2) * f.values)) < 1e-8
    g = sample(lambda a, b: np.cos(np.pi * b), 65, 65)
    assert np.max(np.abs(solve(g, 0.5, 0.1).values - math.exp(-0.4 * PI2) * g.values)) < 1e-8


def test_solve_at_zero_returns_data():
    f = sample(lambda a, b: np.cos(2 * np.pi * a) * np.cos(np.pi * b) + 0.5, 65, 65)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        out = solve(f, 0.5, 0.0)
    assert np.max(np.abs(out.values - f.values)) < 1e-12


def test_solve_physical_examples():
    one = sample_physical(lambda x, y: 1.0, 0.5, 33, 33)
    np.testing.assert_allclose(solve_physical(one, 1.0).values, 1.0, atol=1e-14)
    u0 = sample_physical(lambda x, y: np.cos(np.pi * x), 0.5, 65, 65)
    out = solve_physical(u0, 0.1)
    assert out.domain_tag == "physical" and out.eps == 0.5
    assert np.max(np.abs(out.values - math.exp(-0.1 * PI2) * u0.values)) < 1e-8
    w0 = sample_physical(lambda x, y: np.cos(2 * np.pi * y / 0.5), 0.5, 65, 65)
    assert np.max(np.abs(solve_physical(w0, 0.05).values - math.exp(-0.05 * 16 * PI2) * w0.values)) < 1e-8


def test_solve_physical_matches_conjugated_solve():
    eps = 0.3
    u0 = sample_physical(lambda x, y: np.exp(-((x - 0.4) ** 2) / 0.02) * (1 + y / eps), eps, 65, 33)
    v0 = sample(lambda a, b: np.exp(-((a - 0.4) ** 2) / 0.02) * (1 + b), 65, 33)
    np.testing.assert_allclose(u0.values, v0.values, atol=1e-15)
    diff = solve_physical(u0, 0.02).values - solve(v0, eps, 0.02).values
    assert np.max(np.abs(diff)) < 1e-12


def test_solve_rejects_wrong_tags():
    u0 = sample_physical(lambda x, y: 1.0, 0.3, 5, 5)
    with pytest.raises(GridMismatchError):
        solve(u0, 0.3, 0.1)
    with pytest.raises(GridMismatchError):
        solve_physical(sample(lambda a, b: 1.0, 5, 5), 0.1)


@pytest.mark.parametrize("eps, t", [(0.5, 0.01), (0.2, 0.001), (1.0, 0.05)])
def test_truncation_certificate(eps, t):
    f = sample(lambda a, b: np.exp(-8 * (a - 0.3) ** 2 - 3 * (b - 0.6) ** 2), 129, 129)
    f = GridField(f.values / math.sqrt(inner_product(f, f)))
    policy = TruncationPolicy(tol=1e-8)
    k = truncation_for(f, eps, t, policy)
    a = reconstruct(evolve(project(f, eps, k), t), 129, 129)
    b = reconstruct(evolve(project(f, eps, 4 * k), t), 129, 129)
    d = GridField(a.values - b.values)
    assert math.sqrt(inner_product(d, d)) <= 2 * policy.tol


def test_policy_validation():
    with pytest.raises(ValueError):
        TruncationPolicy(tol=0)
    with pytest.raises(ValueError):
        TruncationPolicy(max_modes=0)
    with pytest.raises(ValueError):
        TruncationPolicy(t_floor=-1)
