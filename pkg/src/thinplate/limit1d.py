"""The one-dimensional limit problem on (0, 1) and its embedding in the square.

As the plate thins, every eigenvalue with a transverse frequency blows up
and the sorted spectrum settles onto ``pi² (n-1)²``, the Neumann spectrum
of ``-d²/dx²`` on the unit interval.  Eigenfunctions are indexed so that
``n = 1`` is the constant mode.
"""

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._validation import GridMismatchError, check_finite_array, check_odd_count, check_positive_int, check_time
from .eigenbasis import PI2
from .evolution import DEFAULT_POLICY, TruncationPolicy, TruncationWarning
from .projection import REFERENCE, GridField, band_limit, simpson_weights


@dataclass(frozen=True, eq=False)
class GridField1D:
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError(f"1-D field values must be a vector, got shape {values.shape}")
        check_odd_count(values.shape[0], "nx")
        check_finite_array(values)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def nx(self):
        return self.values.shape[0]

    def nodes(self):
        return np.linspace(0.0, 1.0, self.nx)


def sample1d(f: Callable, nx: int) -> GridField1D:
    nx = check_odd_count(nx, "nx")
    x = np.linspace(0.0, 1.0, nx)
    try:
        vals = np.asarray(f(x), dtype=float)
    except TypeError:
        vals = np.vectorize(f, otypes=[float])(x)
    return GridField1D(np.broadcast_to(vals, x.shape).copy())


def inner_product1d(u: GridField1D, v: GridField1D) -> float:
    if u.nx != v.nx:
        raise GridMismatchError(f"node counts differ: {u.nx} vs {v.nx}")
    return float(simpson_weights(u.nx) @ (u.values * v.values))


def eigenvalue1d(n: int) -> float:
    """``pi² (n-1)²`` for the 1-based index ``n``."""
    n = check_positive_int(n, "n")
    return PI2 * float((n - 1) * (n - 1))


def eigenfunction1d(n: int, x):
    """Normalised Neumann eigenfunction: 1 for ``n = 1``, else ``sqrt(2) cos((n-1) pi x)``."""
    n = check_positive_int(n, "n")
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x) if n == 1 else math.sqrt(2.0) * np.cos((n - 1) * np.pi * x)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class SpectralState1D:
    """Coefficients on modes ``n = 1..K`` of the limit problem."""

    coefficients: np.ndarray
    source_norm_sq: float
    t: float = 0.0
    initial_coefficients: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        coef = np.array(self.coefficients, dtype=float).reshape(-1)
        coef.setflags(write=False)
        object.__setattr__(self, "coefficients", coef)
        init = coef if self.initial_coefficients is None else np.array(self.initial_coefficients, dtype=float)
        init.setflags(write=False)
        object.__setattr__(self, "initial_coefficients", init)

    @property
    def truncation_count(self):
        return self.coefficients.shape[0]

    @property
    def indices(self):
        return np.arange(1, self.truncation_count + 1)

    @property
    def lambdas(self):
        return np.array([eigenvalue1d(int(n)) for n in self.indices])

    @property
    def pairs(self):
        return list(zip(self.indices.tolist(), self.lambdas.tolist(), self.coefficients.tolist()))


def _basis(count, x):
    k = np.arange(count)[:, None]
    table = np.cos(k * np.pi * x[None, :])
    table[1:] *= math.sqrt(2.0)
    return table


def project1d(v0: GridField1D, count: int) -> SpectralState1D:
    count = check_positive_int(count, "count")
    w = simpson_weights(v0.nx)
    coef = _basis(count, v0.nodes()) @ (w * v0.values)
    return SpectralState1D(coef, inner_product1d(v0, v0))


def reconstruct1d(state: SpectralState1D, nx: int) -> GridField1D:
    nx = check_odd_count(nx, "nx")
    if state.truncation_count == 0:
        return GridField1D(np.zeros(nx))
    x = np.linspace(0.0, 1.0, nx)
    return GridField1D(state.coefficients @ _basis(state.truncation_count, x))


def evolve_state1d(state: SpectralState1D, t: float) -> SpectralState1D:
    t = check_time(t)
    if t == 0.0:
        return state
    total = state.t + t
    coef = state.initial_coefficients * np.exp(-total * state.lambdas)
    return SpectralState1D(coef, state.source_norm_sq, total, state.initial_coefficients)


def choose_truncation1d(t: float, norm_bound: float, policy: TruncationPolicy = DEFAULT_POLICY) -> int:
    """Smallest ``K`` whose tail ``sum_{j>=K} exp(-2 t pi² j²)`` meets the tolerance.

    The tail is bounded by its first term over ``1 - r`` where ``r`` is the
    largest ratio of consecutive terms.
    """
    t = check_time(t)
    if norm_bound == 0.0:
        return 1
    if t == 0.0 or t < policy.t_floor:
        raise ValueError(f"t={t} is below t_floor={policy.t_floor}; use the Parseval-defect criterion")
    budget = (policy.tol / norm_bound) ** 2
    a = 2.0 * t * PI2
    for k in range(1, policy.max_modes + 1):
        ratio = math.exp(-a * (2 * k + 1))
        if math.exp(-a * k * k) / (1.0 - ratio) <= budget:
            return k
    warnings.warn(
        f"tail tolerance {policy.tol:g} not certified within {policy.max_modes} modes (t={t})",
        TruncationWarning,
        stacklevel=2,
    )
    return policy.max_modes


def evolve1d(v0: GridField1D, t: float, policy: TruncationPolicy = DEFAULT_POLICY) -> GridField1D:
    """Solve ``v_t = v_xx`` on (0, 1) with Neumann ends, starting from ``v0``."""
    t = check_time(t)
    cap = min(band_limit(v0.nx) + 1, policy.max_modes)
    if t == 0.0 or t < policy.t_floor:
        state = project1d(v0, cap)
        energy = np.cumsum(state.coefficients ** 2)
        threshold = max(policy.tol ** 2, 8.0 * np.finfo(float).eps * state.source_norm_sq)
        ok = np.nonzero(state.source_norm_sq - energy <= threshold)[0]
        if ok.size:
            count = int(ok[0]) + 1
        else:
            warnings.warn(f"Parseval defect above {threshold:g} with {cap} modes", TruncationWarning, stacklevel=2)
            count = cap
    else:
        count = choose_truncation1d(t, math.sqrt(max(0.0, inner_product1d(v0, v0))), policy)
        if count > cap:
            warnings.warn(
                f"{count} modes needed but {v0.nx} nodes resolve only {cap}", TruncationWarning, stacklevel=2
            )
            count = cap
    return reconstruct1d(evolve_state1d(project1d(v0, count), t), v0.nx)


def embed(u: GridField1D, nx2: int) -> GridField:
    """Extend ``u`` to the square as a field constant in ``x2``."""
    nx2 = check_odd_count(nx2, "nx2")
    return GridField(np.repeat(u.values[:, None], nx2, axis=1))


def vertical_average(f: GridField) -> GridField1D:
    """Simpson average over ``x2``: the L² projection onto ``x2``-independent fields."""
    if f.domain_tag != REFERENCE:
        raise GridMismatchError("vertical_average expects a reference-square field")
    return GridField1D(f.values @ simpson_weights(f.nx2))
