"""Finite-difference reference solver for the rescaled Neumann heat problem.

Peaceman-Rachford ADI on the node-centred grid of the closed unit square.
The Neumann condition enters through mirrored ghost nodes, which keeps the
scheme second order and conserves the trapezoidal integral exactly.  This
module deliberately shares no code with the spectral solver.
"""

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from ._validation import NonFiniteValueError, check_positive_int, check_positive_real
from .fields import REFERENCE, GridField


@dataclass(frozen=True)
class FDConfig:
    dt: float = 1e-4
    nx1: Optional[int] = None
    nx2: Optional[int] = None
    scheme: str = "adi"

    def __post_init__(self):
        check_positive_real(self.dt, "dt")
        for name in ("nx1", "nx2"):
            if getattr(self, name) is not None:
                check_positive_int(getattr(self, name), name, minimum=3)
        if self.scheme != "adi":
            raise ValueError(f"only the 'adi' scheme is available, got {self.scheme!r}")


def neumann_second_difference(u: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Three-point second difference along ``axis`` with mirrored ghosts."""
    u = np.moveaxis(u, axis, 0)
    out = np.empty_like(u)
    out[1:-1] = u[:-2] - 2.0 * u[1:-1] + u[2:]
    out[0] = 2.0 * (u[1] - u[0])
    out[-1] = 2.0 * (u[-2] - u[-1])
    return np.moveaxis(out / (h * h), 0, axis)


class _TridiagonalSolver:
    """Thomas elimination for ``(I - r D)`` with ``D`` the mirrored Laplacian stencil.

    The forward sweep factors depend only on the matrix and are computed once.
    """

    def __init__(self, n: int, r: float):
        lower = np.full(n, -r)
        diag = np.full(n, 1.0 + 2.0 * r)
        upper = np.full(n, -r)
        upper[0] = -2.0 * r
        lower[-1] = -2.0 * r
        lower[0] = upper[-1] = 0.0
        cprime = np.empty(n)
        denom = np.empty(n)
        denom[0] = diag[0]
        cprime[0] = upper[0] / denom[0]
        for i in range(1, n):
            denom[i] = diag[i] - lower[i] * cprime[i - 1]
            assert denom[i] != 0.0, "singular tridiagonal system"
            cprime[i] = upper[i] / denom[i]
        self.lower, self.cprime, self.denom = lower, cprime, denom

    def solve(self, rhs: np.ndarray, axis: int) -> np.ndarray:
        d = np.moveaxis(rhs, axis, 0).copy()
        n = d.shape[0]
        d[0] /= self.denom[0]
        for i in range(1, n):
            d[i] = (d[i] - self.lower[i] * d[i - 1]) / self.denom[i]
        for i in range(n - 2, -1, -1):
            d[i] -= self.cprime[i] * d[i + 1]
        return np.moveaxis(d, 0, axis)


def adi_steps(values: np.ndarray, eps: float, dt: float, nsteps: int) -> Iterator[np.ndarray]:
    """Yield the field after each of ``nsteps`` full Peaceman-Rachford steps."""
    u = np.array(values, dtype=float)
    n1, n2 = u.shape
    h1, h2 = 1.0 / (n1 - 1), 1.0 / (n2 - 1)
    k2 = 1.0 / (eps * eps)
    implicit1 = _TridiagonalSolver(n1, 0.5 * dt / (h1 * h1))
    implicit2 = _TridiagonalSolver(n2, 0.5 * dt * k2 / (h2 * h2))
    for _ in range(nsteps):
        half = implicit1.solve(u + 0.5 * dt * k2 * neumann_second_difference(u, h2, 1), axis=0)
        u = implicit2.solve(half + 0.5 * dt * neumann_second_difference(half, h1, 0), axis=1)
        if not np.all(np.isfinite(u)):
            raise NonFiniteValueError("ADI step produced non-finite values")
        yield u


def adi_solve(values: np.ndarray, eps: float, t: float, dt: float) -> np.ndarray:
    """Integrate to time ``t``; a trailing partial step uses the leftover time."""
    eps = check_positive_real(eps, "eps")
    dt = check_positive_real(dt, "dt")
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    u = np.array(values, dtype=float)
    if u.ndim != 2 or min(u.shape) < 3:
        raise ValueError(f"need a 2-D grid with at least 3 nodes per direction, got {u.shape}")
    nsteps = int(math.floor(t / dt + 1e-9))
    rest = t - nsteps * dt
    for u in adi_steps(u, eps, dt, nsteps):
        pass
    if rest > 1e-12 * dt:
        for u in adi_steps(u, eps, rest, 1):
            pass
    return u


def fd_solve(v0: GridField, eps: float, t: float, cfg: FDConfig = FDConfig()) -> GridField:
    if v0.domain_tag != REFERENCE:
        raise ValueError("fd_solve works on the reference square")
    if (cfg.nx1 is not None and cfg.nx1 != v0.nx1) or (cfg.nx2 is not None and cfg.nx2 != v0.nx2):
        raise ValueError(f"config grid {cfg.nx1}x{cfg.nx2} does not match field {v0.nx1}x{v0.nx2}")
    return GridField(adi_solve(v0.values, eps, t, cfg.dt))


def trapezoid_weights(n: int) -> np.ndarray:
    w = np.full(n, 1.0 / (n - 1))
    w[0] = w[-1] = 0.5 / (n - 1)
    return w


def fd_mean(f) -> float:
    """Trapezoidal mean over the unit square."""
    v = f.values if isinstance(f, GridField) else np.asarray(f, dtype=float)
    return float(trapezoid_weights(v.shape[0]) @ v @ trapezoid_weights(v.shape[1]))


def discrete_l2(f, g=None) -> float:
    """Trapezoid-weighted L² norm of ``f`` (or of ``f - g``)."""
    v = f.values if isinstance(f, GridField) else np.asarray(f, dtype=float)
    if g is not None:
        v = v - (g.values if isinstance(g, GridField) else np.asarray(g, dtype=float))
    return math.sqrt(float(trapezoid_weights(v.shape[0]) @ (v * v) @ trapezoid_weights(v.shape[1])))
