"""Sampled fields on the unit square and their eigenbasis expansions.

Fields are stored on uniform closed-square grids with odd node counts so
that composite Simpson quadrature applies in each direction.  Projection
onto the ordered Neumann eigenbasis uses the separable structure of the
eigenfunctions: one cosine table per direction.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from ._validation import GridMismatchError, check_odd_count, check_positive_int
from .eigenbasis import EigenPair, EpsLike, as_eps, iter_spectrum, norm_const, ordered_spectrum
from .fields import PHYSICAL, REFERENCE, GridField, _readonly, sample, sample_physical  # noqa: F401

DEFAULT_GRID = 129


def simpson_weights(n: int) -> np.ndarray:
    """Composite Simpson weights for ``n`` (odd) uniform nodes on [0, 1]."""
    n = check_odd_count(n, "node count")
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w / (3.0 * (n - 1))


def _check_compatible(f: GridField, g: GridField):
    if f.shape != g.shape:
        raise GridMismatchError(f"grid shapes differ: {f.shape} vs {g.shape}")
    if f.domain_tag != g.domain_tag or f.eps != g.eps:
        raise GridMismatchError(
            f"domain tags differ: {f.domain_tag}({f.eps}) vs {g.domain_tag}({g.eps})"
        )


def inner_product(f: GridField, g: GridField) -> float:
    """L² inner product by tensor Simpson quadrature.

    Physical fields integrate over ``(0,1) x (0,eps)``, picking up the
    Jacobian ``eps``.
    """
    _check_compatible(f, g)
    w1 = simpson_weights(f.nx1)
    w2 = simpson_weights(f.nx2)
    val = float(w1 @ (f.values * g.values) @ w2)
    if f.domain_tag == PHYSICAL:
        val *= f.eps
    return val


def l2_norm(f: GridField) -> float:
    return math.sqrt(max(inner_product(f, f), 0.0))


@dataclass(frozen=True, eq=False)
class SpectralState:
    """Truncated expansion of a field in the ordered eigenbasis.

    ``coefficients`` are the values at time ``t``; ``initial_coefficients``
    keep the data the semigroup acts on, so repeated evolution is evaluated
    from elapsed time rather than by compounding decay factors.
    """

    eps: float
    eigenpairs: Tuple[EigenPair, ...]
    coefficients: np.ndarray
    source_norm_sq: float
    t: float = 0.0
    initial_coefficients: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "eps", as_eps(self.eps))
        object.__setattr__(self, "eigenpairs", tuple(self.eigenpairs))
        coef = _readonly(np.asarray(self.coefficients, dtype=float).reshape(-1))
        if coef.shape[0] != len(self.eigenpairs):
            raise ValueError(
                f"{coef.shape[0]} coefficients for {len(self.eigenpairs)} eigenpairs"
            )
        object.__setattr__(self, "coefficients", coef)
        init = coef if self.initial_coefficients is None else _readonly(self.initial_coefficients)
        if init.shape != coef.shape:
            raise ValueError("initial_coefficients shape does not match coefficients")
        object.__setattr__(self, "initial_coefficients", init)

    @property
    def truncation_count(self):
        return len(self.eigenpairs)

    @property
    def lambdas(self):
        return np.array([p.lam for p in self.eigenpairs], dtype=float)

    @property
    def modes(self):
        return [p.mode for p in self.eigenpairs]

    @property
    def pairs(self):
        return list(zip(self.eigenpairs, self.coefficients.tolist()))

    def energy(self) -> float:
        """Sum of squared coefficients."""
        return float(np.dot(self.coefficients, self.coefficients))


def cosine_table(kmax: int, nodes: np.ndarray) -> np.ndarray:
    """Rows ``cos(k pi x)`` for ``k = 0..kmax`` evaluated at ``nodes``."""
    k = np.arange(kmax + 1)[:, None]
    return np.cos(k * np.pi * nodes[None, :])


def _mode_arrays(pairs: Sequence[EigenPair]):
    m = np.array([p.mode.m for p in pairs], dtype=int)
    n = np.array([p.mode.n for p in pairs], dtype=int)
    a = np.array([norm_const(p.mode) for p in pairs])
    return m, n, a


def project_onto(f: GridField, eps: EpsLike, pairs: Sequence[EigenPair]) -> SpectralState:
    """Coefficients of ``f`` against a given list of eigenpairs."""
    if f.domain_tag != REFERENCE:
        raise GridMismatchError("project expects a reference-square field")
    pairs = list(pairs)
    x1, x2 = f.nodes()
    if pairs:
        m, n, a = _mode_arrays(pairs)
        c1 = cosine_table(m.max(), x1) * simpson_weights(f.nx1)
        c2 = cosine_table(n.max(), x2) * simpson_weights(f.nx2)
        # only the (m, n) columns of c1 @ f @ c2.T are needed
        rows = c1[m] @ f.values
        coef = a * np.einsum("kj,kj->k", rows, c2[n])
    else:
        coef = np.zeros(0)
    return SpectralState(as_eps(eps), pairs, coef, inner_product(f, f))


def project(f: GridField, eps: EpsLike, count: int) -> SpectralState:
    """Expand ``f`` in the first ``count`` ordered eigenfunctions."""
    return project_onto(f, eps, ordered_spectrum(eps, count))


def reconstruct(state: SpectralState, nx1: int = DEFAULT_GRID, nx2: int = DEFAULT_GRID) -> GridField:
    """Evaluate the truncated series at the grid nodes."""
    nx1 = check_odd_count(nx1, "nx1")
    nx2 = check_odd_count(nx2, "nx2")
    if state.truncation_count == 0:
        return GridField(np.zeros((nx1, nx2)))
    m, n, a = _mode_arrays(state.eigenpairs)
    weights = np.zeros((m.max() + 1, n.max() + 1))
    np.add.at(weights, (m, n), a * state.coefficients)
    c1 = cosine_table(m.max(), np.linspace(0.0, 1.0, nx1))
    c2 = cosine_table(n.max(), np.linspace(0.0, 1.0, nx2))
    return GridField(c1.T @ weights @ c2)


def parseval_defect(f: GridField, state: SpectralState) -> float:
    """``max(0, ||f||² - sum c²)``: energy the truncated expansion misses."""
    return max(0.0, state.source_norm_sq - state.energy())


def band_limit(nx: int) -> int:
    """Largest frequency whose cosine products Simpson integrates exactly.

    Composite Simpson on ``nx`` nodes integrates ``cos(k pi x)`` exactly for
    ``k < nx - 1``, so modes up to ``(nx - 3) // 2`` stay orthonormal.
    """
    return (check_odd_count(nx, "node count") - 3) // 2


def resolvable_count(eps: EpsLike, nx1: int, nx2: int, cap: Optional[int] = None) -> int:
    """Length of the longest ordered prefix that stays inside the grid band."""
    mmax, nmax = band_limit(nx1), band_limit(nx2)
    if cap is not None:
        cap = check_positive_int(cap, "cap")
    count = 0
    for pair in iter_spectrum(eps):
        if pair.mode.m > mmax or pair.mode.n > nmax or (cap is not None and count >= cap):
            break
        count += 1
    return max(count, 1)
