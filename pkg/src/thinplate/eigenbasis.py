"""Closed-form Neumann eigenpairs of the rescaled thin-plate operator.

On the unit square the operator ``-d²/dx1² - eps**-2 d²/dx2²`` with
homogeneous Neumann conditions has eigenvalues ``pi²(m² + n²/eps²)`` and
orthonormal eigenfunctions ``a_mn cos(m pi x1) cos(n pi x2)`` for all
integers ``m, n >= 0``.  The physical plate ``(0,1) x (0,eps)`` carries the
same eigenvalues with eigenfunctions rescaled in ``y`` and by ``eps**-1/2``.
"""

import heapq
import math
from dataclasses import dataclass
from typing import Iterator, List, Union

import numpy as np

from ._validation import check_positive_int, check_positive_real

PI2 = math.pi ** 2


@dataclass(frozen=True, order=True)
class ModeIndex:
    """Lattice index ``(m, n)``; orders lexicographically."""

    m: int
    n: int

    def __post_init__(self):
        for name in ("m", "n"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 0:
                raise ValueError(f"mode index {name} must be a nonnegative integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    def __iter__(self):
        yield self.m
        yield self.n


@dataclass(frozen=True)
class Epsilon:
    """Plate thickness; also the anisotropy parameter of the rescaled operator."""

    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", check_positive_real(self.value, "eps"))

    def __float__(self):
        return self.value


EpsLike = Union[Epsilon, float]
ModeLike = Union[ModeIndex, tuple]


def as_eps(eps: EpsLike) -> float:
    if isinstance(eps, Epsilon):
        return eps.value
    return Epsilon(eps).value


def as_mode(mode: ModeLike) -> ModeIndex:
    if isinstance(mode, ModeIndex):
        return mode
    m, n = mode
    return ModeIndex(m, n)


@dataclass(frozen=True)
class EigenPair:
    mode: ModeIndex
    lam: float
    rank: int  # 1-based position in the sorted spectrum

    @property
    def m(self):
        return self.mode.m

    @property
    def n(self):
        return self.mode.n


def norm_const(mode: ModeLike) -> float:
    """Normalisation factor ``a_mn`` making the cosine products orthonormal."""
    m, n = as_mode(mode)
    zeros = (m == 0) + (n == 0)
    if zeros == 2:
        return 1.0
    if zeros == 1:
        return math.sqrt(2.0)
    return 2.0


def _eigenvalue(m: int, n: int, eps: float) -> float:
    # n/eps before squaring: float ** 2 raises on overflow, float * float gives inf
    q = n / eps
    return PI2 * (m * m + q * q)


def eigenvalue(mode: ModeLike, eps: EpsLike) -> float:
    m, n = as_mode(mode)
    return _eigenvalue(m, n, as_eps(eps))


def eigenfunction_rescaled(mode: ModeLike, x1, x2):
    """Evaluate ``a_mn cos(m pi x1) cos(n pi x2)``; broadcasts over arrays."""
    mode = as_mode(mode)
    out = norm_const(mode) * np.cos(mode.m * np.pi * np.asarray(x1, dtype=float)) * np.cos(
        mode.n * np.pi * np.asarray(x2, dtype=float)
    )
    return float(out) if np.ndim(out) == 0 else out


def eigenfunction_physical(mode: ModeLike, eps: EpsLike, x, y):
    """Orthonormal eigenfunction on the physical plate ``(0,1) x (0,eps)``."""
    mode = as_mode(mode)
    eps = as_eps(eps)
    out = (
        norm_const(mode)
        / math.sqrt(eps)
        * np.cos(mode.m * np.pi * np.asarray(x, dtype=float))
        * np.cos(mode.n * np.pi * (np.asarray(y, dtype=float) / eps))
    )
    return float(out) if np.ndim(out) == 0 else out


def iter_spectrum(eps: EpsLike) -> Iterator[EigenPair]:
    """Yield eigenpairs in nondecreasing order, ties broken by ``(m, n)``.

    Lazy best-first walk over the lattice.  Eigenvalues increase in both
    ``m`` and ``n``, so every unvisited node has a predecessor on the
    frontier with a smaller key, and popping the heap minimum is the next
    entry of the global sorted order.
    """
    eps = as_eps(eps)
    heap = [(0.0, 0, 0)]
    seen = {(0, 0)}
    rank = 0
    while heap:
        lam, m, n = heapq.heappop(heap)
        rank += 1
        yield EigenPair(ModeIndex(m, n), lam, rank)
        for nxt in ((m + 1, n), (m, n + 1)):
            if nxt not in seen:
                seen.add(nxt)
                heapq.heappush(heap, (_eigenvalue(nxt[0], nxt[1], eps), *nxt))


def ordered_spectrum(eps: EpsLike, count: int) -> List[EigenPair]:
    """The first ``count`` eigenpairs of the sorted spectrum."""
    count = check_positive_int(count, "count")
    out = []
    for pair in iter_spectrum(eps):
        out.append(pair)
        if len(out) == count:
            break
    return out
