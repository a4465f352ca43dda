"""Scalar fields sampled on uniform closed grids over the unit square or a plate."""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ._validation import check_finite_array, check_odd_count, check_positive_real

REFERENCE = "reference"
PHYSICAL = "physical"


def _readonly(values):
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class GridField:
    """Samples on the uniform grid ``x1_i = i/(nx1-1)``, ``x2_j = j/(nx2-1)``.

    Physical fields carry ``eps``; their second coordinate is ``y = eps * x2``.
    """

    values: np.ndarray
    domain_tag: str = REFERENCE
    eps: Optional[float] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError(f"field values must be 2-D, got shape {values.shape}")
        check_odd_count(values.shape[0], "nx1")
        check_odd_count(values.shape[1], "nx2")
        check_finite_array(values)
        object.__setattr__(self, "values", _readonly(values))
        if self.domain_tag == REFERENCE:
            if self.eps is not None:
                raise ValueError("reference-square fields do not carry eps")
        elif self.domain_tag == PHYSICAL:
            if self.eps is None:
                raise ValueError("physical fields must record eps")
            object.__setattr__(self, "eps", check_positive_real(self.eps, "eps"))
        else:
            raise ValueError(f"unknown domain_tag {self.domain_tag!r}")

    @property
    def nx1(self):
        return self.values.shape[0]

    @property
    def nx2(self):
        return self.values.shape[1]

    @property
    def shape(self):
        return self.values.shape

    def nodes(self):
        """Node coordinates ``(x1, x2)`` on the reference square."""
        return np.linspace(0.0, 1.0, self.nx1), np.linspace(0.0, 1.0, self.nx2)

    def with_values(self, values):
        return GridField(values, self.domain_tag, self.eps)


def _evaluate(f, a, b):
    try:
        out = np.asarray(f(a, b), dtype=float)
    except TypeError:
        out = np.vectorize(f, otypes=[float])(a, b)
    return np.broadcast_to(out, a.shape).copy()


def sample(f: Callable, nx1: int, nx2: int) -> GridField:
    """Sample ``f(x1, x2)`` on the reference square.

    ``f`` is called with broadcast node arrays; scalar-only callables are
    vectorised as a fallback.
    """
    nx1 = check_odd_count(nx1, "nx1")
    nx2 = check_odd_count(nx2, "nx2")
    x1, x2 = np.meshgrid(np.linspace(0.0, 1.0, nx1), np.linspace(0.0, 1.0, nx2), indexing="ij")
    return GridField(_evaluate(f, x1, x2))


def sample_physical(f: Callable, eps: float, nx: int, ny: int) -> GridField:
    """Sample ``f(x, y)`` on the closed plate ``[0,1] x [0,eps]``."""
    eps = check_positive_real(eps, "eps")
    nx = check_odd_count(nx, "nx1")
    ny = check_odd_count(ny, "nx2")
    x, y = np.meshgrid(np.linspace(0.0, 1.0, nx), eps * np.linspace(0.0, 1.0, ny), indexing="ij")
    return GridField(_evaluate(f, x, y), PHYSICAL, eps)
