"""Heat semigroup on the rescaled plate via the eigenfunction series.

The solution of ``v_t = v_x1x1 + eps**-2 v_x2x2`` with Neumann conditions is
``sum exp(-t lam_k) <v0, v_k> v_k``.  The series is truncated at the
smallest count whose L² tail is certified below a tolerance.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._validation import GridMismatchError, check_positive_int, check_positive_real, check_time
from .eigenbasis import EpsLike, as_eps, iter_spectrum
from .projection import (
    PHYSICAL,
    REFERENCE,
    GridField,
    SpectralState,
    inner_product,
    project,
    reconstruct,
    resolvable_count,
)

# stop enumerating once the analytic remainder is this fraction of the budget
_REMAINDER_FRACTION = 1e-2
_ENUMERATION_FACTOR = 4


class TruncationWarning(UserWarning):
    """The requested tail tolerance could not be certified."""


@dataclass(frozen=True)
class TruncationPolicy:
    tol: float = 1e-10
    max_modes: int = 4096
    t_floor: float = 1e-6

    def __post_init__(self):
        check_positive_real(self.tol, "tol")
        check_positive_int(self.max_modes, "max_modes")
        t_floor = check_time(self.t_floor, "t_floor")
        object.__setattr__(self, "t_floor", t_floor)


DEFAULT_POLICY = TruncationPolicy()


def _decay(lambdas, t):
    if t == 0.0:
        return np.ones_like(lambdas)
    # lam = inf gives exp(-inf) = 0
    return np.exp(-t * lambdas)


def evolve(state: SpectralState, t: float) -> SpectralState:
    """Advance a spectral state by time ``t``.

    Coefficients are always recomputed from the state's initial data at the
    total elapsed time, so ``evolve(evolve(s, a), b)`` and
    ``evolve(s, a + b)`` agree exactly when the float sums agree.
    """
    t = check_time(t)
    if t == 0.0:
        return state
    total = state.t + t
    coef = state.initial_coefficients * _decay(state.lambdas, total)
    return SpectralState(
        state.eps,
        state.eigenpairs,
        coef,
        state.source_norm_sq,
        t=total,
        initial_coefficients=state.initial_coefficients,
    )


def _theta_bound(a: float) -> float:
    # sum_{k>=0} exp(-a k²) <= 1 + integral_0^inf exp(-a x²) dx
    if math.isinf(a):
        return 1.0
    return 1.0 + 0.5 * math.sqrt(math.pi / a)


def lattice_partition_bound(eps: EpsLike, t: float) -> float:
    """Upper bound on ``sum over all modes of exp(-t lam_mn)``."""
    eps = as_eps(eps)
    a1 = t * math.pi ** 2
    a2 = a1 / (eps * eps)
    return _theta_bound(a1) * _theta_bound(a2)


def choose_truncation(
    eps: EpsLike, t: float, norm_bound: float, policy: TruncationPolicy = DEFAULT_POLICY
) -> int:
    """Smallest ``K`` with ``norm_bound * sqrt(sum_{k>K} exp(-2 t lam_k)) <= tol``.

    The tail is summed explicitly over the ordered spectrum and closed off
    with the bound ``exp(-t lam_{J+1}) * Z(t)``, valid because every mode
    past ``J`` has ``lam >= lam_{J+1}``.  Returns ``max_modes`` with a
    :class:`TruncationWarning` when the tolerance cannot be met.
    """
    eps = as_eps(eps)
    t = check_time(t)
    if norm_bound < 0 or not math.isfinite(norm_bound):
        raise ValueError(f"norm_bound must be finite and nonnegative, got {norm_bound}")
    if norm_bound == 0.0:
        return 1
    if t == 0.0 or t < policy.t_floor:
        raise ValueError(
            f"t={t} is below t_floor={policy.t_floor}; use the Parseval-defect criterion"
        )
    budget = (policy.tol / norm_bound) ** 2
    z = lattice_partition_bound(eps, t)
    terms = []
    remainder = z
    limit = _ENUMERATION_FACTOR * policy.max_modes
    for pair in iter_spectrum(eps):
        remainder = math.exp(-t * pair.lam) * z
        if remainder <= _REMAINDER_FRACTION * budget or len(terms) >= limit:
            break
        terms.append(math.exp(-2.0 * t * pair.lam))
    terms = np.asarray(terms)
    # tails[K] = sum of terms with rank > K, smallest terms summed first
    tails = np.append(np.cumsum(terms[::-1])[::-1], 0.0) + remainder
    upto = min(len(terms), policy.max_modes)
    ok = np.nonzero(tails[1 : upto + 1] <= budget)[0]
    if ok.size:
        return int(ok[0]) + 1
    warnings.warn(
        f"tail tolerance {policy.tol:g} not certified within {policy.max_modes} modes "
        f"(eps={eps}, t={t})",
        TruncationWarning,
        stacklevel=2,
    )
    return policy.max_modes


def _parseval_count(v0: GridField, eps: float, cap: int, tol: float) -> int:
    state = project(v0, eps, cap)
    energy = np.cumsum(state.coefficients ** 2)
    # defects below the rounding floor of ||v0||² are indistinguishable from 0
    threshold = max(tol * tol, 8.0 * np.finfo(float).eps * state.source_norm_sq)
    ok = np.nonzero(state.source_norm_sq - energy <= threshold)[0]
    if ok.size:
        return int(ok[0]) + 1
    warnings.warn(
        f"Parseval defect above {threshold:g} with all {cap} resolvable modes",
        TruncationWarning,
        stacklevel=3,
    )
    return cap


def truncation_for(v0: GridField, eps: EpsLike, t: float, policy: TruncationPolicy = DEFAULT_POLICY) -> int:
    """Mode count ``solve`` uses for this field, time and policy."""
    eps = as_eps(eps)
    t = check_time(t)
    cap = resolvable_count(eps, v0.nx1, v0.nx2, cap=policy.max_modes)
    if t == 0.0 or t < policy.t_floor:
        return _parseval_count(v0, eps, cap, policy.tol)
    norm = math.sqrt(max(0.0, inner_product(v0, v0)))
    count = choose_truncation(eps, t, norm, policy)
    if count > cap:
        warnings.warn(
            f"{count} modes needed but the {v0.nx1}x{v0.nx2} grid resolves only {cap}",
            TruncationWarning,
            stacklevel=2,
        )
        count = cap
    return count


def solve(v0: GridField, eps: EpsLike, t: float, policy: TruncationPolicy = DEFAULT_POLICY) -> GridField:
    """Solution of the rescaled Neumann heat problem at time ``t``."""
    if v0.domain_tag != REFERENCE:
        raise GridMismatchError("solve expects a reference-square field; use solve_physical")
    eps = as_eps(eps)
    t = check_time(t)
    count = truncation_for(v0, eps, t, policy)
    state = evolve(project(v0, eps, count), t)
    return reconstruct(state, v0.nx1, v0.nx2)


def solve_physical(u0: GridField, t: float, policy: TruncationPolicy = DEFAULT_POLICY) -> GridField:
    """Heat flow on the physical plate ``(0,1) x (0,eps)``.

    Uniform grids on the plate and on the unit square correspond node for
    node under ``(x1, x2) -> (x1, eps x2)``, so pulling back and pushing
    forward only relabels the samples.
    """
    if u0.domain_tag != PHYSICAL:
        raise GridMismatchError("solve_physical expects a physical(eps) field")
    pulled = GridField(u0.values)
    out = solve(pulled, u0.eps, t, policy)
    return GridField(out.values, PHYSICAL, u0.eps)
