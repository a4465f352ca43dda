"""Input validation helpers shared by the solver modules."""

import math
import numbers

import numpy as np


class NonFiniteValueError(FloatingPointError):
    """A field sample or computed value is NaN or infinite."""


class GridMismatchError(ValueError):
    """Two fields live on incompatible grids or domains."""


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_odd_count(value, name):
    value = check_positive_int(value, name, minimum=3)
    if value % 2 == 0:
        raise ValueError(f"{name} must be odd for Simpson quadrature, got {value}")
    return value


def check_positive_real(value, name):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be positive and finite, got {value}")
    return value


def check_time(t, name="t"):
    try:
        t = float(t)
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be a real number, got {t!r}") from None
    if not math.isfinite(t) or t < 0.0:
        raise ValueError(f"{name} must be nonnegative and finite, got {t}")
    return t


def check_finite_array(values, what="field"):
    """Raise NonFiniteValueError naming the first offending node."""
    values = np.asarray(values, dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        idx = tuple(int(i) for i in np.argwhere(bad)[0])
        raise NonFiniteValueError(
            f"non-finite {what} value {values[idx]!r} at node {idx}"
        )
    return values
