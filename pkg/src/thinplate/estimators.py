"""scikit-learn style wrappers around the spectral machinery.

Fields go in as arrays of shape ``(n_samples, nx1 * nx2)`` (or a single
``(nx1, nx2)`` grid), so the projector drops into a ``Pipeline`` next to
ordinary transformers.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import check_odd_count, check_positive_int, check_time
from .eigenbasis import as_eps, ordered_spectrum
from .evolution import TruncationPolicy, evolve, truncation_for
from .fields import GridField
from .projection import SpectralState, project, project_onto, reconstruct


def _as_fields(X, grid_shape):
    X = np.asarray(X, dtype=float)
    if X.ndim == 2 and X.shape == tuple(grid_shape):
        X = X.reshape(1, -1)
    X = check_array(X)
    nx1, nx2 = grid_shape
    if X.shape[1] != nx1 * nx2:
        raise ValueError(f"expected {nx1 * nx2} features for a {nx1}x{nx2} grid, got {X.shape[1]}")
    return [GridField(row.reshape(nx1, nx2)) for row in X]


class SpectralProjector(TransformerMixin, BaseEstimator):
    """Map sampled fields to coefficients in the first ``n_modes`` eigenfunctions."""

    def __init__(self, eps=1.0, n_modes=16, grid_shape=(65, 65)):
        self.eps = eps
        self.n_modes = n_modes
        self.grid_shape = grid_shape

    def fit(self, X=None, y=None):
        as_eps(self.eps)
        check_positive_int(self.n_modes, "n_modes")
        nx1, nx2 = (check_odd_count(n, "grid size") for n in self.grid_shape)
        if X is not None:
            _as_fields(X, (nx1, nx2))
        self.eigenpairs_ = tuple(ordered_spectrum(self.eps, self.n_modes))
        self.eigenvalues_ = np.array([p.lam for p in self.eigenpairs_])
        self.n_features_in_ = nx1 * nx2
        return self

    def transform(self, X):
        check_is_fitted(self, "eigenpairs_")
        fields = _as_fields(X, self.grid_shape)
        return np.vstack([project_onto(f, self.eps, self.eigenpairs_).coefficients for f in fields])

    def inverse_transform(self, C):
        check_is_fitted(self, "eigenpairs_")
        C = check_array(C)
        nx1, nx2 = self.grid_shape
        out = [
            reconstruct(SpectralState(self.eps, self.eigenpairs_, c, float(c @ c)), nx1, nx2).values.ravel()
            for c in C
        ]
        return np.vstack(out)


class ThinPlateHeatSolver(BaseEstimator):
    """Spectral heat solver: ``fit`` stores the initial field, ``predict`` evolves it.

    ``predict`` takes an array of times and returns stacked grids of shape
    ``(len(times), nx1, nx2)``.
    """

    def __init__(self, eps=1.0, tol=1e-10, max_modes=4096, t_floor=1e-6, t_min=None):
        self.eps = eps
        self.tol = tol
        self.max_modes = max_modes
        self.t_floor = t_floor
        self.t_min = t_min

    def fit(self, X, y=None):
        v0 = X if isinstance(X, GridField) else GridField(check_array(X))
        policy = TruncationPolicy(self.tol, self.max_modes, self.t_floor)
        t_min = 0.0 if self.t_min is None else check_time(self.t_min, "t_min")
        count = truncation_for(v0, self.eps, t_min, policy)
        self.state_ = project(v0, self.eps, count)
        self.grid_shape_ = v0.shape
        self.n_modes_ = count
        return self

    def predict(self, times):
        check_is_fitted(self, "state_")
        times = np.atleast_1d(np.asarray(times, dtype=float))
        nx1, nx2 = self.grid_shape_
        return np.stack([reconstruct(evolve(self.state_, check_time(t)), nx1, nx2).values for t in times])

    def mean_temperature(self):
        """Conserved mean; equals the constant-mode coefficient on the unit square."""
        check_is_fitted(self, "state_")
        return float(self.state_.initial_coefficients[0])
