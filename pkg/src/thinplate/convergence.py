"""Measure how the thin-plate problem approaches its one-dimensional limit.

Two kinds of evidence: the sorted 2-D eigenvalues against ``pi² (n-1)²``,
and the L² distance between the 2-D heat flow and the embedded 1-D flow
started from the vertical average of the same data.
"""

import csv
import json
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from ._validation import check_positive_int, check_positive_real, check_time
from .eigenbasis import ordered_spectrum
from .evolution import DEFAULT_POLICY, TruncationPolicy, evolve, truncation_for
from .limit1d import (
    choose_truncation1d,
    eigenvalue1d,
    embed,
    evolve_state1d,
    project1d,
    reconstruct1d,
    vertical_average,
)
from .projection import GridField, band_limit, inner_product, project, reconstruct


def epsilon_threshold(k: int) -> float:
    """Largest thickness for which the first ``k + 1`` eigenvalues are ``pi² j²``."""
    k = check_positive_int(k, "k")
    return 1.0 / k


@dataclass(frozen=True)
class EigenRow:
    eps: float
    n: int
    lam: float
    lam_limit: float

    @property
    def gap(self):
        return abs(self.lam - self.lam_limit)


def eigen_convergence(n_max: int, eps_list: Sequence[float]) -> List[EigenRow]:
    """Rows ``(eps, n, lam^eps_n, lam^0_n)`` for ``n = 1..n_max`` at each thickness."""
    n_max = check_positive_int(n_max, "n_max")
    rows = []
    for eps in eps_list:
        for pair in ordered_spectrum(eps, n_max):
            rows.append(EigenRow(float(eps), pair.rank, pair.lam, eigenvalue1d(pair.rank)))
    return rows


@dataclass(frozen=True, eq=False)
class ErrorCurve:
    eps: float
    t: np.ndarray
    errors: np.ndarray

    @property
    def sup(self) -> float:
        return float(np.max(self.errors)) if self.errors.size else 0.0


def geometric_t_grid(t0: float, t1: float, num: int = 64) -> np.ndarray:
    t0 = check_positive_real(t0, "t0")
    t1 = check_positive_real(t1, "t1")
    num = check_positive_int(num, "num")
    if t1 < t0:
        raise ValueError(f"t1={t1} must not precede t0={t0}")
    return np.geomspace(t0, t1, num)


def _check_t_grid(t_grid) -> np.ndarray:
    t_grid = np.asarray([check_time(t) for t in np.atleast_1d(t_grid)], dtype=float)
    if t_grid.size == 0:
        raise ValueError("t_grid must not be empty")
    if np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    return t_grid


def solution_error(
    v0: GridField, eps: float, t_grid, policy: TruncationPolicy = DEFAULT_POLICY
) -> ErrorCurve:
    """``||v^eps(t) - embed(v^0(t))||`` on the reference square for each ``t``.

    Both series are truncated for the earliest time, which over-resolves
    the later ones.
    """
    t_grid = _check_t_grid(t_grid)
    t_min = float(t_grid[0])
    state = project(v0, eps, truncation_for(v0, eps, t_min, policy))

    u0 = vertical_average(v0)
    cap = min(band_limit(u0.nx) + 1, policy.max_modes)
    if t_min == 0.0 or t_min < policy.t_floor:
        count1d = cap
    else:
        norm = math.sqrt(max(0.0, inner_product(v0, v0)))
        count1d = min(choose_truncation1d(t_min, norm, policy), cap)
    state1d = project1d(u0, count1d)

    errors = []
    for t in t_grid:
        diff = reconstruct(evolve(state, t), v0.nx1, v0.nx2).values - embed(
            reconstruct1d(evolve_state1d(state1d, t), u0.nx), v0.nx2
        ).values
        d = GridField(diff)
        errors.append(math.sqrt(max(0.0, inner_product(d, d))))
    return ErrorCurve(float(eps), t_grid, np.asarray(errors))


@dataclass
class Experiment:
    """An eps sweep over one initial field."""

    v0: GridField
    eps_list: Sequence[float]
    t0: float = 0.05
    t1: float = 0.5
    num_t: int = 64
    n_max: int = 10
    policy: TruncationPolicy = DEFAULT_POLICY


@dataclass
class ConvergenceReport:
    eps_list: List[float]
    eigen_table: List[EigenRow] = field(default_factory=list)
    error_curves: List[ErrorCurve] = field(default_factory=list)

    @property
    def sup_errors(self) -> List[float]:
        return [c.sup for c in self.error_curves]

    def to_dict(self):
        return {
            "eps_list": list(self.eps_list),
            "eigen_table": [
                {"eps": r.eps, "n": r.n, "lambda": r.lam, "lambda_limit": r.lam_limit, "gap": r.gap}
                for r in self.eigen_table
            ],
            "error_curves": [
                {"eps": c.eps, "t": c.t.tolist(), "error": c.errors.tolist(), "sup_error": c.sup}
                for c in self.error_curves
            ],
            "sup_errors": self.sup_errors,
        }

    def write_json(self, path):
        with open(path, "w") as fh:
            self.dump(fh)

    def dump(self, fh):
        json.dump(self.to_dict(), fh, indent=2)
        fh.write("\n")

    def write_curves(self, fh):
        """CSV with columns ``eps, t, error``."""
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["eps", "t", "error"])
        for c in self.error_curves:
            for t, e in zip(c.t, c.errors):
                writer.writerow([f"{c.eps:.17g}", f"{t:.17g}", f"{e:.17g}"])

    def write_curves_csv(self, path):
        with open(path, "w", newline="") as fh:
            self.write_curves(fh)


def convergence_report(
    experiment: Experiment, out: Optional[str] = None, curves_out: Optional[str] = None
) -> ConvergenceReport:
    """Run the eigenvalue table and error curves for every thickness in the sweep."""
    eps_list = [check_positive_real(e, "eps") for e in experiment.eps_list]
    report = ConvergenceReport(eps_list)
    if eps_list:
        report.eigen_table = eigen_convergence(experiment.n_max, eps_list)
        t_grid = geometric_t_grid(experiment.t0, experiment.t1, experiment.num_t)
        report.error_curves = [solution_error(experiment.v0, e, t_grid, experiment.policy) for e in eps_list]
    if out is not None:
        report.write_json(out)
    if curves_out is not None:
        report.write_curves_csv(curves_out)
    return report
