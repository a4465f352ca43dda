"""Spectral heat flow on thin Neumann plates and its one-dimensional limit."""

from .convergence import (
    ConvergenceReport,
    ErrorCurve,
    Experiment,
    convergence_report,
    eigen_convergence,
    epsilon_threshold,
    solution_error,
)
from .eigenbasis import (
    EigenPair,
    Epsilon,
    ModeIndex,
    eigenfunction_physical,
    eigenfunction_rescaled,
    eigenvalue,
    iter_spectrum,
    norm_const,
    ordered_spectrum,
)
from .evolution import (
    TruncationPolicy,
    TruncationWarning,
    choose_truncation,
    evolve,
    solve,
    solve_physical,
)
from .fd_oracle import FDConfig, fd_mean, fd_solve
from .fields import GridField, sample, sample_physical
from .limit1d import (
    GridField1D,
    SpectralState1D,
    eigenfunction1d,
    eigenvalue1d,
    embed,
    evolve1d,
    project1d,
    reconstruct1d,
    vertical_average,
)
from .projection import SpectralState, inner_product, parseval_defect, project, reconstruct

__version__ = "0.1.0"
