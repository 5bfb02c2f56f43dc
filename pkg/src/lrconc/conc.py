"""Concentration function, optimal ROC curve and their summaries.

The concentration function of Y with respect to X is
``phi(p) = H_Y(H_X^{-1}(p))`` with ``phi(0) = 0`` and ``phi(1) = 1``. The
ROC curve of the likelihood-ratio test is its flip,
``ROC(q) = 1 - phi(1 - q)``, and

    AUC = 1 - int_0^1 phi = (1 + Gini_gen) / 2,   Gini_gen = 2 int_0^1 (p - phi).

Curves are tabulated on a uniform grid. Curves built from a closed form
also carry an evaluator, and their integrals use adaptive quadrature on
it instead of the grid.
"""

from __future__ import annotations

import enum
import math
import warnings
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from . import numeric
from .dist import ContinuousDistribution, _check_probs, _out, length_biased
from .errors import DomainError
from .lrdist import Backend, LrDistribution, likelihood_ratio

DEFAULT_GRID = 1024
MIN_GRID = 16
ANALYTIC_TOL = 1e-9
SAMPLED_TOL_FACTOR = 3.0


def uniform_grid(m: int) -> tuple[np.ndarray, np.ndarray]:
    """``(i/m, (m-i)/m)`` for ``i = 0..m``; the second array is the exact complement."""
    i = np.arange(m + 1)
    return i / m, (m - i) / m


@dataclass(frozen=True, eq=False)
class _Curve:
    grid: np.ndarray
    values: np.ndarray
    source: str = "analytic"
    tolerance: float = ANALYTIC_TOL
    evaluator: Callable[[float], float] | None = field(default=None, repr=False)
    sample_sizes: tuple[int, int] | None = None
    atom_flagged: bool = False
    # 1 - grid and 1 - values, kept so that flipping a curve is exact
    grid_complement: np.ndarray | None = field(default=None, repr=False)
    values_complement: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
            raise ValueError("grid and values must be 1-d arrays of equal length >= 2")
        if grid[0] != 0.0 or grid[-1] != 1.0 or np.any(np.diff(grid) <= 0):
            raise ValueError("grid must increase strictly from 0 to 1")
        if values[0] != 0.0 or values[-1] != 1.0:
            raise ValueError("curve must pass through (0, 0) and (1, 1)")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        if self.grid_complement is None:
            object.__setattr__(self, "grid_complement", 1.0 - grid)
        if self.values_complement is None:
            object.__setattr__(self, "values_complement", 1.0 - values)

    def __call__(self, p):
        """Value at ``p``: the evaluator if present, else linear interpolation."""
        if self.evaluator is not None:
            arr = np.asarray(p, dtype=float)
            flat = [
                0.0 if v <= 0 else 1.0 if v >= 1 else self.evaluator(float(v))
                for v in arr.reshape(-1)
            ]
            return _out(np.reshape(flat, arr.shape), p)
        return _out(np.interp(p, self.grid, self.values), p)

    def integral(self, tol: float = numeric.DEFAULT_QUAD_TOL) -> numeric.QuadratureResult:
        """``int_0^1`` of the curve."""
        if self.evaluator is not None:
            return numeric.integrate(self.evaluator, 0.0, 1.0, tol, fa=0.0, fb=1.0)
        return numeric.grid_trapezoid(self.grid, self.values)


class ConcentrationCurve(_Curve):
    """Tabulated ``phi`` on ``0 = p_0 < ... < p_m = 1``."""


class RocCurve(_Curve):
    """Tabulated ``ROC`` on ``0 = q_0 < ... < q_m = 1``."""


def _flip(curve: _Curve, cls: type) -> _Curve:
    ev = curve.evaluator
    return cls(
        grid=curve.grid_complement[::-1],
        values=curve.values_complement[::-1],
        source=curve.source,
        tolerance=curve.tolerance,
        evaluator=None if ev is None else (lambda s: 1.0 - ev(1.0 - s)),
        sample_sizes=curve.sample_sizes,
        atom_flagged=curve.atom_flagged,
        grid_complement=curve.grid[::-1],
        values_complement=curve.values[::-1],
    )


def roc_opt(curve: ConcentrationCurve) -> RocCurve:
    """ROC of the likelihood-ratio test: ``q_i = 1 - p_{m-i}``, ``roc_i = 1 - phi_{m-i}``.

    Pointwise on the grid, no interpolation. The flip is stored exactly, so
    ``concentration_from_roc(roc_opt(c))`` reproduces ``c`` bit for bit.
    """
    return _flip(curve, RocCurve)


def concentration_from_roc(roc: RocCurve) -> ConcentrationCurve:
    """Inverse of :func:`roc_opt` (the same flip applied to a ROC curve)."""
    return _flip(roc, ConcentrationCurve)


def _curve_tolerance(lrd: LrDistribution) -> float:
    if lrd.backend is Backend.ANALYTIC:
        return ANALYTIC_TOL
    return SAMPLED_TOL_FACTOR * lrd.resolution


def concentration(lrd: LrDistribution, grid_size: int = DEFAULT_GRID) -> ConcentrationCurve:
    """``phi(p_i) = H_Y(H_X^{-1}(p_i))`` at ``p_i = i / grid_size``.

    Endpoints are set to 0 and 1.
    """
    if grid_size < MIN_GRID:
        raise ValueError(f"grid_size must be >= {MIN_GRID}, got {grid_size}")
    p, p_c = uniform_grid(grid_size)
    inner = np.clip(lrd.h_y(lrd.h_x_quantile(p[1:-1])), 0.0, 1.0)
    values = np.concatenate(([0.0], inner, [1.0]))

    evaluator = None
    sizes = None
    if lrd.backend is Backend.ANALYTIC:
        evaluator = lambda s: float(lrd.h_y(lrd.h_x_quantile(s)))  # noqa: E731
    else:
        sizes = (lrd.n, lrd.n)
    return ConcentrationCurve(
        grid=p,
        values=values,
        source=lrd.backend.value,
        tolerance=_curve_tolerance(lrd),
        evaluator=evaluator,
        sample_sizes=sizes,
        atom_flagged=lrd.atom_report.flagged,
        grid_complement=p_c,
    )


def lorenz_curve(x_dist: ContinuousDistribution, grid_size: int = DEFAULT_GRID) -> ConcentrationCurve:
    """Lorenz curve ``F_Y(F_X^{-1}(p))`` with Y the length-biased version of X.

    Computed straight from the two CDFs, without likelihood ratios.

    Raises:
        UnsupportedFamily: If ``x_dist`` cannot be length-biased.
    """
    if grid_size < MIN_GRID:
        raise ValueError(f"grid_size must be >= {MIN_GRID}, got {grid_size}")
    y_dist = length_biased(x_dist)
    p, p_c = uniform_grid(grid_size)
    inner = np.clip(y_dist.cdf(x_dist.quantile(p[1:-1])), 0.0, 1.0)
    return ConcentrationCurve(
        grid=p,
        values=np.concatenate(([0.0], inner, [1.0])),
        source="analytic",
        evaluator=lambda s: float(y_dist.cdf(x_dist.quantile(s))),
        grid_complement=p_c,
    )


# --------------------------------------------------------------------------
# Test rule and its operating characteristics
# --------------------------------------------------------------------------


class Assignment(enum.Enum):
    ASSIGN_X = "x"
    ASSIGN_Y = "y"


def classify(lrd: LrDistribution, z: float, t: float) -> Assignment:
    """Assign ``z`` to Y iff its likelihood ratio exceeds ``H_X^{-1}(t)``.

    Equality goes to X.

    Raises:
        SupportError: If ``z`` is outside the common support.
        DomainError: If ``t`` is outside (0, 1).
    """
    threshold = lrd.h_x_quantile(t)
    if likelihood_ratio(lrd.pair, z) > threshold:
        return Assignment.ASSIGN_Y
    return Assignment.ASSIGN_X


@dataclass(frozen=True)
class OperatingPoint:
    tpr: float | np.ndarray
    fpr: float | np.ndarray


def tpr_fpr(lrd: LrDistribution, t) -> OperatingPoint:
    """True and false positive rates of the test with threshold ``H_X^{-1}(t)``.

    ``fpr = 1 - t`` exactly for closed forms; for Monte Carlo it is the
    simulated exceedance fraction, which differs from ``1 - t`` by at most
    one ECDF step.
    """
    arr = _check_probs(t)
    threshold = lrd.h_x_quantile(arr)
    tpr = 1.0 - np.asarray(lrd.h_y(threshold))
    if lrd.backend is Backend.ANALYTIC:
        fpr = 1.0 - arr
    else:
        fpr = 1.0 - np.asarray(lrd.h_x(threshold))
    return OperatingPoint(_out(tpr, t), _out(fpr, t))


# --------------------------------------------------------------------------
# Summaries
# --------------------------------------------------------------------------


def auc(roc: RocCurve, tol: float = numeric.DEFAULT_QUAD_TOL) -> float:
    """Area under a ROC curve."""
    return roc.integral(tol).value


def auc_from_phi(curve: ConcentrationCurve, tol: float = numeric.DEFAULT_QUAD_TOL) -> float:
    """``1 - int_0^1 phi``."""
    return 1.0 - curve.integral(tol).value


def gini_gen(curve: ConcentrationCurve, tol: float = numeric.DEFAULT_QUAD_TOL) -> float:
    """Generalized Gini ``2 int_0^1 (p - phi(p)) dp = 1 - 2 int_0^1 phi``.

    Negative for curves above the diagonal, which the optimal test never
    produces; a warning is issued in that case.
    """
    g = 1.0 - 2.0 * curve.integral(tol).value
    if g < -curve.tolerance:
        warnings.warn(
            f"generalized Gini is negative ({g:.6g}): curve lies above the diagonal",
            RuntimeWarning,
            stacklevel=2,
        )
    return g


def auc_std_error(a: float, m: int, n: int) -> float:
    """Hanley-McNeil standard error of an AUC estimate from ``m`` X and ``n`` Y scores."""
    q1 = a / (2.0 - a)
    q2 = 2.0 * a * a / (1.0 + a)
    var = (a * (1 - a) + (n - 1) * (q1 - a * a) + (m - 1) * (q2 - a * a)) / (m * n)
    return math.sqrt(max(var, 0.0))


@dataclass(frozen=True)
class ShapeDiagnostics:
    nondecreasing: bool
    convex_phi_violations: int
    below_diagonal: bool


def shape_diagnostics(curve: ConcentrationCurve) -> ShapeDiagnostics:
    """Check monotonicity, convexity and ``phi <= p`` up to the curve tolerance.

    Convexity is tested on slope increments scaled by the local spacing,
    which equal second differences on a uniform grid.
    """
    tol = curve.tolerance
    p, v = curve.grid, curve.values
    dv = np.diff(v)
    dp = np.diff(p)
    slopes = dv / dp
    second = (slopes[1:] - slopes[:-1]) * 0.5 * (dp[1:] + dp[:-1])
    return ShapeDiagnostics(
        nondecreasing=bool(np.all(dv >= -tol)),
        convex_phi_violations=int(np.count_nonzero(second < -tol)),
        below_diagonal=bool(np.all(v <= p + tol)),
    )


@dataclass(frozen=True)
class CurveSummary:
    auc: float
    gini_gen: float
    identity_residual: float
    convexity_violations: int
    atom_flagged: bool
    source: str
    auc_std_error: float = 0.0

    def as_dict(self) -> dict:
        return {
            "auc": self.auc,
            "gini_gen": self.gini_gen,
            "identity_residual": self.identity_residual,
            "auc_std_error": self.auc_std_error,
            "convexity_violations": self.convexity_violations,
            "atom_flagged": self.atom_flagged,
            "backend": self.source,
        }


def summarize(curve: ConcentrationCurve, tol: float = numeric.DEFAULT_QUAD_TOL) -> CurveSummary:
    """AUC through the ROC route, Gini through the ``phi`` route, and their residual."""
    a = auc(roc_opt(curve), tol)
    g = gini_gen(curve, tol)
    se = 0.0
    if curve.sample_sizes is not None:
        se = auc_std_error(a, *curve.sample_sizes)
    return CurveSummary(
        auc=a,
        gini_gen=g,
        identity_residual=a - 0.5 * (1.0 + g),
        convexity_violations=shape_diagnostics(curve).convex_phi_violations,
        atom_flagged=curve.atom_flagged,
        source=curve.source,
        auc_std_error=se,
    )


def curve_from_function(
    phi: Callable[[float], float], grid_size: int = DEFAULT_GRID, source: str = "analytic"
) -> ConcentrationCurve:
    """Tabulate a user-supplied ``phi`` on the uniform grid, keeping it as evaluator."""
    p, p_c = uniform_grid(grid_size)
    inner = np.array([phi(float(s)) for s in p[1:-1]])
    if np.any((inner < 0) | (inner > 1)):
        raise DomainError("phi values must lie in [0, 1]")
    return ConcentrationCurve(
        grid=p,
        values=np.concatenate(([0.0], inner, [1.0])),
        source=source,
        evaluator=phi,
        grid_complement=p_c,
    )
