"""Sample-level counterparts: ECDFs, the plug-in concentration estimator and
the Mann-Whitney AUC.

The plug-in estimator replaces ``H_X`` and ``H_Y`` by the empirical CDFs of
two score samples and inverts ``H_X`` at rank ``ceil(p * m)``. It needs no
continuity assumption, so tied or identical samples are fine here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .conc import DEFAULT_GRID, MIN_GRID, SAMPLED_TOL_FACTOR, ConcentrationCurve, uniform_grid
from .dist import _out


class Label(enum.Enum):
    POPULATION_X = "x"
    POPULATION_Y = "y"


@dataclass(frozen=True, eq=False)
class ScoreSample:
    """Sorted, finite scores from one population."""

    values: np.ndarray
    label: Label = Label.POPULATION_X

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float).reshape(-1))
        if v.size == 0:
            raise ValueError("score sample is empty")
        if not np.all(np.isfinite(v)):
            raise ValueError("score sample contains non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size


def empirical_cdf(s: ScoreSample, v):
    """Right-continuous ECDF: fraction of the sample ``<= v``."""
    return _out(np.searchsorted(s.values, v, side="right") / len(s), v)


def _quantile_ranks(grid_size: int, n: int) -> np.ndarray:
    # ceil(i * n / grid_size) in integer arithmetic, i = 1..grid_size-1
    i = np.arange(1, grid_size, dtype=np.int64)
    return -((-i * n) // grid_size)


def empirical_concentration(
    x_scores: ScoreSample, y_scores: ScoreSample, grid_size: int = DEFAULT_GRID
) -> ConcentrationCurve:
    """Plug-in ``phi_hat(p) = Hhat_Y(Hhat_X^{-1}(p))`` on ``p_i = i / grid_size``.

    ``Hhat_X^{-1}(p)`` is the order statistic at rank ``ceil(p * m)`` of the
    X sample. The result depends on the scores only through their joint
    ranks.
    """
    if grid_size < MIN_GRID:
        raise ValueError(f"grid_size must be >= {MIN_GRID}, got {grid_size}")
    p, p_c = uniform_grid(grid_size)
    m, n = len(x_scores), len(y_scores)
    thresholds = x_scores.values[_quantile_ranks(grid_size, m) - 1]
    inner = np.searchsorted(y_scores.values, thresholds, side="right") / n
    return ConcentrationCurve(
        grid=p,
        values=np.concatenate(([0.0], inner, [1.0])),
        source="empirical",
        tolerance=SAMPLED_TOL_FACTOR / math.sqrt(min(m, n)),
        sample_sizes=(m, n),
        grid_complement=p_c,
    )


def _placements(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    # for each y_j: #{x < y_j} + 0.5 #{x == y_j}, x sorted
    below = np.searchsorted(x, y, side="left")
    upto = np.searchsorted(x, y, side="right")
    return below + 0.5 * (upto - below)


def mann_whitney_auc(x_scores: ScoreSample, y_scores: ScoreSample) -> float:
    """``P(Y > X) + 0.5 P(Y = X)`` over all ``m * n`` pairs, in O((m + n) log m)."""
    x, y = x_scores.values, y_scores.values
    total = math.fsum(_placements(x, y))
    return total / (x.size * y.size)


def mann_whitney_se(x_scores: ScoreSample, y_scores: ScoreSample) -> float:
    """DeLong standard error of :func:`mann_whitney_auc`."""
    x, y = x_scores.values, y_scores.values
    m, n = x.size, y.size
    v_y = _placements(x, y) / m
    # for each x_i: #{y > x_i} + 0.5 #{y == x_i}
    above = n - np.searchsorted(y, x, side="right")
    ties = np.searchsorted(y, x, side="right") - np.searchsorted(y, x, side="left")
    v_x = (above + 0.5 * ties) / n
    var = (v_y.var(ddof=1) if n > 1 else 0.0) / n + (v_x.var(ddof=1) if m > 1 else 0.0) / m
    return math.sqrt(var)
