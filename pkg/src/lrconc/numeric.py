"""Numerical kernels: adaptive quadrature, bracketed root finding and a
counter-based uniform generator.

Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import heapq
import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import BadBracket, NoBracket, NoConvergence

DEFAULT_QUAD_TOL = 1e-9
DEFAULT_MAX_DEPTH = 40
MAX_EXPANSIONS = 200

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class RootResult:
    root: float
    bracket_width: float
    iterations: int


# --------------------------------------------------------------------------
# Quadrature
# --------------------------------------------------------------------------


def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    return h / 6.0 * (fa + 4.0 * fm + fb)


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = DEFAULT_QUAD_TOL,
    *,
    fa: float | None = None,
    fb: float | None = None,
    max_depth: int = DEFAULT_MAX_DEPTH,
    max_evaluations: int = 2_000_000,
) -> QuadratureResult:
    """Integrate ``f`` over ``[a, b]`` with globally adaptive Simpson.

    Intervals are bisected in order of decreasing error estimate until the
    summed estimate drops below ``tol``. The per-interval estimate is the
    raw difference between one and two Simpson panels, without the usual
    division by 15: integrands with endpoint derivative singularities such
    as ``(1 - p) ** 0.1`` converge far slower than ``h**4`` and the scaled
    estimate would be optimistic there.

    Args:
        f: Integrand. Only called at interior points when the endpoint
            values are supplied.
        a: Lower limit.
        b: Upper limit, ``b > a``.
        tol: Absolute tolerance on the integral.
        fa: One-sided limit of ``f`` at ``a``; evaluated if omitted.
        fb: One-sided limit of ``f`` at ``b``; evaluated if omitted.
        max_depth: Maximum number of bisections of any single interval.
        max_evaluations: Hard cap on integrand calls.

    Returns:
        QuadratureResult with the integral, the summed error estimate and
        the number of integrand evaluations.

    Raises:
        ValueError: If ``a >= b`` or ``tol`` is not positive.
        NoConvergence: If an interval needing refinement sits at
            ``max_depth`` or the evaluation cap is hit.
    """
    if not a < b:
        raise ValueError(f"integration limits must satisfy a < b, got [{a}, {b}]")
    if not tol > 0:
        raise ValueError("tol must be positive")

    evals = 0

    def call(x: float) -> float:
        nonlocal evals
        evals += 1
        v = float(f(x))
        if not math.isfinite(v):
            raise NoConvergence(f"integrand is not finite at x={x!r}")
        return v

    if fa is None:
        fa = call(a)
    if fb is None:
        fb = call(b)

    def panel(lo, hi, flo, fmid, fhi, depth):
        mid = 0.5 * (lo + hi)
        fl = call(0.5 * (lo + mid))
        fr = call(0.5 * (mid + hi))
        whole = _simpson(flo, fmid, fhi, hi - lo)
        left = _simpson(flo, fl, fmid, mid - lo)
        right = _simpson(fmid, fr, fhi, hi - mid)
        diff = left + right - whole
        value = left + right + diff / 15.0
        return (-abs(diff), lo, hi, flo, fl, fmid, fr, fhi, depth, value)

    root = panel(a, b, fa, call(0.5 * (a + b)), fb, 0)
    heap = [root]
    total_err = -root[0]
    while total_err > tol:
        if len(heap) % 256 == 0:
            total_err = math.fsum(-p[0] for p in heap)
            if total_err <= tol:
                break
        item = heapq.heappop(heap)
        neg_err, lo, hi, flo, fl, fmid, fr, fhi, depth, _ = item
        if depth >= max_depth:
            raise NoConvergence(
                f"adaptive Simpson reached depth {max_depth} near "
                f"[{lo!r}, {hi!r}] with error estimate {total_err:.3g} > {tol:.3g}"
            )
        if evals >= max_evaluations:
            raise NoConvergence(f"adaptive Simpson exceeded {max_evaluations} evaluations")
        mid = 0.5 * (lo + hi)
        left = panel(lo, mid, flo, fl, fmid, depth + 1)
        right = panel(mid, hi, fmid, fr, fhi, depth + 1)
        heapq.heappush(heap, left)
        heapq.heappush(heap, right)
        total_err += neg_err - left[0] - right[0]

    value = math.fsum(p[-1] for p in heap)
    err = math.fsum(-p[0] for p in heap)
    return QuadratureResult(value=value, abs_error_estimate=err, evaluations=evals)


def grid_trapezoid(x: np.ndarray, y: np.ndarray) -> QuadratureResult:
    """Composite trapezoid on tabulated values with a grid-halving check.

    The error estimate is ``|T(h) - T(2h)| / 3``, the Richardson estimate
    for the fine rule. The fine-rule value is returned uncorrected since the
    curves integrated here may have derivative singularities at the ends.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        raise ValueError("x and y must be 1-d arrays of equal length >= 2")
    fine = float(np.trapezoid(y, x))
    if x.size >= 3 and (x.size - 1) % 2 == 0:
        coarse = float(np.trapezoid(y[::2], x[::2]))
        err = abs(fine - coarse) / 3.0
    else:
        err = math.inf
    return QuadratureResult(value=fine, abs_error_estimate=err, evaluations=int(x.size))


# --------------------------------------------------------------------------
# Root finding
# --------------------------------------------------------------------------


def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    max_iter: int = 1000,
) -> RootResult:
    """Bracketed root of ``f`` by bisection with secant acceleration.

    A secant step is taken only when the previous step at least halved the
    bracket; otherwise the step is a plain bisection. Convergence is
    therefore never slower than bisection every other iteration.

    Raises:
        BadBracket: If ``f(lo)`` and ``f(hi)`` share a sign.
        NoConvergence: If ``max_iter`` iterations are exhausted.
    """
    a, b = (lo, hi) if lo <= hi else (hi, lo)
    fa, fb = float(f(a)), float(f(b))
    if fa == 0.0:
        return RootResult(a, 0.0, 0)
    if fb == 0.0:
        return RootResult(b, 0.0, 0)
    if (fa > 0) == (fb > 0):
        raise BadBracket(f"f({a!r})={fa!r} and f({b!r})={fb!r} have the same sign")

    use_secant = True
    for it in range(1, max_iter + 1):
        width = b - a
        if width <= tol:
            break
        c = 0.5 * (a + b)
        if use_secant and fb != fa:
            s = b - fb * (b - a) / (fb - fa)
            if a < s < b:
                c = s
        if c <= a or c >= b:
            # no representable point strictly inside the bracket
            break
        fc = float(f(c))
        if fc == 0.0:
            return RootResult(c, 0.0, it)
        if (fc > 0) == (fa > 0):
            a, fa = c, fc
        else:
            b, fb = c, fc
        use_secant = (b - a) <= 0.5 * width
    else:
        raise NoConvergence(f"find_root did not reach width {tol} in {max_iter} iterations")

    root = a if abs(fa) <= abs(fb) else b
    return RootResult(root, b - a, it)


def expand_bracket(
    f: Callable[[float], float],
    start: float,
    direction: Literal["up", "down"] | None = None,
    max_expansions: int = MAX_EXPANSIONS,
) -> tuple[float, float]:
    """Grow a bracket geometrically from ``start`` until ``f`` changes sign.

    For ``start > 0`` the search point is doubled (``"up"``) or halved
    (``"down"``), so the bracket never leaves the positive half-line.
    Otherwise the step away from ``start`` doubles each time.

    With ``direction=None`` the function is assumed increasing: the search
    goes down when ``f(start) > 0`` and up otherwise.

    Raises:
        NoBracket: No sign change within ``max_expansions`` steps.
    """
    f0 = float(f(start))
    if f0 == 0.0:
        return start, start
    if direction is None:
        direction = "down" if f0 > 0 else "up"
    if direction not in ("up", "down"):
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
    sign = 1.0 if direction == "up" else -1.0
    step = max(1.0, abs(start))

    prev = start
    for k in range(max_expansions):
        if start > 0:
            x = prev * 2.0 if direction == "up" else prev * 0.5
        else:
            x = start + sign * step * 2.0**k
        fx = float(f(x))
        if fx == 0.0 or (fx > 0) != (f0 > 0):
            return (prev, x) if direction == "up" else (x, prev)
        prev = x
    raise NoBracket(
        f"no sign change found after {max_expansions} expansions {direction} from {start!r}"
    )


# --------------------------------------------------------------------------
# Counter-based uniforms
# --------------------------------------------------------------------------


def _mix64_int(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def stream_key(seed: int, stream: int) -> int:
    """64-bit key identifying one (seed, stream) substream."""
    return _mix64_int(_mix64_int(seed) ^ _mix64_int(stream + 0x632BE59BD9B4E019))


def uniform_stream(seed: int, stream: int, n: int, start: int = 0) -> np.ndarray:
    """Uniform draws in the open interval (0, 1).

    Draw ``i`` is the SplitMix64 finalizer applied to
    ``key(seed, stream) + (i + 1) * golden``, so it depends only on
    ``(seed, stream, i)`` and any slice can be generated independently.
    The top 52 bits ``k`` map to ``(k + 0.5) / 2**52``, which is exactly
    representable and never 0 or 1.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    key = np.uint64(stream_key(seed, stream))
    counter = np.arange(start + 1, start + n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = _mix64(key + counter * np.uint64(_GOLDEN))
    k = (z >> np.uint64(12)).astype(np.float64)
    return (k + 0.5) * 2.0**-52
