"""Likelihood ratio of a distribution pair and the laws of L_X and L_Y.

For a pair (X-law, Y-law) the likelihood ratio is ``L(z) = f_Y(z) / f_X(z)``.
``H_X`` and ``H_Y`` are the CDFs of ``L`` when ``z`` is drawn from X and
from Y respectively. Two pairs have closed forms (two exponentials, and an
exponential with its length-biased gamma); everything else is served from
a cached, sorted Monte Carlo sample of log likelihood ratios.
"""

from __future__ import annotations

import enum
import math
import warnings
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from . import numeric
from .dist import ContinuousDistribution, Exponential, Gamma, _check_probs, _out
from .errors import AtomError, AtomWarning, PairOrderError, SupportError, UnsupportedPair

ATOM_THRESHOLD = 1e-3
DEFAULT_MC_N = 1_000_000
MIN_MC_N = 1000
RATE_RATIO_EPS = 1e-9

# substream ids for the two populations
X_STREAM = 0
Y_STREAM = 1


class Population(enum.Enum):
    X = "x"
    Y = "y"


class Backend(enum.Enum):
    ANALYTIC = "analytic"
    MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class DistributionPair:
    """Two alternative explanations of a scalar observation.

    ``x`` is the reference population (e.g. healthy), ``y`` the one the
    test tries to detect. The supports must coincide.
    """

    x: ContinuousDistribution
    y: ContinuousDistribution

    def __post_init__(self):
        if self.x.support != self.y.support:
            raise SupportError(
                f"supports differ: X on {self.x.support}, Y on {self.y.support}"
            )

    @property
    def rate_ratio(self) -> float:
        """``rate_X / rate_Y`` for an exponential pair."""
        if not (isinstance(self.x, Exponential) and isinstance(self.y, Exponential)):
            raise UnsupportedPair("rate ratio is only defined for two exponentials")
        return self.x.rate / self.y.rate

    def log_likelihood_ratio(self, z):
        z = np.asarray(z, dtype=float)
        lx = np.asarray(self.x.logpdf(z), dtype=float)
        if np.any(np.isneginf(lx)) or np.any(np.isnan(z)):
            raise SupportError("observation outside the support of X (f_X(z) = 0)")
        return _out(np.asarray(self.y.logpdf(z), dtype=float) - lx, z)

    def population(self, which: Population) -> ContinuousDistribution:
        return self.x if which is Population.X else self.y


def likelihood_ratio(pair: DistributionPair, z):
    """``f_Y(z) / f_X(z)``.

    Raises:
        SupportError: If ``f_X(z) = 0``.
    """
    return _out(np.exp(np.asarray(pair.log_likelihood_ratio(z))), z)


# --------------------------------------------------------------------------
# Closed forms
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class _ClosedForm:
    name: str
    h_x: Callable[[np.ndarray], np.ndarray]
    h_y: Callable[[np.ndarray], np.ndarray]
    quantile: Callable[[np.ndarray], np.ndarray] | None


def _exponential_pair_form(r: float) -> _ClosedForm:
    # L = (1/r) exp((rate_X - rate_Y) z) >= 1/r; both CDFs are powers of 1/(r l)
    ax = r / (r - 1.0)
    ay = 1.0 / (r - 1.0)

    def cdf(l, a):
        l = np.asarray(l, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_rl = np.log(r * l)
            out = -np.expm1(-a * log_rl)
        return np.where(r * l > 1.0, out, 0.0)

    def quantile(p):
        return np.exp(-((r - 1.0) / r) * np.log1p(-p)) / r

    return _ClosedForm(
        name=f"exponential pair r={r!r}",
        h_x=lambda l: cdf(l, ax),
        h_y=lambda l: cdf(l, ay),
        quantile=quantile,
    )


def _length_biased_exponential_form() -> _ClosedForm:
    # L = rate * z, so L_X ~ Exp(1) and L_Y ~ Gamma(2, 1)
    def h_x(l):
        l = np.asarray(l, dtype=float)
        return np.where(l > 0, -np.expm1(-np.maximum(l, 0.0)), 0.0)

    def h_y(l):
        l = np.asarray(l, dtype=float)
        lp = np.maximum(l, 0.0)
        return np.where(l > 0, -np.expm1(-lp) - lp * np.exp(-lp), 0.0)

    return _ClosedForm(
        name="length-biased exponential",
        h_x=h_x,
        h_y=h_y,
        quantile=lambda p: -np.log1p(-p),
    )


def _closed_form(pair: DistributionPair) -> _ClosedForm:
    x, y = pair.x, pair.y
    if isinstance(x, Exponential) and isinstance(y, Exponential):
        r = x.rate / y.rate
        if abs(r - 1.0) < RATE_RATIO_EPS:
            raise AtomError(
                "identical exponential populations: the likelihood ratio is "
                "constant (L = 1), a single atom",
                tie_fraction=1.0,
            )
        if r < 1.0:
            raise PairOrderError(
                f"exponential pair needs rate_X > rate_Y (got {x.rate!r} <= {y.rate!r}); "
                "swap the populations so that Y is stochastically larger"
            )
        return _exponential_pair_form(r)
    if (
        isinstance(x, Exponential)
        and isinstance(y, Gamma)
        and y.shape == 2.0
        and math.isclose(y.rate, x.rate, rel_tol=1e-12)
    ):
        return _length_biased_exponential_form()
    raise UnsupportedPair(f"no closed form for X={x!r}, Y={y!r}")


def lr_cdf_analytic(pair: DistributionPair, which: Population, l):
    """Closed-form ``H_X(l)`` or ``H_Y(l)``.

    Supported pairs are Exponential(a) vs Exponential(b) with ``a > b`` and
    Exponential(a) vs its length-biased version Gamma(2, a).

    Raises:
        UnsupportedPair: For any other pair (``PairOrderError`` when the
            exponential rates are reversed).
        AtomError: For two exponentials with equal rates.
    """
    form = _closed_form(pair)
    fn = form.h_x if which is Population.X else form.h_y
    return _out(fn(l), l)


@dataclass(frozen=True)
class McEstimate:
    estimate: float | np.ndarray
    std_error: float | np.ndarray


def sorted_log_lr_sample(pair: DistributionPair, which: Population, n: int, seed: int) -> np.ndarray:
    """Sorted log likelihood ratios of ``n`` seeded draws from one population."""
    stream = X_STREAM if which is Population.X else Y_STREAM
    z = pair.population(which).sample(n, seed=seed, stream=stream)
    out = np.asarray(pair.log_likelihood_ratio(z))
    out.sort()
    return out


def _ecdf(sorted_values: np.ndarray, v) -> np.ndarray:
    return np.searchsorted(sorted_values, np.asarray(v, dtype=float), side="right") / sorted_values.size


def lr_cdf_monte_carlo(
    pair: DistributionPair, which: Population, l, n: int = DEFAULT_MC_N, seed: int = 0
) -> McEstimate:
    """Simulated ``H(l)``: the fraction of ``n`` likelihood ratios at most ``l``.

    ``l`` may be an array; all points share one sample.
    """
    if n < MIN_MC_N:
        raise ValueError(f"Monte Carlo needs n >= {MIN_MC_N}, got {n}")
    p = _ecdf(np.exp(sorted_log_lr_sample(pair, which, n, seed)), l)
    se = np.sqrt(p * (1.0 - p) / n)
    return McEstimate(_out(p, l), _out(se, l))


# --------------------------------------------------------------------------
# LrDistribution
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AtomReport:
    tie_fraction: float
    flagged: bool


def atom_check(lr_samples) -> AtomReport:
    """Fraction of exactly tied values in a sorted sample."""
    s = np.asarray(lr_samples)
    if s.size == 0:
        return AtomReport(0.0, False)
    distinct = 1 + int(np.count_nonzero(s[1:] != s[:-1]))
    frac = (s.size - distinct) / s.size
    return AtomReport(frac, frac > ATOM_THRESHOLD)


def invert_cdf(h: Callable, p: float, start: float = 1.0) -> float:
    """Invert a nondecreasing CDF on ``l > 0`` by bracket expansion and root finding.

    The bracket is shrunk to a few ulps, so ``h(result)`` matches ``p`` to
    the accuracy ``h`` itself allows.
    """
    g = lambda l: float(h(l)) - p  # noqa: E731
    lo, hi = numeric.expand_bracket(g, start)
    if lo == hi:
        return lo
    return numeric.find_root(g, lo, hi, tol=4 * np.spacing(hi)).root


@dataclass(frozen=True, eq=False)
class LrDistribution:
    """Evaluators for ``H_X``, ``H_Y`` and ``H_X^{-1}`` of one pair.

    Build with :func:`build_lr_distribution`.
    """

    pair: DistributionPair
    backend: Backend
    atom_report: AtomReport
    n: int | None = None
    seed: int | None = None
    _form: _ClosedForm | None = field(default=None, repr=False)
    _log_x: np.ndarray | None = field(default=None, repr=False)
    _log_y: np.ndarray | None = field(default=None, repr=False)
    # exp of the log samples; lookups use these so quantile and CDF round-trip exactly
    _lr_x: np.ndarray | None = field(default=None, repr=False)
    _lr_y: np.ndarray | None = field(default=None, repr=False)

    def h_x(self, l):
        if self.backend is Backend.ANALYTIC:
            return _out(self._form.h_x(l), l)
        return _out(_ecdf(self._lr_x, l), l)

    def h_y(self, l):
        if self.backend is Backend.ANALYTIC:
            return _out(self._form.h_y(l), l)
        return _out(_ecdf(self._lr_y, l), l)

    def h_x_quantile(self, p):
        """``H_X^{-1}(p)`` for ``p`` in (0, 1).

        Raises:
            DomainError: If any ``p`` lies outside (0, 1).
        """
        arr = _check_probs(p)
        if self.backend is Backend.MONTE_CARLO:
            n = self._log_x.size
            k = np.clip(np.ceil(arr * n).astype(np.int64), 1, n)
            return _out(self._lr_x[k - 1], p)
        if self._form.quantile is not None:
            return _out(self._form.quantile(arr), p)
        flat = [invert_cdf(self._form.h_x, float(v)) for v in arr.reshape(-1)]
        return _out(np.reshape(flat, arr.shape), p)

    @property
    def resolution(self) -> float:
        """Statistical resolution of the CDF estimates: ``1/sqrt(n)``, or 0 if exact."""
        if self.backend is Backend.ANALYTIC:
            return 0.0
        return 1.0 / math.sqrt(min(self._log_x.size, self._log_y.size))

    def log_lr_samples(self) -> tuple[np.ndarray, np.ndarray]:
        """Cached sorted log likelihood ratios under X and Y (Monte Carlo only)."""
        if self.backend is not Backend.MONTE_CARLO:
            raise UnsupportedPair("analytic backend holds no samples")
        return self._log_x, self._log_y


def lr_quantile(lrd: LrDistribution, p):
    """``H_X^{-1}(p)``; see :meth:`LrDistribution.h_x_quantile`."""
    return lrd.h_x_quantile(p)


def _raise_or_warn(msg: str, frac: float, strict: bool):
    if strict:
        raise AtomError(msg, tie_fraction=frac)
    warnings.warn(msg, AtomWarning, stacklevel=3)


def build_lr_distribution(
    pair: DistributionPair,
    backend: Backend | str | None = None,
    mc_n: int = DEFAULT_MC_N,
    seed: int = 0,
    strict: bool = True,
) -> LrDistribution:
    """Choose a backend for ``pair`` and precompute what it needs.

    Args:
        pair: The two populations.
        backend: ``None`` or ``"auto"`` picks the closed form when one
            exists and Monte Carlo otherwise. ``"analytic"`` and
            ``"monte-carlo"`` force a backend.
        mc_n: Sample size per population for Monte Carlo.
        seed: Seed for the counter-based generator.
        strict: Raise :class:`AtomError` on a detected atom instead of
            warning.

    Raises:
        AtomError: Atom detected with ``strict=True``.
        UnsupportedPair: ``"analytic"`` forced on a pair without closed
            form, or an exponential pair with reversed rates.
    """
    if isinstance(backend, str):
        backend = None if backend == "auto" else Backend(backend)

    if backend in (None, Backend.ANALYTIC):
        try:
            form = _closed_form(pair)
        except PairOrderError:
            raise
        except AtomError as exc:
            if strict or backend is Backend.ANALYTIC:
                raise
            _raise_or_warn(str(exc), exc.tie_fraction, strict=False)
        except UnsupportedPair:
            if backend is Backend.ANALYTIC:
                raise
        else:
            return LrDistribution(pair, Backend.ANALYTIC, AtomReport(0.0, False), _form=form)

    if mc_n < MIN_MC_N:
        raise ValueError(f"Monte Carlo needs n >= {MIN_MC_N}, got {mc_n}")
    log_x = sorted_log_lr_sample(pair, Population.X, mc_n, seed)
    log_y = sorted_log_lr_sample(pair, Population.Y, mc_n, seed)
    rx, ry = atom_check(log_x), atom_check(log_y)
    frac = max(rx.tie_fraction, ry.tie_fraction)
    report = AtomReport(frac, frac > ATOM_THRESHOLD)
    if report.flagged:
        _raise_or_warn(
            f"likelihood ratio has atoms: {frac:.4g} of simulated values are tied "
            "(densities proportional on a set of positive mass)",
            frac,
            strict,
        )
    return LrDistribution(
        pair,
        Backend.MONTE_CARLO,
        report,
        n=mc_n,
        seed=seed,
        _log_x=log_x,
        _log_y=log_y,
        _lr_x=np.exp(log_x),
        _lr_y=np.exp(log_y),
    )
