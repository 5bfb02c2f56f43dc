"""Parametric continuous distributions and the length-biasing transform.

Three families are supported: exponential, gamma and normal. All methods
accept scalars or numpy arrays and broadcast elementwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import numeric
from .errors import DomainError, UnsupportedFamily

QUANTILE_TOL = 1e-12


def _check_probs(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if np.any(~((arr > 0.0) & (arr < 1.0))):
        raise DomainError("probabilities must lie strictly inside (0, 1)")
    return arr


def _out(arr: np.ndarray, like):
    return float(arr) if np.ndim(like) == 0 else arr


@dataclass(frozen=True)
class ContinuousDistribution:
    """Common interface. Subclasses are immutable value objects."""

    family = "abstract"

    @property
    def support(self) -> tuple[float, float]:
        raise NotImplementedError

    def logpdf(self, x):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    def _ppf(self, p: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def pdf(self, x):
        """Density; zero outside the support."""
        with np.errstate(divide="ignore"):
            return _out(np.exp(np.asarray(self.logpdf(x), dtype=float)), x)

    def in_support(self, x) -> np.ndarray:
        lo, hi = self.support
        x = np.asarray(x, dtype=float)
        return (x > lo) & (x < hi)

    def quantile(self, p):
        """Inverse CDF on the open unit interval.

        Raises:
            DomainError: If any ``p`` lies outside (0, 1).
        """
        arr = _check_probs(p)
        return _out(self._ppf(arr), p)

    def sample(self, n: int, seed: int = 0, stream: int = 0) -> np.ndarray:
        """Draw ``n`` values by inverse-CDF transform of counter-based uniforms.

        The output depends only on ``(seed, stream, n)``.
        """
        if n < 1:
            raise ValueError(f"sample size must be >= 1, got {n}")
        return self._ppf(numeric.uniform_stream(seed, stream, n))


@dataclass(frozen=True)
class Exponential(ContinuousDistribution):
    rate: float

    family = "exp"

    def __post_init__(self):
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise ValueError(f"exponential rate must be positive, got {self.rate}")

    @property
    def support(self):
        return (0.0, math.inf)

    @property
    def mean(self):
        return 1.0 / self.rate

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x >= 0, math.log(self.rate) - self.rate * x, -np.inf)
        return _out(out, x)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x > 0, -np.expm1(-self.rate * np.maximum(x, 0.0)), 0.0)
        return _out(out, x)

    def _ppf(self, p):
        return -np.log1p(-p) / self.rate


@dataclass(frozen=True)
class Gamma(ContinuousDistribution):
    """Gamma law parametrised by shape and rate (mean ``shape / rate``)."""

    shape: float
    rate: float

    family = "gamma"

    def __post_init__(self):
        if not (math.isfinite(self.shape) and self.shape > 0):
            raise ValueError(f"gamma shape must be positive, got {self.shape}")
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise ValueError(f"gamma rate must be positive, got {self.rate}")

    @property
    def support(self):
        return (0.0, math.inf)

    @property
    def mean(self):
        return self.shape / self.rate

    @property
    def _erlang(self) -> bool:
        return float(self.shape).is_integer() and self.shape <= 170

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        k, lam = self.shape, self.rate
        norm = k * math.log(lam) - math.lgamma(k)
        with np.errstate(divide="ignore", invalid="ignore"):
            body = norm + (k - 1.0) * np.log(np.where(x > 0, x, 1.0)) - lam * x
        out = np.where(x > 0, body, -np.inf)
        if k == 1.0:
            out = np.where(x == 0, math.log(lam), out)
        elif k < 1.0:
            out = np.where(x == 0, np.inf, out)
        return _out(out, x)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        y = self.rate * np.maximum(x, 0.0)
        if self._erlang:
            # 1 - e^{-y} sum_{j<k} y^j/j!, with the j=0 term folded into expm1
            with np.errstate(divide="ignore"):
                log_y = np.log(y)
            tail = np.zeros_like(y)
            for j in range(1, int(self.shape)):
                tail = tail + np.exp(j * log_y - y - math.lgamma(j + 1))
            out = -np.expm1(-y) - tail
            out = np.clip(out, 0.0, 1.0)
        else:
            out = special.gammainc(self.shape, y)
        return _out(np.where(x > 0, out, 0.0), x)

    def _ppf(self, p):
        k, lam = self.shape, self.rate
        x = special.gammaincinv(k, p) / lam
        # Newton polish against our own CDF so that cdf(quantile(p)) == p
        for _ in range(3):
            dens = np.asarray(self.pdf(x))
            step = np.where(dens > 0, (np.asarray(self.cdf(x)) - p) / np.where(dens > 0, dens, 1.0), 0.0)
            x = np.maximum(x - step, 0.5 * x)
        resid = np.abs(np.asarray(self.cdf(x)) - p)
        bad = np.flatnonzero(resid > QUANTILE_TOL)
        if bad.size:
            x = np.array(x, dtype=float, copy=True)
            flat = x.reshape(-1)
            pf = np.broadcast_to(p, x.shape).reshape(-1)
            for i in bad:
                flat[i] = self._ppf_bracketed(float(pf[i]), float(flat[i]))
        return x

    def _ppf_bracketed(self, p: float, guess: float) -> float:
        g = lambda v: float(self.cdf(v)) - p  # noqa: E731
        start = guess if guess > 0 and math.isfinite(guess) else self.mean
        lo, hi = numeric.expand_bracket(g, start)
        return numeric.find_root(g, lo, hi, tol=4 * np.spacing(hi)).root


@dataclass(frozen=True)
class Normal(ContinuousDistribution):
    mean: float
    sd: float

    family = "normal"

    def __post_init__(self):
        if not math.isfinite(self.mean):
            raise ValueError(f"normal mean must be finite, got {self.mean}")
        if not (math.isfinite(self.sd) and self.sd > 0):
            raise ValueError(f"normal sd must be positive, got {self.sd}")

    @property
    def support(self):
        return (-math.inf, math.inf)

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        z = (x - self.mean) / self.sd
        return _out(-0.5 * z * z - math.log(self.sd) - 0.5 * math.log(2 * math.pi), x)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return _out(special.ndtr((x - self.mean) / self.sd), x)

    def _ppf(self, p):
        z = special.ndtri(p)
        # one Newton step on the standard normal CDF
        dens = np.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = (special.ndtr(z) - p) / dens
        z = np.where(np.isfinite(step), z - step, z)
        return self.mean + self.sd * z


def length_biased(d: ContinuousDistribution) -> ContinuousDistribution:
    """Size-biased version of ``d``, density ``x f(x) / E[X]``.

    Exponential(rate) maps to Gamma(2, rate) and Gamma(k, rate) maps to
    Gamma(k + 1, rate).

    Raises:
        UnsupportedFamily: For families without positive support.
    """
    if isinstance(d, Exponential):
        return Gamma(shape=2.0, rate=d.rate)
    if isinstance(d, Gamma):
        return Gamma(shape=d.shape + 1.0, rate=d.rate)
    raise UnsupportedFamily(
        f"length-biasing needs a positive support with finite mean; "
        f"{d.family} is not supported"
    )
