"""Text formats: distribution literals, score files, curve CSV/JSON.

Distribution literal grammar (whitespace is ignored)::

    literal := "exp(rate=" R ")"
             | "gamma(shape=" S ",rate=" R ")"
             | "normal(mean=" M ",sd=" S ")"

Keyword order is free; every keyword must appear exactly once. Numbers are
decimal floats. ``render_distribution`` gives the canonical form, so
``render(parse(s))`` normalizes ``s``.
"""

from __future__ import annotations

import json
import math
import re
from pathlib import Path

import numpy as np

from .conc import CurveSummary, RocCurve, _Curve
from .dist import ContinuousDistribution, Exponential, Gamma, Normal
from .errors import ParseError

_FAMILIES = {
    "exp": (Exponential, ("rate",)),
    "gamma": (Gamma, ("shape", "rate")),
    "normal": (Normal, ("mean", "sd")),
}
_LITERAL = re.compile(r"^([a-z]+)\((.*)\)$")


def parse_distribution(text: str) -> ContinuousDistribution:
    """Parse a literal such as ``gamma(shape=2, rate=1.5)``.

    Raises:
        ParseError: On any syntax error, unknown family or keyword, or
            invalid parameter value.
    """
    compact = re.sub(r"\s+", "", text)
    m = _LITERAL.match(compact)
    if not m or m.group(1) not in _FAMILIES:
        raise ParseError(
            f"cannot parse distribution {text!r}; expected exp(rate=R), "
            "gamma(shape=S,rate=R) or normal(mean=M,sd=S)"
        )
    cls, keys = _FAMILIES[m.group(1)]
    params: dict[str, float] = {}
    for item in m.group(2).split(","):
        key, sep, raw = item.partition("=")
        if not sep or key not in keys or key in params:
            raise ParseError(f"bad or repeated parameter {item!r} in {text!r}")
        try:
            val = float(raw)
        except ValueError:
            raise ParseError(f"parameter {key}={raw!r} is not a number") from None
        if not math.isfinite(val):
            raise ParseError(f"parameter {key}={raw!r} is not finite")
        params[key] = val
    missing = [k for k in keys if k not in params]
    if missing:
        raise ParseError(f"missing parameter(s) {', '.join(missing)} in {text!r}")
    try:
        return cls(**params)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def render_distribution(d: ContinuousDistribution) -> str:
    """Canonical literal for ``d``."""
    _, keys = _FAMILIES[d.family]
    args = ",".join(f"{k}={float(getattr(d, k))!r}" for k in keys)
    return f"{d.family}({args})"


def read_scores(path: str | Path) -> np.ndarray:
    """Read scores separated by newlines, commas or whitespace.

    A non-numeric first line is treated as a header and skipped.

    Raises:
        ParseError: If the file is empty or holds a non-numeric token.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    lines = text.splitlines()
    first = next((i for i, ln in enumerate(lines) if ln.strip()), None)
    if first is not None:
        head = re.split(r"[,\s]+", lines[first].strip())
        try:
            [float(t) for t in head]
        except ValueError:
            lines = lines[first + 1 :]
    tokens = [t for t in re.split(r"[,\s]+", "\n".join(lines)) if t]
    if not tokens:
        raise ParseError(f"{path}: no scores found")
    try:
        values = np.array([float(t) for t in tokens])
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None
    if not np.all(np.isfinite(values)):
        raise ParseError(f"{path}: non-finite score")
    return values


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def curve_to_csv(curve: _Curve) -> str:
    """``p,phi`` (or ``q,roc``) header then one row per grid point."""
    header = "q,roc" if isinstance(curve, RocCurve) else "p,phi"
    rows = [f"{_fmt(g)},{_fmt(v)}" for g, v in zip(curve.grid, curve.values)]
    return "\n".join([header, *rows]) + "\n"


def curve_to_json(curve: _Curve, summary: CurveSummary | None = None, extra: dict | None = None) -> str:
    doc = {
        "kind": "roc" if isinstance(curve, RocCurve) else "concentration",
        "grid": [float(g) for g in curve.grid],
        "values": [float(v) for v in curve.values],
        "source": curve.source,
    }
    if summary is not None:
        doc["summary"] = summary.as_dict()
    if extra:
        doc.setdefault("summary", {}).update(extra)
    return json.dumps(doc) + "\n"


def read_curve_csv(text: str) -> tuple[str, np.ndarray, np.ndarray]:
    """Parse :func:`curve_to_csv` output into ``(header, grid, values)``."""
    lines = text.strip().splitlines()
    data = np.array([[float(t) for t in ln.split(",")] for ln in lines[1:]])
    return lines[0], data[:, 0], data[:, 1]
