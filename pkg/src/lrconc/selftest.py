"""Built-in battery of closed-form checks, run by ``lrconc selftest``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .conc import concentration, lorenz_curve, roc_opt, summarize, tpr_fpr
from .dist import Exponential, Normal, length_biased
from .empirical import ScoreSample, mann_whitney_auc, mann_whitney_se
from .errors import AtomError
from .lrdist import (
    DistributionPair,
    Population,
    build_lr_distribution,
    lr_cdf_analytic,
    lr_cdf_monte_carlo,
)


@dataclass(frozen=True)
class Check:
    name: str
    computed: float | str
    expected: float | str
    tolerance: float | str
    passed: bool


def _close(name, computed, expected, tol) -> Check:
    return Check(name, computed, expected, tol, bool(abs(computed - expected) <= tol))


def run_checks(seed: int = 0, mc_n: int = 1_000_000) -> list[Check]:
    checks = []
    exp_lrd = build_lr_distribution(DistributionPair(Exponential(2.0), Exponential(1.0)))
    c1 = concentration(exp_lrd)
    s1 = summarize(c1)
    checks.append(_close("exp pair r=2 phi(0.75) = 1-(1-p)^(1/r)", float(c1.values[768]), 0.5, 1e-10))
    checks.append(_close("exp pair r=2 ROC(0.25) = q^(1/r)", float(roc_opt(c1).values[256]), 0.5, 1e-10))
    checks.append(_close("exp pair r=2 AUC = r/(r+1)", s1.auc, 2 / 3, 1e-9))
    s3 = summarize(concentration(build_lr_distribution(DistributionPair(Exponential(3.0), Exponential(1.0)))))
    checks.append(_close("exp pair r=3 AUC = r/(r+1)", s3.auc, 3 / 4, 1e-9))
    checks.append(_close("AUC-Gini identity residual (exp pair r=2)", s1.identity_residual, 0.0, 2e-9))
    op = tpr_fpr(exp_lrd, 0.75)
    checks.append(_close("threshold sweep: TPR(t=0.75) = ROC(1-t)", op.tpr, 0.5, 1e-10))

    x = Exponential(1.0)
    lb_lrd = build_lr_distribution(DistributionPair(x, length_biased(x)))
    c2 = concentration(lb_lrd)
    s2 = summarize(c2)
    checks.append(
        _close("length-biased exp phi(0.5) = p+(1-p)log(1-p)", float(c2.values[512]), 0.5 + 0.5 * math.log(0.5), 1e-10)
    )
    checks.append(_close("length-biased exp AUC = 3/4", s2.auc, 0.75, 1e-9))
    checks.append(_close("length-biased exp Gini_gen = 1/2", s2.gini_gen, 0.5, 2e-9))
    sup = float(np.max(np.abs(c2.values - lorenz_curve(x).values)))
    checks.append(_close("Lorenz curve = LR concentration (sup-norm)", sup, 0.0, 1e-8))

    pair1 = DistributionPair(Exponential(2.0), Exponential(1.0))
    mc = lr_cdf_monte_carlo(pair1, Population.X, 1.0, n=mc_n, seed=seed)
    exact = float(lr_cdf_analytic(pair1, Population.X, 1.0))
    checks.append(_close("Monte Carlo H_X(1) vs closed form (4 SE)", mc.estimate, exact, 4 * mc.std_error))

    binormal = build_lr_distribution(DistributionPair(Normal(0.0, 1.0), Normal(1.0, 1.0)), mc_n=mc_n, seed=seed)
    sb = summarize(concentration(binormal))
    lx, ly = binormal.log_lr_samples()
    se = mann_whitney_se(ScoreSample(lx), ScoreSample(ly))
    target = float(special.ndtr(1.0 / math.sqrt(2.0)))
    checks.append(_close("Binormal equal-var AUC = Phi(1/sqrt 2) (4 SE)", sb.auc, target, 4 * se))
    checks.append(
        _close(
            "Binormal Mann-Whitney AUC = Phi(1/sqrt 2) (4 SE)",
            mann_whitney_auc(ScoreSample(lx), ScoreSample(ly)),
            target,
            4 * se,
        )
    )

    try:
        build_lr_distribution(DistributionPair(Exponential(1.0), Exponential(1.0)))
        outcome = "no error"
    except AtomError:
        outcome = "AtomError"
    checks.append(Check("Identical pair rejected as atom", outcome, "AtomError", "-", outcome == "AtomError"))
    return checks


def _cell(v) -> str:
    return format(v, ".12g") if isinstance(v, float) else str(v)


def format_table(checks: list[Check]) -> str:
    rows = [("check", "computed", "expected", "tolerance", "result")]
    rows += [
        (c.name, _cell(c.computed), _cell(c.expected), _cell(c.tolerance), "PASS" if c.passed else "FAIL")
        for c in checks
    ]
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows) + "\n"
