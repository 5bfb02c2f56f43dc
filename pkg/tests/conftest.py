"""Shared fixtures and the acceptance report printed at the end of a run."""

import pytest

CRITERIA = {
    1: "exponential pair closed forms",
    2: "length-biased exponential closed forms",
    3: "threshold sweep reproduces ROC",
    4: "Lorenz curve specialization",
    5: "AUC and generalized Gini identity",
    6: "binormal model by Monte Carlo",
    7: "Monte Carlo vs closed-form H_X",
    8: "empirical estimator convergence",
    9: "shape invariants of all curves",
    10: "degenerate pair rejected",
}

_results: dict[int, tuple[bool, str]] = {}


class AcceptanceReport:
    def record(self, criterion: int, passed: bool, detail: str) -> None:
        _results[criterion] = (bool(passed), detail)


@pytest.fixture(scope="session")
def acceptance():
    return AcceptanceReport()


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for k, title in CRITERIA.items():
        if k in _results:
            passed, detail = _results[k]
            status = "PASS" if passed else "FAIL"
        else:
            status, detail = "NOT RUN", ""
        terminalreporter.write_line(f"criterion {k:2d} {status:7s} {title}: {detail}")
