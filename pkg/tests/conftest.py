"""Shared fixtures: random state generators and the acceptance-criterion report."""

from __future__ import annotations

import numpy as np
import pytest

from spinquench.xstate import XStateDensityMatrix

_CRITERION_RESULTS: list[tuple[str, bool, str]] = []


def record_criterion(name: str, ok: bool, detail: str = "") -> None:
    """Register one acceptance criterion outcome for the end-of-run summary."""
    _CRITERION_RESULTS.append((name, ok, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERION_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _CRITERION_RESULTS:
        status = "PASS" if ok else "FAIL"
        line = f"[{status}] {name}"
        if detail:
            line += f" — {detail}"
        terminalreporter.write_line(line)


def random_x_state(rng: np.random.Generator) -> XStateDensityMatrix:
    """A positive X state with random populations, coherences, and phases."""
    w = rng.dirichlet(np.ones(4))
    a_plus, a_minus = w[0], w[1]
    a_zero = (w[2] + w[3]) / 2.0
    b1 = (
        rng.uniform(0.0, 1.0)
        * np.sqrt(a_plus * a_minus)
        * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
    )
    b2 = rng.uniform(0.0, 1.0) * a_zero * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
    return XStateDensityMatrix(
        a_plus=a_plus, a_minus=a_minus, a_zero=a_zero, b1=b1, b2=b2
    )


def random_qubit_state(rng: np.random.Generator) -> np.ndarray:
    """A random single-qubit density matrix (mixed, full support a.s.)."""
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_product_state(rng: np.random.Generator) -> np.ndarray:
    return np.kron(random_qubit_state(rng), random_qubit_state(rng))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
