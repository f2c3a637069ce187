"""Final-state two-spin correlators after a quench, and the measures built on them.

The correlators at separation n are polynomials in the moments beta_0 .. beta_n
(closed expressions exist for n = 2, 4, 6).  `measures` runs the full pipeline
correlators -> X state -> {mutual information, classical correlation, discord,
concurrence}.

`closed_form_I_n2` / `closed_form_C_n2` evaluate the printed n = 2 expressions
verbatim as an independent cross-check of the pipeline.  Note: the closed-form
classical correlation is the value for a measurement along the transverse (x)
axis.  For these states the optimal measurement is the polar (z) axis whenever
beta_0 differs from 1/2, so the optimizing pipeline returns a strictly larger
classical correlation (and smaller discord) than the closed forms; only the
mutual informations coincide.  See tests/test_quench.py for the documented
comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .kernels import QuenchProtocol, compute_betas
from .xstate import (
    CorrelationReport,
    CorrelatorSet,
    build_xstate,
    classical_correlation,
    concurrence_xstate,
    mutual_information,
)

_SEPARATIONS = (2, 4, 6)


@dataclass(frozen=True)
class QuenchMeasureRequest:
    """One evaluation point: a protocol and a spin separation n in {2, 4, 6}."""

    protocol: QuenchProtocol
    n: int

    def __post_init__(self):
        if self.n not in _SEPARATIONS:
            raise ValueError(f"separation n must be one of {_SEPARATIONS}, got {self.n}")


def correlators(protocol: QuenchProtocol, n: int, tol: float = 1e-10) -> CorrelatorSet:
    """Two-spin correlators at separation n in the final state of the quench."""
    if n not in _SEPARATIONS:
        raise ValueError(f"separation n must be one of {_SEPARATIONS}, got {n}")
    betas = compute_betas(protocol, n_max=n, tol=tol)
    b0 = betas[0]
    m = 1.0 - 2.0 * b0
    c4 = m
    c3 = c4 * c4 - 4.0 * betas[n] ** 2
    if n == 2:
        c1 = 0.5 * betas[2] * m
    elif n == 4:
        b2, b4 = betas[2], betas[4]
        c1 = m * m * b2 * b2 - 4.0 * b2**4 + 0.5 * b4 * m**3 - 2.0 * b2 * b2 * b4 * m
    else:
        b2, b4, b6 = betas[2], betas[4], betas[6]
        first = b6 * (m * m - 4.0 * b2 * b2) + 4.0 * b2 * (b2 * b2 + b4 * b4 - b4 * m)
        second = 16.0 * b2 * b2 * b4 + m * (m * m - 8.0 * b2 * b2 - 4.0 * b4 * b4)
        c1 = 0.5 * first * second
    return CorrelatorSet(c1=c1, c2=c1, c3=c3, c4=c4)


def measures(protocol: QuenchProtocol, n: int, tol: float = 1e-10) -> CorrelationReport:
    """Full correlation report for one (protocol, separation) point."""
    c = correlators(protocol, n, tol=tol)
    state = build_xstate(c)
    rho = state.to_matrix()
    i_val = mutual_information(rho)
    c_val, basis = classical_correlation(rho)
    return CorrelationReport(
        mutual_information=i_val,
        classical_correlation=min(c_val, i_val),
        discord=max(i_val - c_val, 0.0),
        concurrence=concurrence_xstate(state),
        argmax_basis=basis,
    )


def _term(x: float) -> float:
    # x log2 x with the 0 log 0 = 0 convention; negative arguments signal an
    # invalid (beta_0, beta_2) pair
    if x < 0.0:
        if x > -1e-15:  # roundoff at the boundary of the valid domain
            return 0.0
        raise ValueError(f"log argument {x} is negative: invalid beta pair")
    if x == 0.0:
        return 0.0
    return x * math.log2(x)


def _check_beta_pair(beta0: float, beta2: float):
    if not (0.0 <= beta0 <= 1.0):
        raise ValueError(f"beta_0 = {beta0} outside [0, 1]")
    if abs(beta2) > beta0 + 1e-12:
        raise ValueError(f"|beta_2| = {abs(beta2)} exceeds beta_0 = {beta0}")


def closed_form_I_n2(beta0: float, beta2: float) -> float:
    """Printed closed-form mutual information at separation 2, in bits."""
    _check_beta_pair(beta0, beta2)
    u = 4.0 * beta0 * (1.0 - beta0) + 4.0 * beta2 * beta2
    v = beta2 * (1.0 - 2.0 * beta0)
    return (
        -2.0 * _term(1.0 - beta0)
        + _term((1.0 - beta0) ** 2 - beta2 * beta2)
        - 2.0 * _term(beta0)
        + _term(beta0 * beta0 - beta2 * beta2)
        + _term(0.25 * (u + v))
        + _term(0.25 * (u - v))
    )


def closed_form_C_n2(beta0: float, beta2: float) -> float:
    """Printed closed-form classical correlation at separation 2, in bits.

    Equals the transverse-axis measurement value, not the maximum over bases
    (see the module docstring).
    """
    _check_beta_pair(beta0, beta2)
    g = (1.0 - 2.0 * beta0) * math.sqrt(1.0 + beta2 * beta2 / 4.0)
    return (
        -_term(1.0 - beta0)
        - _term(beta0)
        + _term(0.5 * (1.0 - g))
        + _term(0.5 * (1.0 + g))
    )
