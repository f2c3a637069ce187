"""Excitation probabilities for linear sweeps and the mode-sum integrals built from them.

Each quench protocol drives one mode-decoupled chain through its gap-closing
points at inverse rate tau.  The probability that mode k ends up excited has a
closed Landau-Zener form; every final-state correlator used downstream is a
cosine moment of that probability over the Brillouin zone,

    beta_n = (1/pi) * integral_0^pi p_k cos(n k) dk.

beta_0 is the defect density.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

import numpy as np
from scipy.integrate import IntegrationWarning, quad


class ProtocolKind(enum.Enum):
    """Which sweep is applied to the chain."""

    ISING = "ising"
    MULTICRITICAL = "multicritical"
    THREE_SPIN = "three-spin"


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Carries the best available estimate and its error bound so callers can
    decide whether to proceed anyway.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(f"{message} (estimate={estimate!r}, error_bound={error_bound!r})")
        self.estimate = estimate
        self.error_bound = error_bound


@dataclass(frozen=True)
class QuenchProtocol:
    """A quench protocol: sweep kind, its couplings, and the inverse rate tau.

    tau = 0 is accepted and means the sudden limit (every mode stays excited);
    it is handled analytically downstream rather than through quadrature.
    """

    kind: ProtocolKind
    tau: float
    gamma: float | None = None
    j3: float | None = None

    def __post_init__(self):
        if not (self.tau >= 0.0) or not math.isfinite(self.tau):
            raise ValueError(f"tau must be finite and >= 0, got {self.tau}")
        if self.kind is ProtocolKind.ISING:
            if self.gamma is None or not (0.0 < self.gamma <= 1.0):
                raise ValueError(f"Ising quench requires 0 < gamma <= 1, got {self.gamma}")
            if self.j3 is not None:
                raise ValueError("j3 is only meaningful for the three-spin quench")
        elif self.kind is ProtocolKind.MULTICRITICAL:
            if self.gamma is not None or self.j3 is not None:
                raise ValueError("multicritical quench takes no gamma/j3 parameters")
        elif self.kind is ProtocolKind.THREE_SPIN:
            if self.j3 is None or self.j3 < 0.0:
                raise ValueError(f"three-spin quench requires j3 >= 0, got {self.j3}")
            if self.gamma is not None:
                raise ValueError("gamma is only meaningful for the Ising quench")

    @classmethod
    def ising(cls, gamma: float, tau: float) -> "QuenchProtocol":
        return cls(ProtocolKind.ISING, tau, gamma=gamma)

    @classmethod
    def multicritical(cls, tau: float) -> "QuenchProtocol":
        return cls(ProtocolKind.MULTICRITICAL, tau)

    @classmethod
    def three_spin(cls, j3: float, tau: float) -> "QuenchProtocol":
        return cls(ProtocolKind.THREE_SPIN, tau, j3=j3)


@dataclass(frozen=True)
class BetaSet:
    """Cosine moments beta_n of the excitation probability, for even n <= n_max."""

    n_max: int
    values: Mapping[int, float]

    def __post_init__(self):
        if self.n_max < 0 or self.n_max % 2 != 0:
            raise ValueError(f"n_max must be an even integer >= 0, got {self.n_max}")
        expected = set(range(0, self.n_max + 1, 2))
        if set(self.values) != expected:
            raise ValueError(f"values must hold exactly the even n in [0, {self.n_max}]")
        b0 = self.values[0]
        if not (-1e-12 <= b0 <= 1.0 + 1e-12):
            raise ValueError(f"beta_0 = {b0} outside [0, 1]")
        for n, b in self.values.items():
            if abs(b) > b0 + 1e-10:
                raise ValueError(f"|beta_{n}| = {abs(b)} exceeds beta_0 = {b0}")

    def __getitem__(self, n: int) -> float:
        return self.values[n]


def excitation_probability(protocol: QuenchProtocol, k) -> float | np.ndarray:
    """Probability that mode k is excited after the sweep.

    Accepts scalar or array k in [0, pi].  Closed forms per protocol:
    exp(-pi tau gamma^2 sin^2 k) for the Ising sweep,
    exp(-pi tau (1+cos k)^2 sin^2 k) along the multicritical path, and
    exp(-pi tau (sin k - J3 sin 2k)^2) for the three-spin chain.
    """
    karr = np.asarray(k, dtype=float)
    if np.any(karr < -1e-12) or np.any(karr > np.pi + 1e-12):
        raise ValueError("k must lie in [0, pi]")
    if protocol.kind is ProtocolKind.ISING:
        expo = protocol.gamma**2 * np.sin(karr) ** 2
    elif protocol.kind is ProtocolKind.MULTICRITICAL:
        expo = (1.0 + np.cos(karr)) ** 2 * np.sin(karr) ** 2
    else:
        expo = (np.sin(karr) - protocol.j3 * np.sin(2.0 * karr)) ** 2
    out = np.exp(-np.pi * protocol.tau * expo)
    return float(out) if np.isscalar(k) else out


def _interior_breakpoints(protocol: QuenchProtocol) -> list[float]:
    # p_k = 1 wherever the exponent's prefactor vanishes (k = 0, pi, and the
    # interior zero of sin k - J3 sin 2k for J3 > 1/2), and at large tau the
    # integrand collapses to spikes of width ~ tau^(-1/2) around those zeros.
    # A single Gauss-Kronrod panel on [0, pi] can miss such a spike entirely
    # *and* report zero error, so each zero gets a geometric cascade of panel
    # boundaries: any spike wider than 1e-8 then fills a decade-sized panel
    # where the rule resolves it and adaptive refinement takes over.
    zeros = [0.0, math.pi]
    if protocol.kind is ProtocolKind.THREE_SPIN and protocol.j3 > 0.5:
        zeros.append(math.acos(1.0 / (2.0 * protocol.j3)))
    pts = set()
    for z in zeros:
        for j in range(1, 9):
            w = 10.0**-j
            for candidate in (z - w, z + w):
                if 1e-12 < candidate < math.pi - 1e-12:
                    pts.add(candidate)
    return sorted(pts)


def beta_n(protocol: QuenchProtocol, n: int, tol: float = 1e-10) -> float:
    """Cosine moment (1/pi) * integral_0^pi p_k cos(n k) dk.

    Odd n is accepted; the result is ~0 only when p_k has the k -> pi - k
    symmetry (Ising), so for the other protocols it is computed, not assumed.
    """
    if n < 0 or int(n) != n:
        raise ValueError(f"n must be a nonnegative integer, got {n}")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if protocol.tau == 0.0:
        # Sudden limit: p_k == 1, and the cosine integrates to zero unless n == 0.
        return 1.0 if n == 0 else 0.0

    def integrand(k):
        return excitation_probability(protocol, float(k)) * math.cos(n * k)

    points = _interior_breakpoints(protocol)
    with warnings.catch_warnings():
        # roundoff warnings at near-machine tolerances are expected; accuracy
        # is judged from the returned error bound below
        warnings.simplefilter("ignore", IntegrationWarning)
        value, abserr = quad(
            integrand, 0.0, np.pi, epsabs=1e-14, epsrel=tol, limit=800, points=points
        )
    value /= np.pi
    abserr /= np.pi
    # quad may stop early on roundoff; accept if the reported bound is still
    # within a loose multiple of what was asked for.
    if abserr > max(1e-13, 50.0 * tol * max(abs(value), 1e-3)):
        raise QuadratureError(
            f"beta_{n} did not converge to tol={tol} for {protocol}", value, abserr
        )
    return value


@lru_cache(maxsize=4096)
def _beta_cached(protocol: QuenchProtocol, n: int, tol: float) -> float:
    return beta_n(protocol, n, tol)


def compute_betas(protocol: QuenchProtocol, n_max: int, tol: float = 1e-10) -> BetaSet:
    """Evaluate all even moments up to n_max, sharing work across calls.

    Quadrature dominates the runtime of the downstream pipeline, so results
    are memoized per (protocol, n, tol); the cache is invisible to callers
    and safe under concurrent use.
    """
    values = {n: _beta_cached(protocol, n, tol) for n in range(0, n_max + 1, 2)}
    return BetaSet(n_max=n_max, values=values)


def defect_density(protocol: QuenchProtocol, tol: float = 1e-10) -> float:
    """Density of excited modes after the sweep; equals beta_0."""
    return _beta_cached(protocol, 0, tol)
