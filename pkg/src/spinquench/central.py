"""Decoherence of two central qubits globally coupled to a driven spin chain.

The qubits shift the chain's transverse field by +delta or -delta depending on
their joint polarization, so the environment evolves along two branches.  Each
momentum mode is a driven two-level problem

    i d/dt (u, v)^T = H_k^pm(t) (u, v)^T,
    H_k^pm(t) = 2 [[h(t) +- delta + cos k, gamma sin k],
                   [gamma sin k, -(h(t) +- delta + cos k)]],

with h(t) = 1 - t/tau, so the first critical point h = 1 is crossed at t = 0.
The decoherence factor D(t) is the squared overlap of the two branch wave
functions, a product over modes accumulated in log space.  The qubits start in
a Werner state; their reduced state depends on time only through D(t).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .xstate import XStateDensityMatrix, discord

logger = logging.getLogger(__name__)

_DRIFT_LOG_THRESHOLD = 1e-10  # per-step norm drift worth reporting

# Dormand-Prince 5(4) tableau
_DP_NODES = (1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_ERR = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


class IntegrationError(RuntimeError):
    """Mode evolution failed (step-size underflow); carries the failure time."""

    def __init__(self, message: str, t: float):
        super().__init__(f"{message} at t = {t}")
        self.t = t


@dataclass(frozen=True)
class CentralConfig:
    """Parameters of one central-qubit run.

    n_spins environment sites, coupling delta, inverse sweep rate tau,
    anisotropy gamma, Werner weight a, and the observation times t_grid.
    The sweep starts at field h_start, i.e. at t = -tau (h_start - 1).
    """

    n_spins: int
    delta: float
    tau: float
    a: float
    t_grid: tuple[float, ...]
    gamma: float = 1.0
    h_start: float = 10.0
    rtol: float = 1e-9
    atol: float = 1e-12

    def __post_init__(self):
        if self.n_spins < 2 or self.n_spins % 2 != 0:
            raise ValueError(f"n_spins must be even and >= 2, got {self.n_spins}")
        if self.delta < 0.0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")
        if self.tau <= 0.0:
            raise ValueError(f"tau must be > 0, got {self.tau}")
        if not (0.0 <= self.a <= 1.0):
            raise ValueError(f"Werner weight a must be in [0, 1], got {self.a}")
        if not (0.0 < self.gamma <= 1.0):
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")
        # the evolution must start deep in the adiabatic regime
        if self.h_start - 1.0 < 10.0 * max(self.delta, 1.0 / math.sqrt(self.tau)):
            raise ValueError(
                f"h_start = {self.h_start} too close to the critical point: "
                f"require h_start - 1 >= 10 max(delta, tau^-1/2)"
            )
        grid = tuple(float(t) for t in self.t_grid)
        if len(grid) == 0:
            raise ValueError("t_grid must not be empty")
        if any(b <= a_ for a_, b in zip(grid, grid[1:])):
            raise ValueError("t_grid must be strictly increasing")
        if grid[0] < self.t_start:
            raise ValueError(
                f"t_grid starts before the sweep begins at t = {self.t_start}"
            )
        object.__setattr__(self, "t_grid", grid)

    @property
    def t_start(self) -> float:
        return -self.tau * (self.h_start - 1.0)

    def h_of_t(self, t: float) -> float:
        return 1.0 - t / self.tau


@dataclass(frozen=True)
class ModeState:
    """Amplitudes of |0> and |k,-k> for one momentum mode."""

    u: complex
    v: complex

    def __post_init__(self):
        nrm = abs(self.u) ** 2 + abs(self.v) ** 2
        if abs(nrm - 1.0) > 1e-8:
            raise ValueError(f"mode state norm^2 = {nrm}, expected 1")


@dataclass
class DecoherenceTrace:
    """Time series of the decoherence factor and the qubit correlations."""

    t: np.ndarray
    h: np.ndarray
    decoherence: np.ndarray
    discord: np.ndarray
    concurrence: np.ndarray
    renorm_events: int = 0
    max_step_drift: float = 0.0

    def __post_init__(self):
        if np.any(self.decoherence < -1e-12) or np.any(self.decoherence > 1.0 + 1e-9):
            raise ValueError("decoherence factor outside [0, 1]")
        if np.any(self.discord < -1e-9):
            raise ValueError("negative discord in trace")


def mode_momenta(n_spins: int) -> np.ndarray:
    """Antiperiodic-sector momenta k_m = (2m - 1) pi / N, m = 1 .. N/2."""
    if n_spins < 2 or n_spins % 2 != 0:
        raise ValueError(f"n_spins must be even and >= 2, got {n_spins}")
    m = np.arange(1, n_spins // 2 + 1)
    return (2 * m - 1) * np.pi / n_spins


def _branch_sign(branch) -> float:
    if branch in ("+", +1, 1.0):
        return 1.0
    if branch in ("-", -1, -1.0):
        return -1.0
    raise ValueError(f"branch must be '+' or '-', got {branch!r}")


def branch_hamiltonian(k: float, t: float, branch, config: CentralConfig) -> np.ndarray:
    """The 2x2 mode Hamiltonian of the given branch at time t."""
    diag = 2.0 * (config.h_of_t(t) + _branch_sign(branch) * config.delta + math.cos(k))
    off = 2.0 * config.gamma * math.sin(k)
    return np.array([[diag, off], [off, -diag]])


def initial_mode_state(k: float, branch, config: CentralConfig) -> ModeState:
    """Ground state of the branch Hamiltonian at the start of the sweep.

    Phase fixed so u is real and nonnegative; in the dominant-field limit
    (h_start -> infinity) the state tends to (u, v) = (0, 1) up to the sign
    of v.
    """
    h = branch_hamiltonian(k, config.t_start, branch, config)
    a, b = h[0, 0], h[0, 1]
    e = math.hypot(a, b)
    u, v = b, -(a + e)
    nrm = math.hypot(u, v)
    if nrm < 1e-300:  # a < 0 and b = 0: ground state is exactly |0>
        return ModeState(1.0 + 0.0j, 0.0j)
    return ModeState(complex(u / nrm), complex(v / nrm))


class _BranchEnsemble:
    """Batched RK45 evolution of many (mode, branch) two-level systems.

    State is a (2, M) complex array of (u, v) rows.  Every accepted step is
    renormalized per mode (the drift is logged when it exceeds 1e-10); the
    right-hand side is linear, so the stored derivative is rescaled rather
    than recomputed.
    """

    def __init__(self, cos_k, sin_k, eps, config: CentralConfig, t0: float, y0: np.ndarray):
        self._a0 = 2.0 * (1.0 + eps + cos_k)  # a(t) = a0 - (2/tau) t
        self._aslope = -2.0 / config.tau
        self._b = 2.0 * config.gamma * sin_k
        self.rtol = config.rtol
        self.atol = config.atol
        self.t = t0
        self.y = np.array(y0, dtype=complex)
        self._f = self._rhs(t0, self.y)
        self._h = min(0.1, 1e-2 / max(float(np.max(np.abs(self._f))), 1e-8))
        self.renorm_events = 0
        self.max_step_drift = 0.0

    def _rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        a = self._a0 + self._aslope * t
        out = np.empty_like(y)
        out[0] = a * y[0] + self._b * y[1]
        out[1] = self._b * y[0] - a * y[1]
        out *= -1j
        return out

    def _renormalize(self, y: np.ndarray, f: np.ndarray):
        nrm2 = np.abs(y[0]) ** 2 + np.abs(y[1]) ** 2
        drift = float(np.max(np.abs(nrm2 - 1.0)))
        if drift > _DRIFT_LOG_THRESHOLD:
            self.renorm_events += 1
            logger.debug("renormalizing: step norm drift %.3e at t = %.6g", drift, self.t)
        self.max_step_drift = max(self.max_step_drift, drift)
        scale = 1.0 / np.sqrt(nrm2)
        y *= scale
        f *= scale  # rhs is linear in y
        return y, f

    def advance(self, t_target: float):
        if t_target < self.t - 1e-12:
            raise ValueError(f"cannot integrate backwards: {t_target} < {self.t}")
        k = [None] * 7
        while self.t < t_target - 1e-12:
            h_prop = self._h
            h = min(h_prop, t_target - self.t)
            if h < 1e-14 * max(abs(self.t), 1.0):
                raise IntegrationError("step size underflow", self.t)
            k[0] = self._f
            for i, row in enumerate(_DP_A):
                acc = row[0] * k[0]
                for j in range(1, i + 1):
                    if row[j] != 0.0:
                        acc += row[j] * k[j]
                k[i + 1] = self._rhs(self.t + _DP_NODES[i] * h, self.y + h * acc)
            # the last tableau row is the 5th-order solution; k[6] is FSAL
            y_new = self.y + h * (
                _DP_A[5][0] * k[0]
                + _DP_A[5][2] * k[2]
                + _DP_A[5][3] * k[3]
                + _DP_A[5][4] * k[4]
                + _DP_A[5][5] * k[5]
            )
            err = h * (
                _DP_ERR[0] * k[0]
                + _DP_ERR[2] * k[2]
                + _DP_ERR[3] * k[3]
                + _DP_ERR[4] * k[4]
                + _DP_ERR[5] * k[5]
                + _DP_ERR[6] * k[6]
            )
            scale = self.atol + self.rtol * np.maximum(np.abs(self.y), np.abs(y_new))
            err_norm = math.sqrt(float(np.mean(np.abs(err / scale) ** 2)))
            factor = min(5.0, max(0.2, 0.9 * (err_norm + 1e-300) ** -0.2))
            if err_norm <= 1.0:
                self.t += h
                self.y, self._f = self._renormalize(y_new, k[6])
                # a step clipped to land on t_target must not shrink the
                # proposal for the next segment
                self._h = max(h * factor, h_prop) if h < h_prop else h * factor
            else:
                self._h = h * factor
        return self


class ModeEnsemble:
    """Both branches of every momentum mode, marched forward together."""

    def __init__(self, config: CentralConfig):
        self.config = config
        k = mode_momenta(config.n_spins)
        self._n_modes = len(k)
        cos_k = np.concatenate([np.cos(k), np.cos(k)])
        sin_k = np.concatenate([np.sin(k), np.sin(k)])
        eps = np.concatenate(
            [np.full(self._n_modes, config.delta), np.full(self._n_modes, -config.delta)]
        )
        a = 2.0 * (config.h_of_t(config.t_start) + eps + cos_k)
        b = 2.0 * config.gamma * sin_k
        e = np.hypot(a, b)
        y0 = np.stack([b, -(a + e)]).astype(complex)
        y0 /= np.sqrt(np.abs(y0[0]) ** 2 + np.abs(y0[1]) ** 2)
        self._ens = _BranchEnsemble(cos_k, sin_k, eps, config, config.t_start, y0)

    @property
    def t(self) -> float:
        return self._ens.t

    @property
    def renorm_events(self) -> int:
        return self._ens.renorm_events

    @property
    def max_step_drift(self) -> float:
        return self._ens.max_step_drift

    def advance(self, t: float) -> "ModeEnsemble":
        self._ens.advance(t)
        return self

    def mode_overlaps(self) -> np.ndarray:
        """F_k = |<psi_k^+|psi_k^->|^2 for every positive momentum."""
        y = self._ens.y
        n = self._n_modes
        inner = y[0, :n].conj() * y[0, n:] + y[1, :n].conj() * y[1, n:]
        return np.abs(inner) ** 2

    def decoherence_factor(self) -> float:
        # unit-vector overlaps can exceed 1 by roundoff after renormalization
        f = np.minimum(self.mode_overlaps(), 1.0)
        if np.any(f <= 0.0):
            return 0.0
        return float(np.exp(np.sum(np.log(f))))


def evolve_mode(
    k: float, branch, config: CentralConfig, t_from: float, t_to: float, state: ModeState
) -> ModeState:
    """Advance one mode state under the branch Hamiltonian from t_from to t_to."""
    y0 = np.array([[state.u], [state.v]], dtype=complex)
    ens = _BranchEnsemble(
        np.array([math.cos(k)]),
        np.array([math.sin(k)]),
        np.array([_branch_sign(branch) * config.delta]),
        config,
        t_from,
        y0,
    )
    ens.advance(t_to)
    return ModeState(complex(ens.y[0, 0]), complex(ens.y[1, 0]))


def decoherence_factor(config: CentralConfig, t: float) -> float:
    """D(t) for a fresh run of the configured sweep (product over modes)."""
    return ModeEnsemble(config).advance(t).decoherence_factor()


def approx_Fk(k: float, t: float, delta: float, tau: float) -> float:
    """Weak-coupling per-mode overlap 1 - 4 sin^2(4 t delta) (e^{-2 pi tau k^2} - e^{-4 pi tau k^2}).

    k is the momentum offset from the critical mode of the band excited at the
    crossing, and t the time elapsed since that crossing.
    """
    g = math.exp(-2.0 * math.pi * tau * k * k) - math.exp(-4.0 * math.pi * tau * k * k)
    val = 1.0 - 4.0 * math.sin(4.0 * t * delta) ** 2 * g
    return min(max(val, 0.0), 1.0)


def weak_coupling_D(t: float, config: CentralConfig) -> float:
    """Closed-form decoherence factor exp(-8 (sqrt 2 - 1) N delta^2 t^2 / (pi sqrt tau)).

    Valid for delta -> 0 after the first critical crossing (t measured from
    it).  The adiabatic-mode fidelity prefactor deviates from 1 only at
    O(N delta^2) and is taken as exactly 1.
    """
    expo = (
        8.0
        * (math.sqrt(2.0) - 1.0)
        * config.n_spins
        * config.delta**2
        * t**2
        / (math.pi * math.sqrt(config.tau))
    )
    return math.exp(-expo)


def qubit_state(a: float, d: float) -> XStateDensityMatrix:
    """Reduced state of the central qubits: Werner weight a, decoherence factor d."""
    if not (0.0 <= a <= 1.0):
        raise ValueError(f"a must be in [0, 1], got {a}")
    if not (-1e-12 <= d <= 1.0 + 1e-12):
        raise ValueError(f"decoherence factor must be in [0, 1], got {d}")
    d = min(max(d, 0.0), 1.0)
    return XStateDensityMatrix(
        a_plus=(1.0 + a) / 4.0,
        a_minus=(1.0 + a) / 4.0,
        a_zero=(1.0 - a) / 4.0,
        b1=complex(a * math.sqrt(d) / 2.0),
        b2=0.0,
    )


def concurrence_werner(a: float, d: float) -> float:
    """Concurrence max[a (sqrt d + 1/2) - 1/2, 0] of the decohered Werner state."""
    if not (0.0 <= a <= 1.0):
        raise ValueError(f"a must be in [0, 1], got {a}")
    if not (0.0 <= d <= 1.0):
        raise ValueError(f"decoherence factor must be in [0, 1], got {d}")
    return max(a * (math.sqrt(d) + 0.5) - 0.5, 0.0)


def trace_run(config: CentralConfig) -> DecoherenceTrace:
    """March the environment over config.t_grid and record (D, Q, C_nc) rows.

    All modes advance incrementally (never re-integrated from the start);
    discord comes from the general measurement optimizer applied to the
    reduced qubit state.
    """
    ens = ModeEnsemble(config)
    ts, hs, ds, qs, cs = [], [], [], [], []
    for t in config.t_grid:
        ens.advance(t)
        d = ens.decoherence_factor()
        rho = qubit_state(config.a, d)
        ts.append(t)
        hs.append(config.h_of_t(t))
        ds.append(d)
        qs.append(discord(rho))
        cs.append(concurrence_werner(config.a, d))
    return DecoherenceTrace(
        t=np.array(ts),
        h=np.array(hs),
        decoherence=np.array(ds),
        discord=np.array(qs),
        concurrence=np.array(cs),
        renorm_events=ens.renorm_events,
        max_step_drift=ens.max_step_drift,
    )
