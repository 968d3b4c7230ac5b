"""The self-shrinker ODE for ``c(t) = rho(t) exp(i f(t))`` and the Lagrangian angle ``theta(t)``::

    c'     = exp(i(theta(t) - theta)) * conj(c)**(N - 1)
    theta' = A * rho**N * sin(f N + theta - theta(t))

``conj(c)**(N - 1)`` is evaluated as ``rho**(N-1) exp(-i(N-1) f)`` with
``f`` the continuously tracked argument of ``c``. ``theta(t)`` is kept as
a real lift and only reduced mod pi when compared.

Note the symbol clash: ``level`` below is the slice level of the moment
map, not the curve ``c(t)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from toriclag.profiles import PI, circ_dist

APEX_TOL = 1e-12


class ShrinkerError(ValueError):
    pass


@dataclass(frozen=True)
class ShrinkerParams:
    N: float
    theta: float = 0.0
    A: float = -1.0

    def __post_init__(self):
        if not self.N > 0:
            raise ShrinkerError("N must be positive")


def self_similar_constant(A: float, level: float) -> float:
    """lambda in ``H = lambda F_perp``, from ``2 level H = A F_perp``."""
    return A / (2.0 * level)


@dataclass(frozen=True)
class ShrinkerState:
    c: complex
    theta_t: float
    f: Optional[float] = None  # unwrapped arg(c); defaults to the principal value

    def __post_init__(self):
        if abs(self.c) == 0:
            raise ShrinkerError("state at apex")

    @property
    def arg(self) -> float:
        return cmath.phase(self.c) if self.f is None else self.f


def _rhs(c: complex, f: float, theta_t: float, p: ShrinkerParams) -> tuple[complex, float]:
    rho = abs(c)
    if rho < APEX_TOL:
        raise ShrinkerError("state at apex")
    N = p.N
    dc = cmath.exp(1j * (theta_t - p.theta)) * rho ** (N - 1) * cmath.exp(-1j * (N - 1) * f)
    dtheta = p.A * rho ** N * math.sin(f * N + p.theta - theta_t)
    return dc, dtheta


def ode_rhs(state: ShrinkerState, params: ShrinkerParams) -> tuple[complex, float]:
    return _rhs(state.c, state.arg, state.theta_t, params)


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    c: np.ndarray       # complex
    theta_t: np.ndarray
    f: np.ndarray       # unwrapped arg(c)
    step: float

    def __post_init__(self):
        if len(self.t) and np.any(np.diff(self.t) <= 0):
            raise ShrinkerError("trajectory times must increase strictly")

    def __len__(self):
        return len(self.t)

    def state(self, i: int) -> ShrinkerState:
        return ShrinkerState(complex(self.c[i]), float(self.theta_t[i]), float(self.f[i]))

    def to_csv(self) -> str:
        lines = ["t,re_c,im_c,theta"]
        for t, c, th in zip(self.t, self.c, self.theta_t):
            lines.append(f"{t:.17g},{c.real:.17g},{c.imag:.17g},{th:.17g}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_samples(cls, t, c, theta_t, f=None) -> "Trajectory":
        t = np.asarray(t, dtype=float)
        c = np.asarray(c, dtype=complex)
        if f is None:
            f = np.unwrap(np.angle(c))
        step = float(t[1] - t[0]) if len(t) > 1 else 0.0
        return cls(t, c, np.asarray(theta_t, dtype=float), np.asarray(f, dtype=float), step)


def integrate(initial: ShrinkerState, params: ShrinkerParams, t_span: tuple[float, float],
              h: float) -> Trajectory:
    """Classical fixed-step RK4.

    The step is adjusted to ``(t1 - t0) / n`` with ``n = round((t1 - t0) / h)``
    so the trajectory ends exactly at ``t1``.
    """
    t0, t1 = map(float, t_span)
    if not h > 0:
        raise ShrinkerError("step must be positive")
    if not (math.isfinite(t0) and math.isfinite(t1)) or t1 <= t0:
        raise ShrinkerError("time span must be finite and increasing")
    n = max(1, int(round((t1 - t0) / h)))
    h = (t1 - t0) / n

    ts = np.empty(n + 1)
    cs = np.empty(n + 1, dtype=complex)
    ths = np.empty(n + 1)
    fs = np.empty(n + 1)
    c, th, f = initial.c, initial.theta_t, initial.arg
    ts[0], cs[0], ths[0], fs[0] = t0, c, th, f

    def lift(z):
        # continuous argument of an intermediate stage relative to the step start
        return f + cmath.phase(z / c)

    for k in range(n):
        try:
            k1c, k1t = _rhs(c, f, th, params)
            z = c + 0.5 * h * k1c
            k2c, k2t = _rhs(z, lift(z), th + 0.5 * h * k1t, params)
            z = c + 0.5 * h * k2c
            k3c, k3t = _rhs(z, lift(z), th + 0.5 * h * k2t, params)
            z = c + h * k3c
            k4c, k4t = _rhs(z, lift(z), th + h * k3t, params)
        except ShrinkerError as exc:
            raise ShrinkerError(f"trajectory hit apex near t = {t0 + k * h:.6g}") from exc
        c_new = c + h / 6.0 * (k1c + 2 * k2c + 2 * k3c + k4c)
        th = th + h / 6.0 * (k1t + 2 * k2t + 2 * k3t + k4t)
        if abs(c_new) < APEX_TOL:
            raise ShrinkerError("trajectory hit apex")
        f = lift(c_new)
        c = c_new
        ts[k + 1] = t0 + (k + 1) * h
        cs[k + 1], ths[k + 1], fs[k + 1] = c, th, f
    return Trajectory(ts, cs, ths, fs, h)


def circle_exact_trajectory(N: float, t_span=(0.0, 2 * PI), h: float = 1e-3) -> Trajectory:
    """Closed-form solution ``c = exp(it)``, ``theta(t) = N t + pi/2`` (with ``theta = 0``, ``A = -N``)."""
    t0, t1 = t_span
    n = max(1, int(round((t1 - t0) / h)))
    t = t0 + (t1 - t0) * np.arange(n + 1) / n
    return Trajectory.from_samples(t, np.exp(1j * t), N * t + PI / 2, f=t.copy())


def circle_initial_state(N: float) -> ShrinkerState:
    return ShrinkerState(1.0 + 0j, PI / 2, 0.0)


def time_derivative(traj: Trajectory, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Centered finite differences on a uniform grid.

    Five-point (fourth order) where the stencil fits, otherwise three-point.
    Returns ``(indices, derivative)``.
    """
    n = len(traj)
    if n < 3:
        raise ShrinkerError("need at least 3 samples")
    dt = np.diff(traj.t)
    h = float(dt.mean())
    if np.max(np.abs(dt - h)) > 1e-9 * max(1.0, abs(h)):
        raise ShrinkerError("finite differences need a uniform time grid")
    v = np.asarray(values)
    if n >= 5:
        idx = np.arange(2, n - 2)
        d = (v[idx - 2] - 8 * v[idx - 1] + 8 * v[idx + 1] - v[idx + 2]) / (12 * h)
    else:
        idx = np.arange(1, n - 1)
        d = (v[idx + 1] - v[idx - 1]) / (2 * h)
    return idx, d


def consistency_residual(traj: Trajectory, params: ShrinkerParams) -> float:
    """max |2 conj(c) c'_fd - 2 rho^N exp(i(theta(t) - theta - f N))| over the grid."""
    idx, dc = time_derivative(traj, traj.c)
    c = traj.c[idx]
    rho = np.abs(c)
    rhs = 2 * rho ** params.N * np.exp(1j * (traj.theta_t[idx] - params.theta - traj.f[idx] * params.N))
    return float(np.max(np.abs(2 * np.conj(c) * dc - rhs)))


def radial_residual(traj: Trajectory, params: ShrinkerParams) -> float:
    """Real part of the same identity: d(rho^2)/dt against 2 rho^N cos(theta(t) - theta - f N)."""
    idx, d_rho2 = time_derivative(traj, np.abs(traj.c) ** 2)
    rho = np.abs(traj.c[idx])
    rhs = 2 * rho ** params.N * np.cos(traj.theta_t[idx] - params.theta - traj.f[idx] * params.N)
    return float(np.max(np.abs(d_rho2 - rhs)))


def angle_equals_theta(traj: Trajectory, params: ShrinkerParams) -> float:
    """Max circular distance (mod pi) between the reconstructed Lagrangian angle and ``theta(t)``.

    The profile is rebuilt from samples only: ``f`` = unwrapped ``arg c``,
    ``kappa' + i f'`` = ``c'/c`` with ``c'`` from finite differences.
    """
    idx, dc = time_derivative(traj, traj.c)
    log_dot = dc / traj.c[idx]
    angle = traj.f[idx] * params.N + params.theta + np.angle(log_dot)
    return max(circ_dist(float(a), float(b)) for a, b in zip(angle, traj.theta_t[idx]))


def max_error_vs(traj: Trajectory, other: Trajectory) -> tuple[float, float]:
    """(max |c - c_ref|, max |theta - theta_ref|) on a shared grid."""
    if len(traj) != len(other) or np.max(np.abs(traj.t - other.t)) > 1e-12:
        raise ShrinkerError("trajectories are on different grids")
    return float(np.max(np.abs(traj.c - other.c))), float(np.max(np.abs(traj.theta_t - other.theta_t)))
