"""Motion profiles ``F(p, t) = rho(t) * exp(f(t) zeta) tau0 * p`` and their Lagrangian angles.

Angles valued mod pi are canonicalised to ``[0, pi)``; comparisons use the
circular distance.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from toriclag import exact_linalg as el

PI = math.pi
_AGREE_TOL = 1e-9


class ProfileError(ValueError):
    pass


def mod_pi(a: float) -> float:
    r = math.fmod(a, PI)
    if r < 0:
        r += PI
    return 0.0 if r >= PI else r


def mod_2pi(a: float) -> float:
    r = math.fmod(a, 2 * PI)
    if r < 0:
        r += 2 * PI
    return 0.0 if r >= 2 * PI else r


def circ_dist(a: float, b: float, period: float = PI) -> float:
    r = math.fmod(a - b, period)
    r = abs(r)
    return min(r, period - r)


@dataclass(frozen=True)
class MotionProfile:
    """Functions ``f`` and ``rho`` of ``t`` together with their derivatives.

    ``interval`` is an open interval ``(t_min, t_max)``; for closed
    profiles it is one period.
    """

    f: Callable[[float], float]
    f_dot: Callable[[float], float]
    rho: Callable[[float], float]
    rho_dot: Callable[[float], float]
    interval: tuple[float, float]
    nu: tuple[float, ...] = (0.0, 0.0, 0.0)
    closed: bool = False
    rho_constant: bool = False
    name: str = "custom"

    def __post_init__(self):
        a, b = self.interval
        if not a < b:
            raise ProfileError("empty interval")
        for t in self.sample_points(17):
            if not self.rho(t) > 0:
                raise ProfileError(f"rho must be positive (rho({t}) = {self.rho(t)})")
            if self.f_dot(t) == 0:
                raise ProfileError("f_dot must be non-vanishing on the interval")
            if self.rho_constant and self.rho_dot(t) != 0:
                raise ProfileError("profile flagged rho_constant has rho_dot != 0")

    def sample_points(self, n: int, margin: float = 0.0) -> list[float]:
        a, b = self.interval
        if math.isinf(a) or math.isinf(b):
            a, b = (-10.0, 10.0)
        a, b = a + margin, b - margin
        return [a + (b - a) * (k + 1) / (n + 1) for k in range(n)]

    def kappa(self, t: float) -> float:
        return math.log(self.rho(t))

    def kappa_dot(self, t: float) -> float:
        return self.rho_dot(t) / self.rho(t)


@dataclass(frozen=True)
class AngleParams:
    """``N = <gamma, zeta>``, ``theta = sum gamma_k nu^k`` and the target phase ``theta0``."""

    N: float
    theta: float = 0.0
    theta0: float = 0.0
    gamma: Optional[tuple[int, ...]] = None
    zeta: Optional[tuple[Fraction, ...]] = None
    xi: Optional[tuple[Fraction, ...]] = None
    N_exact: Optional[Fraction] = field(default=None, compare=False)

    @classmethod
    def from_data(cls, gamma: Sequence[int], zeta: Sequence, xi: Sequence,
                  nu: Sequence[float] = (0.0, 0.0, 0.0), theta0: float = 0.0) -> "AngleParams":
        gamma = el.as_int_vector(gamma)
        zeta = el.as_rational_vector(zeta)
        xi = el.as_rational_vector(xi)
        n = Fraction(el.dot(gamma, zeta))
        theta = sum(g * v for g, v in zip(gamma, nu))
        return cls(float(n), theta, theta0, gamma, zeta, xi, n)

    @property
    def zeta_is_reeb(self) -> bool:
        if self.zeta is None or self.xi is None:
            return True
        return self.zeta == self.xi

    @property
    def N_is_zero(self) -> bool:
        if self.N_exact is not None:
            return self.N_exact == 0
        return self.N == 0


def _stationary(kd, fd):
    if kd == 0 and fd == 0:
        raise ProfileError("profile stationary")


def angle_reeb_case(profile: MotionProfile, params: AngleParams, t: float) -> float:
    """Lagrangian angle ``f N + theta + arg(kappa' + i f')`` mod pi, for ``zeta = xi``.

    Also evaluated as ``arg(h'(t))`` for ``h = exp(N kappa + i(f N + theta))``;
    the two must agree.
    """
    if not params.zeta_is_reeb:
        raise ProfileError("angle_reeb_case requires zeta = xi")
    kd, fd = profile.kappa_dot(t), profile.f_dot(t)
    _stationary(kd, fd)
    f, N = profile.f(t), params.N
    direct = f * N + params.theta + math.atan2(fd, kd)
    h_dot = N * complex(kd, fd) * cmath.exp(N * profile.kappa(t) + 1j * (f * N + params.theta))
    via_h = cmath.phase(h_dot)
    if N > 0 and circ_dist(direct, via_h) > _AGREE_TOL * max(1.0, abs(direct)):
        raise ProfileError(f"angle evaluations disagree at t={t}: {direct} vs {via_h}")
    return mod_pi(direct)


def angle_rho_const_case(profile: MotionProfile, params: AngleParams, t: float) -> float:
    if not profile.rho_constant or profile.rho_dot(t) != 0:
        raise ProfileError("regime mismatch: rho is not constant")
    return mod_pi(profile.f(t) * params.N + params.theta + PI / 2)


def check_slag_rho_const(params: AngleParams, tol: float = 1e-12) -> bool:
    """Constant-rho profiles are special Lagrangian iff N = 0 and theta + pi/2 = theta0 (mod pi)."""
    return params.N_is_zero and circ_dist(params.theta + PI / 2, params.theta0) <= tol


def slag_conserved(profile: MotionProfile, params: AngleParams, t: float) -> float:
    """``Im(exp(i(theta - theta0)) * exp(N (kappa + i f)))``; constant iff special Lagrangian."""
    N = params.N
    w = cmath.exp(1j * (params.theta - params.theta0)) * cmath.exp(N * complex(profile.kappa(t), profile.f(t)))
    return w.imag


def make_slag_profile(params: AngleParams, C: float, interval: tuple[float, float],
                      nu: Optional[Sequence[float]] = None) -> MotionProfile:
    """Profile with ``exp(N(kappa + i f)) = exp(-i(theta - theta0)) (t + iC)``.

    ``arg(t + iC)`` is taken as ``atan2(C, t)``, which is continuous in ``t``
    for ``C != 0``.
    """
    N = params.N
    if not N > 0:
        raise ProfileError("make_slag_profile needs N > 0")
    a, b = interval
    if C == 0:
        if a < 0 < b:
            raise ProfileError("curve through origin, log branch undefined")
        raise ProfileError("C = 0 gives constant f, which is not a valid profile")
    phase = params.theta - params.theta0

    def kappa(t):
        return 0.5 * math.log(t * t + C * C) / N

    def f(t):
        return (math.atan2(C, t) - phase) / N

    def f_dot(t):
        return -C / (t * t + C * C) / N

    def rho(t):
        return math.exp(kappa(t))

    def rho_dot(t):
        return rho(t) * t / (t * t + C * C) / N

    return MotionProfile(f, f_dot, rho, rho_dot, (a, b),
                         nu=tuple(nu) if nu is not None else (0.0, 0.0, 0.0),
                         name=f"slag-line(C={C})")


def sine_slag_profile(N: float, nu: Sequence[float] = (0.0, 0.0, 0.0)) -> MotionProfile:
    """``f = t/N``, ``rho = sin(t)^(-1/N)`` on ``(0, pi)``."""
    return MotionProfile(
        f=lambda t: t / N,
        f_dot=lambda t: 1.0 / N,
        rho=lambda t: math.sin(t) ** (-1.0 / N),
        rho_dot=lambda t: -math.cos(t) * math.sin(t) ** (-1.0 / N - 1.0) / N,
        interval=(0.0, PI),
        nu=tuple(nu),
        name="sine-slag",
    )


def circle_shrinker_profile(nu: Sequence[float] = (0.0, 0.0, 0.0)) -> MotionProfile:
    """``f = t``, ``rho = 1``, one period of the closed orbit."""
    return MotionProfile(
        f=lambda t: t,
        f_dot=lambda t: 1.0,
        rho=lambda t: 1.0,
        rho_dot=lambda t: 0.0,
        interval=(0.0, 2 * PI),
        nu=tuple(nu),
        closed=True,
        rho_constant=True,
        name="circle-shrinker",
    )


def constant_rho_profile(f: Callable[[float], float], f_dot: Callable[[float], float],
                         rho: float = 1.0, interval=(0.0, 1.0), nu=(0.0, 0.0, 0.0)) -> MotionProfile:
    return MotionProfile(f, f_dot, lambda t: rho, lambda t: 0.0, interval, tuple(nu),
                         rho_constant=True, name="constant-rho")
