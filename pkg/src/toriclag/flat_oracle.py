"""Finite-difference differential geometry of immersions into flat C^m.

The model is C^m with Reeb field xi = (1, ..., 1), Calabi-Yau element
gamma = (1, ..., 1), holomorphic volume form dw^1 ^ ... ^ dw^m and moment
map ``<mu, zeta> = 1/2 sum zeta_k |w_k|^2``. A point ``p`` of the real form
lies on the slice of level ``c`` when ``sum zeta_k p_k^2 = 2c``.

Real coordinates of C^m are interleaved ``(Re w1, Im w1, Re w2, ...)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from toriclag.profiles import MotionProfile, circ_dist, mod_pi

DEFAULT_STEP = 1e-4
COND_MAX = 1e8


class OracleError(ValueError):
    pass


def to_real(w: np.ndarray) -> np.ndarray:
    out = np.empty(2 * len(w))
    out[0::2] = w.real
    out[1::2] = w.imag
    return out


def to_complex(x: np.ndarray) -> np.ndarray:
    return x[0::2] + 1j * x[1::2]


def stereographic(s: np.ndarray, chart: str = "north") -> np.ndarray:
    """Unit sphere point from chart coordinates ``s`` in R^(m-1)."""
    s = np.asarray(s, dtype=float)
    q = float(s @ s)
    last = (q - 1.0) if chart == "north" else (1.0 - q)
    return np.concatenate([2 * s, [last]]) / (q + 1.0)


def stereographic_inverse(sigma: np.ndarray, chart: str = "north") -> np.ndarray:
    sigma = np.asarray(sigma, dtype=float)
    denom = (1.0 - sigma[-1]) if chart == "north" else (1.0 + sigma[-1])
    return sigma[:-1] / denom


class Immersion:
    """Anything with ``dim``, ``ambient`` and ``complex_embed(u)``."""

    dim: int
    ambient: int

    def complex_embed(self, u: Sequence[float]) -> np.ndarray:
        raise NotImplementedError

    def embed(self, u: Sequence[float]) -> np.ndarray:
        return to_real(self.complex_embed(np.asarray(u, dtype=float)))


@dataclass
class ParametricImmersion(Immersion):
    func: Callable[[np.ndarray], np.ndarray]
    dim: int
    ambient: int

    def complex_embed(self, u):
        return np.asarray(self.func(np.asarray(u, dtype=float)), dtype=complex)


@dataclass
class FlatImmersion(Immersion):
    """``w_j = c_j(t) p_j`` with ``p`` on ``sum zeta_k p_k^2 = radius_sq``.

    Chart coordinates are ``u = (s_1, ..., s_{m-1}, t)`` with ``s`` a
    stereographic coordinate on the unit sphere; ``p_k = sqrt(radius_sq /
    zeta_k) * sigma_k(s)``.
    """

    curves: Sequence[Callable[[float], complex]]
    radius_sq: float
    zeta: tuple[float, ...] = ()
    chart: str = "north"
    profile: Optional[MotionProfile] = None
    nu: tuple[float, ...] = ()
    t_range: tuple[float, float] = (0.0, 2 * math.pi)

    def __post_init__(self):
        self.ambient = self.dim = len(self.curves)
        if not self.zeta:
            self.zeta = (1.0,) * self.dim
        if len(self.zeta) != self.dim or any(z <= 0 for z in self.zeta):
            raise OracleError("zeta must have positive entries, one per coordinate")
        if not self.radius_sq > 0:
            raise OracleError("radius_sq must be positive")
        self._scale = np.sqrt(self.radius_sq / np.asarray(self.zeta, dtype=float))

    @property
    def slice_level(self) -> float:
        """Moment level c of the slice: ``sum zeta_k p_k^2 = 2c``."""
        return self.radius_sq / 2.0

    @classmethod
    def from_profile(cls, profile: MotionProfile, radius_sq: float, zeta: Optional[Sequence[float]] = None,
                     nu: Optional[Sequence[float]] = None, chart: str = "north",
                     nu_drift: Optional[Sequence[float]] = None) -> "FlatImmersion":
        """``c_j(t) = rho(t) exp(i(f(t) zeta_j + nu_j))``.

        ``nu_drift`` adds ``drift_j * t`` to the phase of curve ``j``; a nonzero
        drift breaks the Lagrangian property and is used to test detectors.
        """
        nu = tuple(nu) if nu is not None else tuple(profile.nu)
        m = len(nu)
        zeta = tuple(float(z) for z in zeta) if zeta is not None else (1.0,) * m
        drift = tuple(nu_drift) if nu_drift is not None else (0.0,) * m

        def make(j):
            zj, nj, dj = zeta[j], nu[j], drift[j]
            return lambda t: profile.rho(t) * cmath.exp(1j * (profile.f(t) * zj + nj + dj * t))

        return cls([make(j) for j in range(m)], radius_sq, zeta, chart, profile, nu, profile.interval)

    def with_chart(self, chart: str) -> "FlatImmersion":
        return FlatImmersion(self.curves, self.radius_sq, self.zeta, chart, self.profile, self.nu, self.t_range)

    def real_point(self, u: Sequence[float]) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.dim == 1:
            return self._scale.copy()
        return self._scale * stereographic(u[:-1], self.chart)

    def complex_embed(self, u):
        u = np.asarray(u, dtype=float)
        t = float(u[-1])
        p = self.real_point(u)
        return np.array([c(t) for c in self.curves]) * p

    def chart_coords(self, p: np.ndarray, t: float, chart: Optional[str] = None) -> np.ndarray:
        sigma = np.asarray(p, dtype=float) / self._scale
        return np.concatenate([stereographic_inverse(sigma, chart or self.chart), [t]])

    def sample_points(self, n: int, seed: int = 0, box: float = 1.2, t_margin: float = 0.3) -> list[np.ndarray]:
        """Deterministic chart samples away from the chart pole and interval ends."""
        rng = np.random.default_rng(seed)
        a, b = self.t_range
        pts = []
        for _ in range(n):
            s = rng.uniform(-box, box, self.dim - 1)
            t = rng.uniform(a + t_margin, b - t_margin)
            pts.append(np.concatenate([s, [t]]))
        return pts


# -- finite differences -------------------------------------------------------

def tangent_frame(imm: Immersion, u, h: float) -> np.ndarray:
    """Columns are centered-difference tangent vectors in R^(2 ambient)."""
    u = np.asarray(u, dtype=float)
    cols = []
    for a in range(imm.dim):
        e = np.zeros(imm.dim)
        e[a] = h
        cols.append((imm.embed(u + e) - imm.embed(u - e)) / (2 * h))
    return np.column_stack(cols)


def second_derivatives(imm: Immersion, u, h: float) -> np.ndarray:
    """Array ``D[a, b]`` of centered second derivatives."""
    u = np.asarray(u, dtype=float)
    k = imm.dim
    f0 = imm.embed(u)
    out = np.empty((k, k, len(f0)))
    eye = np.eye(k) * h
    for a in range(k):
        out[a, a] = (imm.embed(u + eye[a]) - 2 * f0 + imm.embed(u - eye[a])) / h ** 2
        for b in range(a + 1, k):
            v = (imm.embed(u + eye[a] + eye[b]) - imm.embed(u + eye[a] - eye[b])
                 - imm.embed(u - eye[a] + eye[b]) + imm.embed(u - eye[a] - eye[b])) / (4 * h ** 2)
            out[a, b] = out[b, a] = v
    return out


def _omega(X: np.ndarray, Y: np.ndarray) -> float:
    return float(np.sum(X[0::2] * Y[1::2] - X[1::2] * Y[0::2]))


def pullback_omega(imm: Immersion, u, h: float = 1e-5) -> np.ndarray:
    T = tangent_frame(imm, u, h)
    k = T.shape[1]
    W = np.zeros((k, k))
    for a in range(k):
        for b in range(a + 1, k):
            W[a, b] = _omega(T[:, a], T[:, b])
            W[b, a] = -W[a, b]
    return W


def _normal_projector(T: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    g = T.T @ T
    if np.linalg.cond(g) > COND_MAX:
        raise OracleError("degenerate chart point")
    P = np.eye(T.shape[0]) - T @ np.linalg.solve(g, T.T)
    return g, P


def _mean_curvature_raw(imm, u, h):
    T = tangent_frame(imm, u, h)
    g, P = _normal_projector(T)
    D2 = second_derivatives(imm, u, h)
    ginv = np.linalg.inv(g)
    H = P @ np.einsum("ab,abi->i", ginv, D2)
    return H, T, g, P


def mean_curvature(imm: Immersion, u, h: float = DEFAULT_STEP, richardson: bool = False) -> np.ndarray:
    """``H = g^{ab} (d_a d_b F)^perp``; optional Richardson step ``(4 H(h/2) - H(h)) / 3``."""
    H, _, _, _ = _mean_curvature_raw(imm, u, h)
    if richardson:
        H2, _, _, _ = _mean_curvature_raw(imm, u, h / 2)
        H = (4 * H2 - H) / 3
    return H


@dataclass
class GeometrySample:
    point: np.ndarray
    embedding: np.ndarray
    metric: np.ndarray
    H: np.ndarray
    F_perp: np.ndarray
    omega: np.ndarray
    tangents: np.ndarray = field(repr=False)

    def tangency_error(self) -> float:
        return float(max(np.max(np.abs(self.tangents.T @ self.H)), np.max(np.abs(self.tangents.T @ self.F_perp))))


def geometry_sample(imm: Immersion, u, h: float = DEFAULT_STEP) -> GeometrySample:
    u = np.asarray(u, dtype=float)
    H, T, g, P = _mean_curvature_raw(imm, u, h)
    F = imm.embed(u)
    return GeometrySample(u, F, g, H, P @ F, pullback_omega(imm, u, h), T)


# -- self-similarity ----------------------------------------------------------

@dataclass(frozen=True)
class ShrinkerReport:
    max_residual: float
    predicted_lambda: float
    fitted_lambda: float
    lambda_literal: Optional[float]  # A / (2 radius_sq): the slice level read as the sphere radius^2
    max_abs_H: float
    samples: int

    @property
    def relative_lambda_error(self) -> float:
        if self.predicted_lambda == 0:
            return abs(self.fitted_lambda)
        return abs(self.fitted_lambda - self.predicted_lambda) / abs(self.predicted_lambda)


def check_self_shrinker(imm: Immersion, samples: Sequence, A: Optional[float] = None,
                        level: Optional[float] = None, lam: Optional[float] = None,
                        h: float = DEFAULT_STEP) -> ShrinkerReport:
    """Residual of ``H = lambda F_perp`` with ``lambda = A / (2 level)`` (or ``lam``).

    ``level`` defaults to the immersion's moment slice level.
    """
    literal = None
    if lam is None:
        if A is None:
            lam = 0.0
        else:
            if level is None:
                level = getattr(imm, "slice_level", None)
                if level is None:
                    raise OracleError("a slice level is needed to predict lambda")
            lam = A / (2.0 * level)
            if isinstance(imm, FlatImmersion):
                literal = A / (2.0 * imm.radius_sq)
    res, num, den, hmax = 0.0, 0.0, 0.0, 0.0
    for u in samples:
        s = geometry_sample(imm, u, h)
        res = max(res, float(np.linalg.norm(s.H - lam * s.F_perp)))
        num += float(s.H @ s.F_perp)
        den += float(s.F_perp @ s.F_perp)
        hmax = max(hmax, float(np.linalg.norm(s.H)))
    fitted = num / den if den > 0 else float("nan")
    return ShrinkerReport(res, lam, fitted, literal, hmax, len(samples))


# -- Lagrangian angle ----------------------------------------------------------

def angle_direct(imm: Immersion, u, h: float = DEFAULT_STEP) -> float:
    """``arg det[d_a w^k]`` mod pi: the pullback of dw^1 ^ ... ^ dw^m on the chart frame."""
    if imm.dim != imm.ambient:
        raise OracleError("Lagrangian angle needs dim == ambient dimension")
    T = tangent_frame(imm, u, h)
    Z = np.column_stack([to_complex(T[:, a]) for a in range(imm.dim)])
    det = np.linalg.det(Z)
    if abs(det) < 1e-14:
        raise OracleError("degenerate frame")
    return mod_pi(cmath.phase(det))


def angle_formula(imm: FlatImmersion, u) -> float:
    """Closed-form angle in the flat model::

        f N + sum nu + arg( sum_k (kappa' + i f' zeta_k) zeta_k p_k^2 )   (mod pi)

    with ``N = sum zeta_k``; ``zeta_k p_k^2`` is the derivative of the flat
    moment map in logarithmic coordinates.
    """
    prof = imm.profile
    if prof is None:
        raise OracleError("the closed-form angle needs the generating profile")
    u = np.asarray(u, dtype=float)
    t = float(u[-1])
    p = imm.real_point(u)
    zeta = np.asarray(imm.zeta, dtype=float)
    N = float(zeta.sum())
    kd, fd = prof.kappa_dot(t), prof.f_dot(t)
    term = np.sum((kd + 1j * fd * zeta) * zeta * p ** 2)
    if abs(term) == 0:
        raise OracleError("degenerate frame")
    return mod_pi(prof.f(t) * N + float(np.sum(imm.nu)) + cmath.phase(term))


def angle_full_formula_check(imm: FlatImmersion, samples: Sequence, h: float = DEFAULT_STEP) -> float:
    """Max circular distance (mod pi) between the closed form and the direct evaluation."""
    return max(circ_dist(angle_formula(imm, u), angle_direct(imm, u, h)) for u in samples)


def max_pullback_omega(imm: Immersion, samples: Sequence, h: float = 1e-5) -> float:
    return max(float(np.max(np.abs(pullback_omega(imm, u, h)))) for u in samples)


def max_mean_curvature(imm: Immersion, samples: Sequence, h: float = DEFAULT_STEP) -> float:
    return max(float(np.linalg.norm(mean_curvature(imm, u, h))) for u in samples)


# -- standard immersions ------------------------------------------------------

def sine_slag_immersion(m: int = 3, chart: str = "north", radius_sq: Optional[float] = None) -> FlatImmersion:
    """Special Lagrangian with ``Im(c(t)^m) = 1``: ``f = t/m``, ``rho = sin(t)^(-1/m)``."""
    from toriclag.profiles import sine_slag_profile
    prof = sine_slag_profile(float(m), nu=(0.0,) * m)
    return FlatImmersion.from_profile(prof, radius_sq=float(m if radius_sq is None else radius_sq), chart=chart)


def circle_shrinker_immersion(m: int = 3, chart: str = "north", nu=None,
                              radius_sq: Optional[float] = None) -> FlatImmersion:
    """``c_j(t) = exp(it)`` on the slice of level ``m/2`` (radius^2 = m); ``H = -F_perp``."""
    from toriclag.profiles import circle_shrinker_profile
    prof = circle_shrinker_profile(nu=(0.0,) * m if nu is None else tuple(nu))
    return FlatImmersion.from_profile(prof, radius_sq=float(m if radius_sq is None else radius_sq), chart=chart)


def circle_immersion(r: float) -> FlatImmersion:
    """``w = r e^{it}`` in C^1."""
    return FlatImmersion([lambda t: r * cmath.exp(1j * t)], radius_sq=1.0)


def round_sphere_immersion(r: float, n: int = 3) -> ParametricImmersion:
    """Sphere of radius ``r`` in R^n, inside C^n as the real part."""
    return ParametricImmersion(lambda u: r * stereographic(u, "north").astype(complex), n - 1, n)


def clifford_torus_immersion() -> ParametricImmersion:
    return ParametricImmersion(lambda u: np.array([cmath.exp(1j * u[0]), cmath.exp(1j * u[1])]), 2, 2)
