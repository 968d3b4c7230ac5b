"""Hyperplane slices of a polyhedral cone and the standing slice assumptions."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from toriclag import exact_linalg as el
from toriclag.cone import ConeError, PolyhedralCone, extreme_rays


class SliceError(ValueError):
    pass


@dataclass(frozen=True)
class SliceSpec:
    zeta: tuple[Fraction, ...]
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "zeta", el.as_rational_vector(self.zeta))
        object.__setattr__(self, "c", Fraction(self.c))
        if not any(self.zeta):
            raise SliceError("zeta must be nonzero")

    def scaled(self, t) -> "SliceSpec":
        return SliceSpec(self.zeta, self.c * Fraction(t))


def default_slice(gamma: Sequence[int], xi: Sequence) -> SliceSpec:
    """zeta = xi and c = <gamma, xi> / 2."""
    xi = el.as_rational_vector(xi)
    return SliceSpec(xi, Fraction(el.dot(gamma, xi)) / 2)


@dataclass(frozen=True)
class AssumptionReport:
    interior_hit: bool
    nondegenerate: bool
    witness: Optional[tuple[Fraction, ...]] = None
    failing_face: Optional[tuple[int, ...]] = None
    messages: tuple[str, ...] = field(default_factory=tuple)

    def __bool__(self):
        return self.interior_hit and self.nondegenerate


def _open_image_contains(values: Sequence[Fraction], c: Fraction) -> bool:
    """Does ``c`` lie in ``{sum w_i v_i : all w_i > 0}``?"""
    pos = any(v > 0 for v in values)
    neg = any(v < 0 for v in values)
    if c > 0:
        return pos
    if c < 0:
        return neg
    return (pos and neg) or not (pos or neg)


def _interior_witness(rays, values, c) -> tuple[Fraction, ...]:
    # all-ones weights, then rescale or shift one weight to hit the level exactly
    weights = [Fraction(1)] * len(rays)
    s = sum(values)
    if s != 0 and c / s > 0:
        weights = [c / s] * len(rays)
    elif s != c:
        want_pos = c > s
        k = next(i for i, v in enumerate(values) if (v > 0 if want_pos else v < 0))
        weights[k] += (c - s) / values[k]
    m = len(rays[0])
    return tuple(sum(w * r[i] for w, r in zip(weights, rays)) for i in range(m))


def _faces_with_rays(cone: PolyhedralCone):
    """(conormal index set, generating ray indices) for every proper face."""
    ers = extreme_rays(cone)
    sets = {t for t in ers.tight} | {frozenset({i}) for i in range(cone.d)}
    out = []
    for T in sorted(sets, key=lambda s: (len(s), sorted(s))):
        gens = [k for k, tight in enumerate(ers.tight) if T <= tight]
        out.append((T, gens))
    return out


def check_assumptions(cone: PolyhedralCone, spec: SliceSpec, xi: Optional[Sequence] = None) -> AssumptionReport:
    """Exact check that the hyperplane meets the interior and avoids degenerate faces.

    The second condition is tested face by face: for each proper face whose
    relative interior meets the hyperplane, ``zeta`` must not lie in the
    rational span of that face's conormals.
    """
    if len(spec.zeta) != cone.dim:
        raise SliceError("zeta has the wrong dimension")
    messages = []
    if xi is not None and el.as_rational_vector(xi) == spec.zeta and spec.c <= 0:
        msg = "level c <= 0 with zeta = xi: the Reeb slice hypothesis is not met"
        warnings.warn(msg, stacklevel=2)
        messages.append(msg)

    rays = extreme_rays(cone).rays
    values = [el.dot(r, spec.zeta) for r in rays]
    interior = _open_image_contains(values, spec.c) and any(values)
    witness = None
    if interior:
        witness = _interior_witness(rays, values, spec.c)
        assert cone.in_interior(witness) and el.dot(witness, spec.zeta) == spec.c
    else:
        messages.append("hyperplane misses the interior of the cone")

    failing = None
    for T, gens in _faces_with_rays(cone):
        if not _open_image_contains([values[k] for k in gens], spec.c):
            continue
        if el.in_rational_span(spec.zeta, [cone.conormals[i] for i in sorted(T)]):
            failing = tuple(sorted(T))
            messages.append(f"zeta lies in the span of face conormals {failing}")
            break
    return AssumptionReport(interior, failing is None, witness, failing, tuple(messages))


@dataclass(frozen=True)
class SlicePolytope:
    """Convex polygon ``cone ∩ {<y, zeta> = c}``.

    ``vertices[i]`` lies on the ray between facets ``i`` and ``i + 1``; the
    edge labelled ``j`` joins vertices ``j - 1`` and ``j`` and lies in
    facet ``j``.
    """

    spec: SliceSpec
    vertices: tuple[tuple[Fraction, ...], ...]
    edges: tuple[tuple[int, int, int], ...]  # (start vertex, end vertex, facet label)

    @property
    def facet_labels(self) -> dict[tuple[int, int], int]:
        return {(a, b): j for a, b, j in self.edges}

    def __len__(self):
        return len(self.vertices)

    def scaled_vertices(self, t) -> tuple[tuple[Fraction, ...], ...]:
        t = Fraction(t)
        return tuple(tuple(t * x for x in v) for v in self.vertices)


def compute_slice(cone: PolyhedralCone, spec: SliceSpec) -> SlicePolytope:
    if cone.dim != 3:
        raise SliceError("slice polygons are only built for m = 3")
    if len(spec.zeta) != 3:
        raise SliceError("zeta has the wrong dimension")
    if spec.c <= 0:
        raise SliceError("hyperplane does not cross all rays (level must be positive)")
    rays = extreme_rays(cone).rays
    vertices = []
    for r in rays:
        s = el.dot(r, spec.zeta)
        if s <= 0:
            raise SliceError("hyperplane does not cross all rays")
        k = spec.c / s
        vertices.append(tuple(k * x for x in r))
    d = len(rays)
    edges = tuple(((j - 1) % d, j, j) for j in range(d))
    poly = SlicePolytope(spec, tuple(vertices), edges)
    _verify_slice(cone, poly)
    return poly


def _verify_slice(cone: PolyhedralCone, poly: SlicePolytope) -> None:
    zeta, c = poly.spec.zeta, poly.spec.c
    for v in poly.vertices:
        if el.dot(v, zeta) != c or not cone.contains(v):
            raise ConeError(f"slice vertex {v} violates the polygon invariants")
    for a, b, j in poly.edges:
        lam = cone.conormals[j]
        if el.dot(poly.vertices[a], lam) != 0 or el.dot(poly.vertices[b], lam) != 0:
            raise ConeError(f"edge {j} does not lie in its facet")
    if sorted(j for _, _, j in poly.edges) != list(range(cone.d)):
        raise ConeError("edge labels do not partition the facets")
