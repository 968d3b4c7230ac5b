"""Rational polyhedral cones given by inward facet conormals.

A cone is ``{y : <y, lam_i> >= 0 for all i} - {0}`` with integer
conormals ``lam_i``. For ``m = 3`` the conormals must be listed in
facet-adjacency (cyclic) order; consecutive pairs then meet along the
extreme rays of the cone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Optional, Sequence

from toriclag import exact_linalg as el


class ConeError(ValueError):
    """Malformed cone data."""


class ConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


@dataclass(frozen=True)
class PolyhedralCone:
    dim: int
    conormals: tuple[tuple[int, ...], ...]
    _rays: Optional[tuple] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        normals = tuple(el.as_int_vector(v) for v in self.conormals)
        object.__setattr__(self, "conormals", normals)
        if self.dim < 2:
            raise ConeError("ambient dimension must be at least 2")
        if not normals:
            raise ConeError("at least one conormal is required")
        for i, v in enumerate(normals):
            if len(v) != self.dim:
                raise ConeError(f"conormal {i} has length {len(v)}, expected {self.dim}")
            if not el.is_primitive(v):
                raise ConeError(f"conormal {i} = {v} is not primitive")
        if len(set(normals)) != len(normals):
            raise ConeError("duplicate conormals")
        if is_strongly_convex(self) and self.dim in (2, 3):
            object.__setattr__(self, "_rays", _compute_rays(self))

    @classmethod
    def from_conormals(cls, conormals: Sequence[Sequence[int]]) -> "PolyhedralCone":
        conormals = [tuple(v) for v in conormals]
        if not conormals:
            raise ConeError("at least one conormal is required")
        return cls(len(conormals[0]), tuple(conormals))

    @property
    def d(self) -> int:
        return len(self.conormals)

    def pairings(self, y: Sequence) -> tuple:
        return tuple(el.dot(y, lam) for lam in self.conormals)

    def contains(self, y: Sequence) -> bool:
        return any(x != 0 for x in y) and all(p >= 0 for p in self.pairings(y))

    def in_interior(self, y: Sequence) -> bool:
        return all(p > 0 for p in self.pairings(y))


@dataclass(frozen=True)
class ExtremeRaySet:
    """Primitive generators of the 1-dimensional faces.

    For ``m = 3``, ``rays[i]`` spans the intersection of the facets of
    conormals ``i`` and ``i + 1 (mod d)``.
    """

    rays: tuple[tuple[int, ...], ...]
    tight: tuple[frozenset, ...]

    def __len__(self):
        return len(self.rays)

    def __iter__(self):
        return iter(self.rays)

    def __getitem__(self, i):
        return self.rays[i]


@dataclass(frozen=True)
class CalabiYauData:
    gamma: Optional[tuple[int, ...]]
    exists: bool


@dataclass(frozen=True)
class GoodnessResult:
    good: bool
    witness: Optional[tuple[int, ...]] = None
    divisors: Optional[tuple[int, ...]] = None
    reason: str = ""
    shortcut: Optional[bool] = None

    def __bool__(self):
        return self.good


def is_strongly_convex(cone: PolyhedralCone) -> bool:
    return el.rational_rank(cone.conormals) == cone.dim


def _signed_ray(cone, candidate, skip):
    """Orient ``candidate`` so it pairs strictly positively with all other conormals."""
    others = [el.dot(candidate, lam) for k, lam in enumerate(cone.conormals) if k not in skip]
    if others and all(p > 0 for p in others):
        return candidate
    if others and all(p < 0 for p in others):
        return tuple(-x for x in candidate)
    return None


def _compute_rays(cone: PolyhedralCone) -> ExtremeRaySet:
    lams = cone.conormals
    d = len(lams)
    if cone.dim == 2:
        if d != 2:
            raise ConeError("a strongly convex cone in dimension 2 has exactly 2 facets")
        rays = []
        for i in range(2):
            a, b = lams[i]
            r = _signed_ray(cone, el.primitive_part((-b, a)), {i})
            if r is None:
                raise ConeError("conormals not in facet-adjacency order")
            rays.append(r)
        return ExtremeRaySet(tuple(rays), tuple(frozenset({i}) for i in range(2)))
    if cone.dim != 3:
        raise NotImplementedError("extreme rays are only implemented for m = 2 and m = 3")
    if d < 3:
        raise ConeError("conormals not in facet-adjacency order")
    rays, tight = [], []
    for i in range(d):
        j = (i + 1) % d
        x = el.cross3(lams[i], lams[j])
        if not any(x):
            raise ConeError("conormals not in facet-adjacency order")
        r = _signed_ray(cone, el.primitive_part(x), {i, j})
        if r is None:
            raise ConeError("conormals not in facet-adjacency order")
        rays.append(r)
        tight.append(frozenset({i, j}))
    if len(set(rays)) != d:
        raise ConeError("conormals not in facet-adjacency order")
    return ExtremeRaySet(tuple(rays), tuple(tight))


def extreme_rays(cone: PolyhedralCone) -> ExtremeRaySet:
    if not is_strongly_convex(cone):
        raise ConeError("cone is not strongly convex")
    if cone._rays is None:
        return _compute_rays(cone)
    return cone._rays


def face_conormal_sets(cone: PolyhedralCone) -> list[frozenset]:
    """Every nonempty index set ``T`` whose common zero set meets the cone.

    Faces of a pointed cone are spanned by the extreme rays they contain,
    so ``T`` qualifies iff it is contained in the tight set of some ray.
    """
    seen = set()
    for tight in extreme_rays(cone).tight:
        for k in range(1, len(tight) + 1):
            for sub in combinations(sorted(tight), k):
                seen.add(frozenset(sub))
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def _shortcut_good(lams) -> tuple[bool, Optional[tuple[int, int]]]:
    """Consecutive-difference test for conormals of the form (1, p, q)."""
    d = len(lams)
    for i in range(d):
        j = (i + 1) % d
        dp = lams[j][1] - lams[i][1]
        dq = lams[j][2] - lams[i][2]
        ok = abs(dp) == 1 or abs(dq) == 1 or (dp != 0 and dq != 0 and gcd(dp, dq) == 1)
        if not ok:
            return False, (i, j)
    return True, None


def is_good(cone: PolyhedralCone) -> GoodnessResult:
    """Goodness via Smith normal forms of all face conormal sets.

    For ``m = 3`` cones admitting a Calabi-Yau element the consecutive
    difference test is run as well (after moving ``gamma`` to the first
    coordinate by a unimodular change of basis) and must agree.
    """
    if not is_strongly_convex(cone):
        raise ConeError("cone is not strongly convex")
    result = None
    for subset in face_conormal_sets(cone):
        rows = [list(cone.conormals[i]) for i in sorted(subset)]
        if el.rational_rank(rows) != len(rows):
            result = GoodnessResult(False, tuple(sorted(subset)), None, "linearly dependent face conormals")
            break
        divs = el.elementary_divisors(rows)
        if any(x != 1 for x in divs):
            result = GoodnessResult(False, tuple(sorted(subset)), divs, "face lattice not saturated")
            break
    if result is None:
        result = GoodnessResult(True, reason="all face conormal sets saturated")

    if cone.dim == 3:
        cy = calabi_yau_gamma(cone)
        if cy.exists:
            W = el.unimodular_with_first_row(cy.gamma)
            moved = [tuple(el.dot(row, lam) for row in W) for lam in cone.conormals]
            short, pair = _shortcut_good(moved)
            if short != result.good:
                raise ConsistencyError(
                    f"Smith normal form test says good={result.good} but the "
                    f"consecutive-difference test says {short} (pair {pair})")
            return GoodnessResult(result.good, result.witness, result.divisors, result.reason, short)
    return result


def reeb_admissible(cone: PolyhedralCone, xi: Sequence) -> bool:
    xi = el.as_rational_vector(xi)
    if len(xi) != cone.dim:
        raise ConeError("Reeb vector has the wrong dimension")
    return all(el.dot(r, xi) > 0 for r in extreme_rays(cone))


def calabi_yau_gamma(cone: PolyhedralCone) -> CalabiYauData:
    gamma = el.solve_all_ones([list(v) for v in cone.conormals])
    if gamma is None:
        return CalabiYauData(None, False)
    assert all(el.dot(gamma, lam) == 1 for lam in cone.conormals)
    return CalabiYauData(gamma, True)


def conormal_sum(cone: PolyhedralCone) -> tuple[Fraction, ...]:
    """Default Reeb candidate: the sum of all conormals."""
    return tuple(Fraction(sum(lam[k] for lam in cone.conormals)) for k in range(cone.dim))


def genus_family_conormals(genus: int) -> list[tuple[int, int, int]]:
    """Conormals of the three-dimensional cone family whose slice surface has the given genus."""
    if genus < 1:
        raise ValueError("genus must be >= 1")
    if genus == 1:
        return [(1, -1, -1), (1, 0, -1), (1, 1, 0), (1, 2, 3)]
    lams = [(1, -1, -1)]
    lams += [(1, k - 2, (k - 2) ** 2 - 1) for k in range(2, genus + 3)]
    lams.append((1, -2, genus ** 2))
    return lams
