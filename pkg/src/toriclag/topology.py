"""Closed surfaces glued from sign-labelled copies of the slice polygon.

Each copy is indexed by a sign vector ``kappa``. Edge ``j`` of copy
``kappa`` is glued, by the identity of the polygon edge, to edge ``j`` of
the copy ``s_j(kappa)``, where ``s_j`` flips the signs at the odd entries
of conormal ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from toriclag.cone import PolyhedralCone
from toriclag.slice import SlicePolytope


class GluingError(ValueError):
    pass


class TopologyError(ValueError):
    def __init__(self, message, chi=None, components=None, orientable=None):
        super().__init__(message)
        self.chi = chi
        self.components = components
        self.orientable = orientable


SignVector = tuple[int, ...]


@dataclass(frozen=True)
class EdgeInvolution:
    flips: tuple[int, ...]

    @classmethod
    def from_conormal(cls, lam: Sequence[int]) -> "EdgeInvolution":
        return cls(tuple(x % 2 for x in lam))

    def __call__(self, kappa: SignVector) -> SignVector:
        return tuple(-k if f else k for k, f in zip(kappa, self.flips))

    @property
    def is_identity(self) -> bool:
        return not any(self.flips)


@dataclass(frozen=True)
class EdgePairing:
    """Edge ``edge`` of face ``face`` glued to edge ``edge2`` of ``face2``.

    ``twist`` means the gluing carries the boundary direction of the first
    edge onto the boundary direction of the second, so compatible
    orientations on the two faces must be opposite.
    """

    face: int
    edge: int
    face2: int
    edge2: int
    twist: bool = True


@dataclass(frozen=True)
class GluedSurface:
    face_sizes: tuple[int, ...]
    pairings: tuple[EdgePairing, ...]
    vertex_orbits: tuple[frozenset, ...]
    face_labels: tuple = ()

    @property
    def F(self) -> int:
        return len(self.face_sizes)

    @property
    def E(self) -> int:
        return len(self.pairings)

    @property
    def V(self) -> int:
        return len(self.vertex_orbits)

    @property
    def chi(self) -> int:
        return self.V - self.E + self.F

    @property
    def connected(self) -> bool:
        return connected_components(self) == 1

    @property
    def orientable(self) -> bool:
        return orientability(self)

    @classmethod
    def from_pairings(cls, face_sizes: Sequence[int], pairings: Sequence[EdgePairing],
                      face_labels: Sequence = ()) -> "GluedSurface":
        face_sizes = tuple(face_sizes)
        pairings = tuple(pairings)
        _check_pairings(face_sizes, pairings)
        return cls(face_sizes, pairings, corner_orbits(face_sizes, pairings), tuple(face_labels))


def _check_pairings(face_sizes, pairings):
    seen = set()
    for p in pairings:
        for key in ((p.face, p.edge), (p.face2, p.edge2)):
            if key in seen:
                raise GluingError(f"edge {key} appears in more than one pairing")
            seen.add(key)
    expected = {(f, e) for f, n in enumerate(face_sizes) for e in range(n)}
    if seen != expected:
        raise GluingError("every edge of every face must be paired exactly once")


def corner_orbits(face_sizes, pairings) -> tuple[frozenset, ...]:
    """Vertex classes by union-find on polygon corners.

    Edge ``e`` of a face with ``n`` edges runs from corner ``e - 1`` to
    corner ``e`` (corners numbered mod ``n``).
    """
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    for f, n in enumerate(face_sizes):
        for k in range(n):
            find((f, k))
    for p in pairings:
        n1, n2 = face_sizes[p.face], face_sizes[p.face2]
        s1, e1 = (p.face, (p.edge - 1) % n1), (p.face, p.edge)
        s2, e2 = (p.face2, (p.edge2 - 1) % n2), (p.face2, p.edge2)
        if p.twist:
            union(s1, s2)
            union(e1, e2)
        else:
            union(s1, e2)
            union(e1, s2)
    classes = {}
    for x in list(parent):
        classes.setdefault(find(x), set()).add(x)
    return tuple(sorted((frozenset(c) for c in classes.values()), key=lambda c: min(c)))


def sign_vectors(m: int) -> list[SignVector]:
    return [tuple(s) for s in product((1, -1), repeat=m)]


def _orbit(kappa, generators):
    orbit, stack = {kappa}, [kappa]
    while stack:
        k = stack.pop()
        for s in generators:
            nk = s(k)
            if nk not in orbit:
                orbit.add(nk)
                stack.append(nk)
    return frozenset(orbit)


def build_glued_surface(slice_poly: SlicePolytope, cone: PolyhedralCone) -> GluedSurface:
    m = cone.dim
    if m != 3:
        raise GluingError("gluing is only defined for m = 3")
    d = cone.d
    if sorted(j for _, _, j in slice_poly.edges) != list(range(d)):
        raise GluingError("slice polygon must carry every conormal as an edge label")
    invs = [EdgeInvolution.from_conormal(lam) for lam in cone.conormals]
    for j, s in enumerate(invs):
        if s.is_identity:
            raise GluingError(f"degenerate gluing: conormal {j} is even")

    faces = sign_vectors(m)
    index = {k: i for i, k in enumerate(faces)}
    pairings = []
    for i, kappa in enumerate(faces):
        for j, s in enumerate(invs):
            other = index[s(kappa)]
            if i < other:
                pairings.append(EdgePairing(i, j, other, j, twist=True))
    pairings.sort(key=lambda p: (p.face, p.edge))
    sizes = tuple(d for _ in faces)
    _check_pairings(sizes, pairings)

    # polygon vertex v sits between edges v and v + 1; copies sharing it form
    # an orbit of the group generated by the two adjacent involutions
    orbits = []
    for v in range(d):
        gens = (invs[v], invs[(v + 1) % d])
        done = set()
        for kappa in faces:
            if kappa in done:
                continue
            orb = _orbit(kappa, gens)
            done |= orb
            orbits.append(frozenset((index[k], v) for k in orb))
    orbits = tuple(sorted(orbits, key=lambda c: min(c)))

    if set(orbits) != set(corner_orbits(sizes, pairings)):
        raise GluingError("group-orbit and union-find vertex classes disagree")
    return GluedSurface(sizes, tuple(pairings), orbits, tuple(faces))


def _face_graph(surface: GluedSurface):
    adj = {f: [] for f in range(surface.F)}
    for p in surface.pairings:
        adj[p.face].append((p.face2, p.twist))
        adj[p.face2].append((p.face, p.twist))
    return adj


def connected_components(surface: GluedSurface) -> int:
    adj = _face_graph(surface)
    seen, count = set(), 0
    for f in adj:
        if f in seen:
            continue
        count += 1
        stack = [f]
        seen.add(f)
        while stack:
            x = stack.pop()
            for y, _ in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return count


def involution_subgroup_order(conormals: Sequence[Sequence[int]]) -> int:
    """Order of the subgroup of (Z/2)^m generated by the conormals mod 2."""
    rows = [[x % 2 for x in lam] for lam in conormals]
    rank, m = 0, len(rows[0]) if rows else 0
    for c in range(m):
        p = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                rows[r] = [a ^ b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return 2 ** rank


def orientability(surface: GluedSurface) -> bool:
    """Two-colour the faces so every twisted pairing joins opposite orientations."""
    adj = _face_graph(surface)
    orient = {}
    for f in adj:
        if f in orient:
            continue
        orient[f] = 1
        stack = [f]
        while stack:
            x = stack.pop()
            for y, twist in adj[x]:
                want = -orient[x] if twist else orient[x]
                if y not in orient:
                    orient[y] = want
                    stack.append(y)
                elif orient[y] != want:
                    return False
    return True


def genus(surface: GluedSurface) -> int:
    comps = connected_components(surface)
    orientable = orientability(surface)
    chi = surface.chi
    if comps != 1 or not orientable:
        raise TopologyError(
            f"genus needs a connected orientable surface (chi={chi}, components={comps}, "
            f"orientable={orientable})", chi=chi, components=comps, orientable=orientable)
    if chi % 2:
        raise TopologyError(f"odd Euler characteristic {chi} on an orientable surface", chi=chi)
    return (2 - chi) // 2


@dataclass(frozen=True)
class TopologySummary:
    V: int
    E: int
    F: int
    chi: int
    components: int
    orientable: bool
    genus: Optional[int]


def summarize(surface: GluedSurface) -> TopologySummary:
    comps = connected_components(surface)
    ori = orientability(surface)
    g = genus(surface) if comps == 1 and ori else None
    return TopologySummary(surface.V, surface.E, surface.F, surface.chi, comps, ori, g)
