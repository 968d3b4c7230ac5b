"""JSON cone-spec documents with exact rationals encoded as ``"p/q"`` strings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from toriclag.cone import PolyhedralCone, conormal_sum, genus_family_conormals

TOP_FIELDS = {"dim", "conormals", "reeb", "gamma", "slice", "profile"}
SLICE_FIELDS = {"zeta", "c"}
PROFILES = {
    "sine-slag": set(),
    "circle-shrinker": {"A", "theta", "t_end"},
    "slag-line": {"C", "t_min", "t_max", "theta0"},
}


class DocumentError(ValueError):
    pass


def encode_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def decode_rational(v) -> Fraction:
    if isinstance(v, bool):
        raise DocumentError(f"expected a rational, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"bad rational {v!r}") from exc
    # floats are rejected: they would silently lose exactness
    raise DocumentError(f"rationals must be integers or 'p/q' strings, got {v!r}")


def _int_vector(v, name) -> tuple[int, ...]:
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise DocumentError(f"{name} must be a list of integers")
    return tuple(v)


def _rat_vector(v, name) -> tuple[Fraction, ...]:
    if not isinstance(v, list):
        raise DocumentError(f"{name} must be a list")
    return tuple(decode_rational(x) for x in v)


def _reject_unknown(obj: dict, allowed: set, where: str):
    extra = sorted(set(obj) - allowed)
    if extra:
        raise DocumentError(f"unknown field(s) in {where}: {', '.join(extra)}")


@dataclass(frozen=True)
class ConeSpecDocument:
    dim: int
    conormals: tuple[tuple[int, ...], ...]
    reeb: Optional[tuple[Fraction, ...]] = None
    gamma: Optional[tuple[int, ...]] = None
    slice: Optional[tuple[tuple[Fraction, ...], Fraction]] = None  # (zeta, c)
    profile: Optional[dict] = field(default=None, hash=False)

    def cone(self) -> PolyhedralCone:
        return PolyhedralCone(self.dim, self.conormals)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"dim": self.dim, "conormals": [list(v) for v in self.conormals]}
        if self.reeb is not None:
            out["reeb"] = [encode_rational(x) for x in self.reeb]
        if self.gamma is not None:
            out["gamma"] = list(self.gamma)
        if self.slice is not None:
            zeta, c = self.slice
            out["slice"] = {"zeta": [encode_rational(x) for x in zeta], "c": encode_rational(c)}
        if self.profile is not None:
            prof = {"name": self.profile["name"]}
            for k in sorted(self.profile):
                if k != "name":
                    prof[k] = encode_rational(self.profile[k])
            out["profile"] = prof
        return out


def serialize(doc: ConeSpecDocument) -> str:
    return json.dumps(doc.to_dict(), indent=2) + "\n"


def from_dict(data: Any, validate: bool = True) -> ConeSpecDocument:
    """Build a document, rejecting unknown fields.

    With ``validate`` the conormals must also form a valid cone.
    """
    if not isinstance(data, dict):
        raise DocumentError("document must be a JSON object")
    _reject_unknown(data, TOP_FIELDS, "document")
    for key in ("dim", "conormals"):
        if key not in data:
            raise DocumentError(f"missing field {key!r}")
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise DocumentError("dim must be a positive integer")
    if not isinstance(data["conormals"], list) or not data["conormals"]:
        raise DocumentError("conormals must be a non-empty list")
    conormals = tuple(_int_vector(v, f"conormals[{i}]") for i, v in enumerate(data["conormals"]))
    for i, v in enumerate(conormals):
        if len(v) != dim:
            raise DocumentError(f"conormals[{i}] has length {len(v)}, expected {dim}")

    reeb = gamma = slc = prof = None
    if data.get("reeb") is not None:
        reeb = _rat_vector(data["reeb"], "reeb")
        if len(reeb) != dim:
            raise DocumentError("reeb has the wrong length")
    if data.get("gamma") is not None:
        gamma = _int_vector(data["gamma"], "gamma")
        if len(gamma) != dim:
            raise DocumentError("gamma has the wrong length")
    if data.get("slice") is not None:
        s = data["slice"]
        if not isinstance(s, dict):
            raise DocumentError("slice must be an object")
        _reject_unknown(s, SLICE_FIELDS, "slice")
        if set(s) != SLICE_FIELDS:
            raise DocumentError("slice needs both zeta and c")
        zeta = _rat_vector(s["zeta"], "slice.zeta")
        if len(zeta) != dim:
            raise DocumentError("slice.zeta has the wrong length")
        slc = (zeta, decode_rational(s["c"]))
    if data.get("profile") is not None:
        p = data["profile"]
        if not isinstance(p, dict) or "name" not in p:
            raise DocumentError("profile must be an object with a name")
        name = p["name"]
        if name not in PROFILES:
            raise DocumentError(f"unknown profile {name!r}; choose from {', '.join(sorted(PROFILES))}")
        _reject_unknown(p, PROFILES[name] | {"name"}, f"profile {name!r}")
        prof = {"name": name}
        prof.update({k: decode_rational(v) for k, v in p.items() if k != "name"})

    doc = ConeSpecDocument(dim, conormals, reeb, gamma, slc, prof)
    if validate:
        try:
            doc.cone()
        except ValueError as exc:
            raise DocumentError(f"invalid cone: {exc}") from exc
    return doc


def parse(text: str, validate: bool = True) -> ConeSpecDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}") from exc
    return from_dict(data, validate)


def load(path, validate: bool = True) -> ConeSpecDocument:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), validate)


def generate_example(genus: int) -> ConeSpecDocument:
    """Cone family whose slice surface has the given genus, with gamma = (1, 0, 0),
    Reeb vector the conormal sum and level half of ``<gamma, xi>``."""
    if not isinstance(genus, int) or genus < 1:
        raise DocumentError("genus must be an integer >= 1")
    lams = tuple(genus_family_conormals(genus))
    cone = PolyhedralCone(3, lams)
    xi = conormal_sum(cone)
    gamma = (1, 0, 0)
    c = Fraction(sum(g * x for g, x in zip(gamma, xi))) / 2
    return ConeSpecDocument(3, lams, xi, gamma, (xi, c))


def flat_example(m: int = 3) -> ConeSpecDocument:
    """The cone of flat C^m: standard basis conormals, xi = gamma = (1, ..., 1), level m/2."""
    if m < 2:
        raise DocumentError("m must be at least 2")
    lams = tuple(tuple(int(i == j) for j in range(m)) for i in range(m))
    ones = tuple(Fraction(1) for _ in range(m))
    return ConeSpecDocument(m, lams, ones, (1,) * m, (ones, Fraction(m, 2)))
