"""Exact and numerical tools for toric cones, their real slices and Lagrangian motions in them."""

from toriclag.cone import (ConeError, PolyhedralCone, calabi_yau_gamma, extreme_rays,
                           genus_family_conormals, is_good, reeb_admissible)
from toriclag.io import ConeSpecDocument, flat_example, generate_example, parse, serialize
from toriclag.report import Report, run_pipeline
from toriclag.slice import SliceSpec, check_assumptions, compute_slice, default_slice
from toriclag.topology import build_glued_surface, genus, summarize

__all__ = [
    "ConeError", "PolyhedralCone", "calabi_yau_gamma", "extreme_rays", "genus_family_conormals",
    "is_good", "reeb_admissible", "ConeSpecDocument", "flat_example", "generate_example", "parse",
    "serialize", "Report", "run_pipeline", "SliceSpec", "check_assumptions", "compute_slice",
    "default_slice", "build_glued_surface", "genus", "summarize",
]
__version__ = "0.1.0"
