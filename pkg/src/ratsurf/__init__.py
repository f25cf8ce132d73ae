"""Exact divisor-class calculus for fat-point linear systems on rational surfaces.

Submodules: :mod:`~ratsurf.picard` (lattices), :mod:`~ratsurf.birational`
(Cremona, de Jonquieres, elementary transformations), :mod:`~ratsurf.linsys`
(dimension and genus counts, position predicates), :mod:`~ratsurf.oracle`
(interpolation rank over a prime field), :mod:`~ratsurf.pipeline` (replays)
and :mod:`~ratsurf.classifier` (conic bundle verdicts).
"""

from .birational import (
    BirationalStep,
    LinearSystemSpec,
    TransformChain,
    apply_chain,
    blow_down_f1,
    blow_down_to_hirzebruch,
    chi_map,
    cremona,
    dejonquieres,
    elementary_transform,
)
from .classifier import ConicBundleInput, Outcome, Verdict, classify, sarkisov_blowup
from .linsys import (
    PlaneSystem,
    PointConfig,
    build_plane_R_class,
    build_R_class,
    check_dagger,
    expected_dim,
    generality_report,
    genus,
)
from .oracle import InterpolationProblem, actual_dim, sample_general_points, verify_expected
from .picard import DivisorClass, SurfaceModel, canonical_class, intersect, to_blowup_basis
from .pipeline import TheoremChaseSpec, replay_prop41, theorem_chase, verify_pencil_property

__version__ = "0.1.0"

__all__ = [
    "actual_dim",
    "apply_chain",
    "BirationalStep",
    "blow_down_f1",
    "blow_down_to_hirzebruch",
    "build_plane_R_class",
    "build_R_class",
    "canonical_class",
    "check_dagger",
    "chi_map",
    "classify",
    "ConicBundleInput",
    "cremona",
    "dejonquieres",
    "DivisorClass",
    "elementary_transform",
    "expected_dim",
    "generality_report",
    "genus",
    "InterpolationProblem",
    "intersect",
    "LinearSystemSpec",
    "Outcome",
    "PlaneSystem",
    "PointConfig",
    "replay_prop41",
    "sample_general_points",
    "sarkisov_blowup",
    "SurfaceModel",
    "theorem_chase",
    "TheoremChaseSpec",
    "to_blowup_basis",
    "TransformChain",
    "Verdict",
    "verify_expected",
    "verify_pencil_property",
]
