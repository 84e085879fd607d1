"""Volumes of infinite-time controllability zonotopes and ellipsoids of
single-input LCT systems, by Jordan, canonical-form and Hurwitz routes."""

from .canonical import CcfData, EigenStructure, cluster_eigenvalues, eigen_structure_ccf, to_ccf
from .errors import CapvolError
from .hurwitz import HurwitzData, hurwitz_matrix, is_hurwitz_stable, l_n, lemma1_check
from .system import (
    LctSystem, controllability_matrix, diagnose, grammian_finite, grammian_infinite,
)
from .volumes import (
    VolumeReport, VolumeResult, compute_volume, ellipsoid_volume_ccf,
    ellipsoid_volume_hurwitz, ellipsoid_volume_jordan, full_report, pi_n,
    zonotope_volume_ccf, zonotope_volume_hurwitz, zonotope_volume_jordan,
)

__version__ = "0.1.0"

__all__ = [
    "CapvolError", "CcfData", "EigenStructure", "HurwitzData", "LctSystem",
    "VolumeReport", "VolumeResult", "cluster_eigenvalues", "compute_volume",
    "controllability_matrix", "diagnose", "eigen_structure_ccf", "ellipsoid_volume_ccf",
    "ellipsoid_volume_hurwitz", "ellipsoid_volume_jordan", "full_report", "grammian_finite",
    "grammian_infinite", "hurwitz_matrix", "is_hurwitz_stable", "l_n", "lemma1_check", "pi_n",
    "to_ccf", "zonotope_volume_ccf", "zonotope_volume_hurwitz", "zonotope_volume_jordan",
]
