"""Cluster-additive functions on stable translation quivers ZΔ.

The main entry points are :class:`ClusterFunction` (unique extension from a
slice), :class:`DynkinStructure` (hammocks, ν, F and cluster-hammock
functions), the tilting-set tools and :func:`decompose`.
"""
from .decomposition import Decomposition, conjecture_properties, conjecture_scan, decompose
from .estimator import ClusterHammockDecomposer
from .functions import (
    ClusterFunction,
    SliceAssignment,
    check_additive,
    check_cluster_additive,
    cluster_reflection,
    compatible,
    difference,
    extend,
    leq,
    neg_part,
    pos_part,
    sum_functions,
)
from .hammocks import DynkinStructure, cluster_hammock, left_hammock, nakayama
from .laws import LawReport, TypeAGrid, negative_neighbor, rectangle_check, wing_check
from .quiver import QuiverSpec, Window, ZVertex, parse_quiver, preset
from .tilting import (
    MutationResult,
    TiltingSet,
    d_T,
    enumerate_tilting_sets,
    is_confined,
    is_partial_tilting,
    mutate,
)

__version__ = "0.1.0"

__all__ = [
    "check_additive",
    "check_cluster_additive",
    "cluster_hammock",
    "cluster_reflection",
    "ClusterFunction",
    "ClusterHammockDecomposer",
    "compatible",
    "conjecture_properties",
    "conjecture_scan",
    "d_T",
    "decompose",
    "Decomposition",
    "difference",
    "DynkinStructure",
    "enumerate_tilting_sets",
    "extend",
    "is_confined",
    "is_partial_tilting",
    "LawReport",
    "left_hammock",
    "leq",
    "mutate",
    "MutationResult",
    "nakayama",
    "neg_part",
    "negative_neighbor",
    "parse_quiver",
    "pos_part",
    "preset",
    "QuiverSpec",
    "rectangle_check",
    "SliceAssignment",
    "sum_functions",
    "TiltingSet",
    "TypeAGrid",
    "Window",
    "wing_check",
    "ZVertex",
]
