"""Exact combinatorics, polynomial operators and flag geometry for the
quasisymmetric flag variety."""

from .permnc import Permutation, NoncrossingPartition, enumerate_nc, is_noncrossing
from .forest import BnForest, Letter, forest_from_reseq, parse_word, enumerate_forests
from .polyalg import MPoly, forest_poly_double, schubert_double, phi_apply
from .gkm import GkmGraph, GkmClass, build_nc_gkm
from .geom import QMatrix, plucker_support, sample_orbit_point
from .census import run_suite, count_faces, count_forests

__all__ = [
    "Permutation", "NoncrossingPartition", "enumerate_nc", "is_noncrossing",
    "BnForest", "Letter", "forest_from_reseq", "parse_word", "enumerate_forests",
    "MPoly", "forest_poly_double", "schubert_double", "phi_apply",
    "GkmGraph", "GkmClass", "build_nc_gkm",
    "QMatrix", "plucker_support", "sample_orbit_point",
    "run_suite", "count_faces", "count_forests",
]
