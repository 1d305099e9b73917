"""Exact tools for kinematic blades, positive tropical Plücker vectors,
hypersimplex subdivisions, factorization cones and CEGM amplitudes."""

__version__ = "0.1.0"

from .blades import (
    HeightVector, KinematicForm, eta_of_dosp, eta_of_subset, expand_in_planar_basis,
    height_of_dosp, height_of_subset,
)
from .combinatorics import DOSP, dosp_of_subset, parse_dosp, subset_of_dosp
from .tropical import GridVector, positive_root_vector, trop_plucker
