"""Cones, face lattices, hypersimplex subdivisions and Newton polytope faces."""

from .cones import (
    Cone, ConeError, cone_from_generators, cone_from_inequalities,
    extreme_rays, f_vector, face_f_vector, face_lattice,
)
from .newton import (
    NewtonFace, codim_faces, minkowski_vertices, newton_dimension, newton_face,
    polytope_f_vector, polytope_lattice, product_f_vector, simultaneously_minimized,
)
from .subdivisions import (
    CertificateError, OracleSizeError, Subdivision, affine_rank, blade_combination,
    dual_graph, height_of_combination, is_coarsest, is_matroid_by_edges,
    is_matroid_vertex_set, is_matroidal, is_positroidal, lower_hull_oracle,
    plate_vertices, secondary_dimension, subdivision_from_height,
)
