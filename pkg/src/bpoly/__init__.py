"""Basic r-ball polyhedra in d dimensions.

``P = ∩ B[c_i, r]`` is built from a center set and a radius; its faces come
from the boundary of the farthest-point Delaunay complex of the centers.
"""

from .ballpoly import (
    BallPolyFaceLattice,
    CenterPolytope,
    DihedralAngle,
    ValidationReport,
    build_face_lattice,
    dihedral_angle,
    dihedral_angles,
    edge_length_from_angle,
    euler_check,
    farthest_point_in_ball_intersection,
    is_r_convex_position,
    min_basic_radius,
    realize_vertex,
    realize_vertices,
    validate_basic,
)
from .bounds import cyclic_face_numbers, gale_evenness_facets, moment_curve_points, ubt_check
from .fvoronoi import boundary_delaunay, farthest_delaunay, lift, recession_cone, voronoi_vertices
from .geomcore import Ball, Flat, Tolerance, circumcenter, min_enclosing_ball, project_to_flat
from .hull import PolytopeComplex, convex_hull, faces_of_dim, supporting_facets_of
from .rigidity import (
    best_isometry,
    compare_dihedrals,
    inscribed_cell_congruence,
    lattice_isomorphisms,
    rigidity_compare,
)

__version__ = "0.1.0"
