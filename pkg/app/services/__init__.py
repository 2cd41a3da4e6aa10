"""Service modules for torimult."""
from app.services.logging_service import log_event, log_critical, log_high, log_medium

# Rational polyhedral geometry
from app.services.ratgeom import (
    LPStatus, LPResult, primitive, lattice_points_in_box,
    cone_hrep, facet_normals, cone_dim, is_full_dimensional, is_pointed, cone_contains,
    in_relative_interior, extreme_rays, is_simplicial, dualize, cone_from_inequalities,
    intersect_cones, triangulate, hilbert_basis, cone_multiplicity,
    lp_min, ilp_min, vertices, vertex_denominators, recession_cone, min_generators,
)

# Fans and resolutions
from app.services.toric import (
    affine_toric_variety, build_fan, trivial_fan, fan_cones, normal_fan_of_points,
    newton_fan, normal_fan_restricted, common_refinement, star_subdivide, is_smooth,
    resolve, log_resolution, containing_cone, center, is_locally_principal, fan_to_dict,
)

# Divisors and valuations
from app.services.divisors import (
    section_polyhedron, principal_divisor, val_ideal, nat_val, limit_val,
    natural_valuation_sequence, divisorial_part, reflexive_hull, nat_pullback, pullback,
    canonical_divisor, limiting_relcan, relcan, relcan_minus, is_qcartier, make_boundary,
    log_relcan, relative_nat_pullback, relative_pullback, relative_limiting_relcan,
)

# Multiplier ideals
from app.services.mult import (
    ideal_from_points, monomial_membership, ideal_contains, ideal_equal, ideal_sum,
    ideal_product, ideal_power, ideal_shift, body_ideal, pair_value, uniform_polyhedron,
    stabilization_certificate, working_resolution, pushforward_module, mult_ideal_m,
    mult_ideal, valuative_mult_ideal, log_mult_ideal, lct, log_lct, jumping_numbers,
    base_ideal, asymptotic_mult_ideal, asymptotic_contains_base_ideal, adjoint_ideal,
    adjoint_sequence_check, compatible_boundary_search,
)

# Singularities
from app.services.sing import (
    stable_log_discrepancy, limiting_log_discrepancy, classify_log, classify_log_pair,
    lc_centers, canonical_pair_value, log_discrepancy, classify_can, classify,
    canonical_certificate_m, canonical_inclusion_check, hirzebruch_jung,
    surface_minimal_resolution, surface_numerical_classify, canonical_vs_log_survey,
)

# Documents
from app.services.problem_parser import (
    parse_problem, problem_to_dict, serialize_problem, build_variety, build_divisor,
    build_ideal, build_body, build_pair, build_boundary,
)
from app.services.result_writer import render_result, parse_result, write_atomic
from app.services.report_exporter import (
    ReportExporter, ReportExportResult, RayTable, divisor_table, generate_report_filename,
)
from app.services.gallery import GALLERY, gallery_names, gallery_text, load_example

__all__ = [
    # Logging
    'log_event', 'log_critical', 'log_high', 'log_medium',
    # Rational geometry
    'LPStatus', 'LPResult', 'primitive', 'lattice_points_in_box',
    'cone_hrep', 'facet_normals', 'cone_dim', 'is_full_dimensional', 'is_pointed',
    'cone_contains', 'in_relative_interior', 'extreme_rays', 'is_simplicial', 'dualize',
    'cone_from_inequalities', 'intersect_cones', 'triangulate', 'hilbert_basis',
    'cone_multiplicity', 'lp_min', 'ilp_min', 'vertices', 'vertex_denominators',
    'recession_cone', 'min_generators',
    # Fans
    'affine_toric_variety', 'build_fan', 'trivial_fan', 'fan_cones', 'normal_fan_of_points',
    'newton_fan', 'normal_fan_restricted', 'common_refinement', 'star_subdivide', 'is_smooth',
    'resolve', 'log_resolution', 'containing_cone', 'center', 'is_locally_principal',
    'fan_to_dict',
    # Divisors
    'section_polyhedron', 'principal_divisor', 'val_ideal', 'nat_val', 'limit_val',
    'natural_valuation_sequence', 'divisorial_part', 'reflexive_hull', 'nat_pullback',
    'pullback', 'canonical_divisor', 'limiting_relcan', 'relcan', 'relcan_minus',
    'is_qcartier', 'make_boundary', 'log_relcan', 'relative_nat_pullback',
    'relative_pullback', 'relative_limiting_relcan',
    # Multiplier ideals
    'ideal_from_points', 'monomial_membership', 'ideal_contains', 'ideal_equal', 'ideal_sum',
    'ideal_product', 'ideal_power', 'ideal_shift', 'body_ideal', 'pair_value', 'uniform_polyhedron',
    'stabilization_certificate', 'working_resolution', 'pushforward_module', 'mult_ideal_m',
    'mult_ideal', 'valuative_mult_ideal', 'log_mult_ideal', 'lct', 'log_lct',
    'jumping_numbers', 'base_ideal', 'asymptotic_mult_ideal',
    'asymptotic_contains_base_ideal', 'adjoint_ideal', 'adjoint_sequence_check',
    'compatible_boundary_search',
    # Singularities
    'stable_log_discrepancy', 'limiting_log_discrepancy', 'classify_log', 'classify_log_pair',
    'lc_centers', 'canonical_pair_value', 'log_discrepancy', 'classify_can', 'classify',
    'canonical_certificate_m', 'canonical_inclusion_check', 'hirzebruch_jung',
    'surface_minimal_resolution', 'surface_numerical_classify', 'canonical_vs_log_survey',
    # Documents
    'parse_problem', 'problem_to_dict', 'serialize_problem', 'build_variety', 'build_divisor',
    'build_ideal', 'build_body', 'build_pair', 'build_boundary',
    'render_result', 'parse_result', 'write_atomic',
    # XLSX Reports
    'ReportExporter', 'ReportExportResult', 'RayTable', 'divisor_table',
    'generate_report_filename',
    # Gallery
    'GALLERY', 'gallery_names', 'gallery_text', 'load_example',
]
