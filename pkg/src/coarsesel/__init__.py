"""Selectors, coarse structures and impossibility certificates on finite windows."""
from .core import (UNBOUNDED, CoarseMap, CoarseSpace, DomainError, GroupScale, MetricScale,
                   Window, ball, compose_scales, hausdorff_distance, hyper_close, hyperpoint,
                   invert_scale, is_large, is_selector, modulus_estimate, modulus_profile,
                   point_modulus, transfer_selector)
from .graphs import (Graph, classify_shape, claim5_bijection, claim5_distortion, ends_estimate,
                     geodesic, make_complete, make_grid, make_interval, make_line, make_ray,
                     make_tripod, parse_edge_list, sphere_profile)
from .groups import (CosetTower, FiniteGroup, FinitarySymmetric, GroupWindow, IntLine, SumZ2,
                     VirtuallyZ, cayley_graph, dinf, encode_h, load_group_spec, sum_z2_tower,
                     sym_tower, well_order_compare, z_cross_zk)
from .refuter import (Certificate, OrientationStore, claim1_rule, claim2_rule, claim3_rule,
                      replay, tripod_refute, z_global_refute)
from .search import search_two_selector
from .selectors import (LinearOrder, is_compatible_order, is_interval_entourage, max_selector,
                        prec_of, well_order_selector)

__version__ = "0.1.0"

__all__ = [
    "ball",
    "cayley_graph",
    "Certificate",
    "claim1_rule",
    "claim2_rule",
    "claim3_rule",
    "claim5_bijection",
    "claim5_distortion",
    "classify_shape",
    "CoarseMap",
    "CoarseSpace",
    "compose_scales",
    "CosetTower",
    "dinf",
    "DomainError",
    "encode_h",
    "ends_estimate",
    "FinitarySymmetric",
    "FiniteGroup",
    "geodesic",
    "Graph",
    "GroupScale",
    "GroupWindow",
    "hausdorff_distance",
    "hyper_close",
    "hyperpoint",
    "IntLine",
    "invert_scale",
    "is_compatible_order",
    "is_interval_entourage",
    "is_large",
    "is_selector",
    "LinearOrder",
    "load_group_spec",
    "make_complete",
    "make_grid",
    "make_interval",
    "make_line",
    "make_ray",
    "make_tripod",
    "max_selector",
    "MetricScale",
    "modulus_estimate",
    "modulus_profile",
    "OrientationStore",
    "parse_edge_list",
    "point_modulus",
    "prec_of",
    "replay",
    "search_two_selector",
    "sphere_profile",
    "sum_z2_tower",
    "SumZ2",
    "sym_tower",
    "transfer_selector",
    "tripod_refute",
    "UNBOUNDED",
    "VirtuallyZ",
    "well_order_compare",
    "well_order_selector",
    "Window",
    "z_cross_zk",
    "z_global_refute",
]
