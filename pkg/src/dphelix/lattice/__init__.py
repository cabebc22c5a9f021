"""Seeds, mutations, intersection forms, T-polygons and roots."""
from .seeds import (
    Ambient, CyclicSeed, Seed, angle_cmp, apply_T, chi_tilde, cyclic_order,
    intersection_form, is_cyclically_ordered, kernel_basis, mutate_seed, mutate_word,
)
from .painleve import FormCertificate, delta_class, is_q_painleve, kernel_gram
from .polygons import (
    Polygon, canonical_polygon, check_t_polygon, edge_data, predicted_edge_data,
    t_polygon, transform_polygon,
)
from .roots import Root, find_roots, parallel_pairs, reflection_by_form, swap_parallel

__all__ = [
    "Ambient", "CyclicSeed", "Seed", "angle_cmp", "apply_T", "chi_tilde", "cyclic_order",
    "intersection_form", "is_cyclically_ordered", "kernel_basis", "mutate_seed", "mutate_word",
    "FormCertificate", "delta_class", "is_q_painleve", "kernel_gram",
    "Polygon", "canonical_polygon", "check_t_polygon", "edge_data", "predicted_edge_data",
    "t_polygon", "transform_polygon",
    "Root", "find_roots", "parallel_pairs", "reflection_by_form", "swap_parallel",
]
