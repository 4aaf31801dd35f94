"""Finite presheaves over finite categories: purity, pure-effective squares and order-property chains."""

from .errors import PurelabError
from .fincat import FinCat, SpanWitness, is_llp, monoid_to_cat, poset_to_cat, validate_category
from .limits import PushoutResult, Square, induced_map, is_pullback_square, pullback_monos, pushout_monos
from .presheaf import (
    Hom,
    Presheaf,
    SubPresheaf,
    generate,
    intersect,
    is_mono,
    representable,
    subpresheaf,
    validate_hom,
    validate_presheaf,
)
from .connectivity import ConnectivityReport, components_outside, connected_outside
from .purity import (
    Anchor,
    EqSystem,
    Link,
    amalgamate_solution,
    is_pure,
    is_pure_effective,
    is_split,
    solve_system,
)
from .witness import build_chain, check_H_properties, check_order_pattern, find_pattern

__version__ = "0.1.0"

__all__ = [
    "Anchor",
    "ConnectivityReport",
    "EqSystem",
    "FinCat",
    "Hom",
    "Link",
    "Presheaf",
    "PurelabError",
    "PushoutResult",
    "SpanWitness",
    "Square",
    "SubPresheaf",
    "amalgamate_solution",
    "build_chain",
    "check_H_properties",
    "check_order_pattern",
    "components_outside",
    "connected_outside",
    "find_pattern",
    "generate",
    "induced_map",
    "intersect",
    "is_llp",
    "is_mono",
    "is_pullback_square",
    "is_pure",
    "is_pure_effective",
    "is_split",
    "monoid_to_cat",
    "poset_to_cat",
    "pullback_monos",
    "pushout_monos",
    "representable",
    "solve_system",
    "subpresheaf",
    "validate_category",
    "validate_hom",
    "validate_presheaf",
]
