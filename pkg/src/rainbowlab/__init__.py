"""rainbowlab: exact computation and certification for rainbow tilings,
anti-Ramsey numbers and Turan numbers of uniform hypergraphs at desk scale."""

from .core import (
    CapacityError,
    Embedding,
    FormatError,
    HyperGraph,
    HyperGraphFamily,
    canonical_form,
    complete,
    contains_member,
    disjoint_union,
    family_key,
    find_embedding,
    is_isomorphic,
    is_r_partite,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "Embedding",
    "FormatError",
    "HyperGraph",
    "HyperGraphFamily",
    "canonical_form",
    "complete",
    "contains_member",
    "disjoint_union",
    "family_key",
    "find_embedding",
    "is_isomorphic",
    "is_r_partite",
    "__version__",
]
