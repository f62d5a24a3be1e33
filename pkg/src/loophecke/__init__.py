"""Exact computations for loop-Hecke algebras and their super-permutation images."""

__version__ = "0.1.0"

from .scalars import QQ, QQt, GF  # noqa: E402
from .presentations import (  # noqa: E402
    AlgebraElement, Generator, Relation, Word, element, lh_relations, loop_braid_relations,
    parse_element,
)
from .reps import alexander_polynomial, burau_gb, fe_rep, verify_assignment  # noqa: E402
from .rewrite import complete, enumerate_basis, lh_system  # noqa: E402
from .spanclosure import close, sp_dimension, structure  # noqa: E402

__all__ = [
    "QQ", "QQt", "GF", "AlgebraElement", "Generator", "Relation", "Word", "element",
    "lh_relations", "loop_braid_relations", "parse_element", "alexander_polynomial", "burau_gb",
    "fe_rep", "verify_assignment", "complete", "enumerate_basis", "lh_system", "close",
    "sp_dimension", "structure",
]
