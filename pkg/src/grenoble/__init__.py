"""Optimal coloring of square-free Grenoble graphs.

A square-free Grenoble graph has no odd hole, no odd antihole, no odd prism
and no 4-hole.  :func:`color` returns a coloring together with a clique of
the same size, which certifies both optimal.
"""

from .decompose import ColoredResult, color
from .detectors import Prism, Witness, classify, find_prism, is_even_pair
from .errors import BudgetExceeded, InputError, LemmaViolation, NotInClass
from .graph import Graph, Path, read_dimacs, write_dimacs
from .hyperprism import Hyperprism, grow_maximal, validate_hyperprism
from .oracle import CliqueWitness, Coloring, chromatic_number_exact, max_clique_exact, verify_coloring

__all__ = [
    "BudgetExceeded",
    "CliqueWitness",
    "ColoredResult",
    "Coloring",
    "Graph",
    "Hyperprism",
    "InputError",
    "LemmaViolation",
    "NotInClass",
    "Path",
    "Prism",
    "Witness",
    "chromatic_number_exact",
    "classify",
    "color",
    "find_prism",
    "grow_maximal",
    "is_even_pair",
    "max_clique_exact",
    "read_dimacs",
    "validate_hyperprism",
    "verify_coloring",
    "write_dimacs",
]
