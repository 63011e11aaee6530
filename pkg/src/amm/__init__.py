"""Average mixing matrices of continuous-time quantum walks on graphs.

Exact results come from projecting onto the commutant of the adjacency
matrix over the rationals; floating-point results come from the spectral
idempotents and serve as an independent cross-check.
"""

from .commutant import (
    AverageMixingMatrix,
    AverageState,
    CommutantBasis,
    average_mixing_exact,
    average_state,
    commutant_basis,
    gram_of_average_states,
    project_commutant,
)
from .graphs import Graph, adjacency_matrix, classify, parse_graph6, write_graph6
from .rational import RationalMatrix

__version__ = "0.1.0"

__all__ = [
    "AverageMixingMatrix",
    "AverageState",
    "CommutantBasis",
    "Graph",
    "RationalMatrix",
    "adjacency_matrix",
    "average_mixing_exact",
    "average_state",
    "classify",
    "commutant_basis",
    "gram_of_average_states",
    "parse_graph6",
    "project_commutant",
    "write_graph6",
]
