"""Monte Carlo search (NRPA, NMCS) for the graph k-coloring decision problem."""

from .coloring import (
    ColoringState,
    Move,
    apply_move,
    encode_move,
    legal_moves,
    score,
    select_vertex_dsatur,
    verify_coloring,
)
from .graph import ContractError, DimacsError, Graph, neighbors, parse_dimacs, read_dimacs, serialize_dimacs
from .greedy import greedy_dsatur
from .policy import Policy, SearchParams, adapt, adapt_all, playout
from .sat_encoder import CnfFormula, decode_model, encode_k_coloring
from .search import SearchResult, nmcs, nmcs_increasing, nrpa

__version__ = "0.1.0"
