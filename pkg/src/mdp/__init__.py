"""
Exact MDP core: model types, the Pre operator, deterministic-transition
graphs, the counter product and qualitative reachability.
"""

from .exceptions import (
    SyncError,
    ModelError,
    ModelParseError,
    QueryError,
    InconclusiveError,
    OracleSizeError,
    StrategyError,
)
from .model import Dist, Mdp, StateSet, to_fraction
from .predecessors import PredecessorSequence, pre_power, pre_seq, pre_set
from .graphs import DetCycle, DetGraph, Scc, det_graph, scc, shortest_cycle, simple_cycles
from .product import ProductMdp, embed_initial, product_counter
from .reach import RegionResult, almost_reach, limit_reach, reach_value_iter, sure_reach, sure_safe

__all__ = [
    'SyncError',
    'ModelError',
    'ModelParseError',
    'QueryError',
    'InconclusiveError',
    'OracleSizeError',
    'StrategyError',
    'Dist',
    'Mdp',
    'StateSet',
    'to_fraction',
    'PredecessorSequence',
    'pre_power',
    'pre_seq',
    'pre_set',
    'DetCycle',
    'DetGraph',
    'Scc',
    'det_graph',
    'scc',
    'shortest_cycle',
    'simple_cycles',
    'ProductMdp',
    'embed_initial',
    'product_counter',
    'RegionResult',
    'almost_reach',
    'limit_reach',
    'reach_value_iter',
    'sure_reach',
    'sure_safe',
]
