"""
Brute-force support-graph oracle for the four sure-mode questions.

Vertices are supports reachable from the initial support; each vertex has
one edge per time-uniform pure action assignment (one action per state),
leading to the union of the chosen posts. The deciders are checked against
plain graph searches on this arena, so nothing here touches Pre.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Set

import networkx as nx

from ..mdp import Mdp, OracleSizeError, StateSet
from ..utils.settings import Limits

logger = logging.getLogger(__name__)


def _assignment_images(m: Mdp, bits: int) -> Set[int]:
    """Union masks over every choice of one action per state of `bits`."""
    images = {0}
    q = 0
    while bits >> q:
        if bits >> q & 1:
            posts = set(m.post_masks[q])
            images = {img | post for img in images for post in posts}
        q += 1
    return images


@dataclass(frozen=True)
class SupportGraph:
    """
    Reachable supports and their one-step images.

    Attributes:
        mdp: Source model
        root: Initial support as a bit mask
        graph: Directed graph over support masks
    """
    mdp: Mdp
    root: int
    graph: nx.DiGraph

    @classmethod
    def build(cls, m: Mdp, s0: StateSet, max_states: Optional[int] = None) -> 'SupportGraph':
        """
        Raises:
            OracleSizeError: If the model has more than `max_states` states
        """
        cap = Limits().oracle_max_states if max_states is None else max_states
        if m.num_states > cap:
            logger.warning(f"Oracle refuses {m.num_states} states (cap {cap})")
            raise OracleSizeError(f"Oracle handles at most {cap} states, model has {m.num_states}")
        if s0.is_empty():
            raise OracleSizeError("Oracle needs a non-empty initial support")
        graph = nx.DiGraph()
        graph.add_node(s0.bits)
        stack = [s0.bits]
        while stack:
            bits = stack.pop()
            for image in _assignment_images(m, bits):
                if image not in graph:
                    stack.append(image)
                graph.add_edge(bits, image)
        logger.debug(f"Support graph: {graph.number_of_nodes()} vertices, "
                     f"{graph.number_of_edges()} edges")
        return cls(m, s0.bits, graph)

    @property
    def vertices(self) -> Iterable[int]:
        return self.graph.nodes

    def cyclic_vertices(self, keep: Callable[[int], bool]) -> Set[int]:
        """Vertices lying on a cycle of the subgraph induced by `keep`."""
        sub = self.graph.subgraph(v for v in self.graph.nodes if keep(v))
        found: Set[int] = set()
        for component in nx.strongly_connected_components(sub):
            if len(component) > 1:
                found |= component
            else:
                (v,) = component
                if sub.has_edge(v, v):
                    found.add(v)
        return found


def _within(t: StateSet) -> Callable[[int], bool]:
    return lambda bits: bits & ~t.bits == 0


def oracle_sure_event(m: Mdp, s0: StateSet, t: StateSet, max_states: Optional[int] = None) -> bool:
    """Some reachable support lies inside t."""
    g = SupportGraph.build(m, s0, max_states)
    inside = _within(t)
    return any(inside(v) for v in g.vertices)


def oracle_sure_weak(m: Mdp, s0: StateSet, t: StateSet, max_states: Optional[int] = None) -> bool:
    """Some reachable cycle passes through a support inside t."""
    g = SupportGraph.build(m, s0, max_states)
    inside = _within(t)
    return any(inside(v) for v in g.cyclic_vertices(lambda v: True))


def oracle_sure_strong_sum(m: Mdp, s0: StateSet, t: StateSet, max_states: Optional[int] = None) -> bool:
    """Some reachable cycle stays among supports inside t."""
    g = SupportGraph.build(m, s0, max_states)
    return bool(g.cyclic_vertices(_within(t)))


def oracle_sure_strong_max(m: Mdp, s0: StateSet, t: StateSet, max_states: Optional[int] = None) -> bool:
    """Some reachable cycle stays among singleton supports inside t."""
    g = SupportGraph.build(m, s0, max_states)
    inside = _within(t)
    return bool(g.cyclic_vertices(lambda v: inside(v) and v & (v - 1) == 0))


ORACLES = {
    'event': oracle_sure_event,
    'weak': oracle_sure_weak,
    'strong_sum': oracle_sure_strong_sum,
    'strong_max': oracle_sure_strong_max,
}
