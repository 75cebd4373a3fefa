"""
Graph of deterministic transitions, its SCC decomposition and simple cycles.
"""
import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from .exceptions import ModelError
from .model import Mdp

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DetGraph:
    """Edges (q1, q2) labelled with the lowest action whose transition is Dirac on q2."""
    mdp: Mdp
    graph: nx.DiGraph

    def has_edge(self, q1: int, q2: int) -> bool:
        return self.graph.has_edge(q1, q2)

    def action(self, q1: int, q2: int) -> int:
        return self.graph.edges[q1, q2]['action']

    def edges(self) -> List[Tuple[int, int, int]]:
        return sorted((u, v, data['action']) for u, v, data in self.graph.edges(data=True))


@dataclass(frozen=True)
class Scc:
    states: Tuple[int, ...]
    has_cycle: bool


@dataclass(frozen=True)
class DetCycle:
    """
    Simple deterministic cycle q_l, q_(l-1), ..., q_0 with q_l == q_0.

    `states` lists the cycle in edge order and repeats the first state at
    the end; `actions[j]` labels the edge states[j] -> states[j+1].
    """
    states: Tuple[int, ...]
    actions: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.actions)

    @property
    def anchor(self) -> int:
        """q_0, the state the counter product aims for at counter 0."""
        return self.states[0]

    def state_at(self, i: int) -> int:
        """q_i for counter value i."""
        return self.states[self.length - i % self.length]

    def action_at(self, i: int) -> int:
        """Action leading from q_i to q_(i-1 mod l)."""
        return self.actions[(self.length - i % self.length) % self.length]

    def validate(self, m: Mdp) -> None:
        """
        Raises:
            ModelError: If an edge is not a Dirac transition or the cycle is not simple
        """
        if self.length < 1 or len(self.states) != self.length + 1:
            raise ModelError(f"Malformed cycle {self.states}")
        if self.states[0] != self.states[-1]:
            raise ModelError(f"Cycle {self.states} is not closed")
        interior = self.states[:-1]
        if len(set(interior)) != len(interior):
            raise ModelError(f"Cycle {self.states} is not simple")
        for j, a in enumerate(self.actions):
            src, dst = self.states[j], self.states[j + 1]
            dist = m.delta[src][a]
            if not (dist.is_dirac and dst in dist):
                raise ModelError(f"Edge {m.states[src]} -{m.actions[a]}-> {m.states[dst]} "
                                 f"is not deterministic")

    @classmethod
    def from_path(cls, g: DetGraph, path: Sequence[int]) -> 'DetCycle':
        """Build from the open vertex list v0 -> v1 -> ... -> v(l-1) -> v0."""
        closed = tuple(path) + (path[0],)
        actions = tuple(g.action(closed[j], closed[j + 1]) for j in range(len(path)))
        return cls(closed, actions)


def det_graph(m: Mdp) -> DetGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(m.num_states))
    for q, row in enumerate(m.delta):
        for a, dist in enumerate(row):
            if dist.is_dirac:
                (succ,) = tuple(dist)
                if not graph.has_edge(q, succ):
                    graph.add_edge(q, succ, action=a)
    logger.debug(f"Deterministic graph: {graph.number_of_edges()} edges")
    return DetGraph(m, graph)


def scc(g: DetGraph) -> List[Scc]:
    """Strongly connected components in reverse topological order (sinks first)."""
    condensed = nx.condensation(g.graph)
    order = list(nx.lexicographical_topological_sort(
        condensed, key=lambda c: min(condensed.nodes[c]['members'])))
    components = []
    for c in reversed(order):
        members = tuple(sorted(condensed.nodes[c]['members']))
        cyclic = len(members) > 1 or g.graph.has_edge(members[0], members[0])
        components.append(Scc(members, cyclic))
    return components


def shortest_cycle(g: DetGraph, component: Scc) -> Optional[DetCycle]:
    """
    Shortest simple cycle inside one SCC by breadth-first search from each
    member; ties go to the lowest starting state.
    """
    if not component.has_cycle:
        return None
    inside = set(component.states)
    best: Optional[List[int]] = None
    for v in component.states:
        if g.graph.has_edge(v, v):
            return DetCycle.from_path(g, [v])
        parent: Dict[int, int] = {}
        queue = deque()
        for w in sorted(g.graph.successors(v)):
            if w in inside and w not in parent:
                parent[w] = v
                queue.append(w)
        found = False
        while queue and not found:
            x = queue.popleft()
            for w in sorted(g.graph.successors(x)):
                if w == v:
                    path = [x]
                    while path[-1] != v:
                        path.append(parent[path[-1]])
                    path.reverse()
                    if best is None or len(path) < len(best):
                        best = path
                    found = True
                    break
                if w in inside and w not in parent and w != v:
                    parent[w] = x
                    queue.append(w)
    return DetCycle.from_path(g, best) if best else None


def simple_cycles(g: DetGraph, component: Scc, limit: int = 16) -> Iterator[DetCycle]:
    """Up to `limit` simple cycles of one SCC, shortest first."""
    sub = g.graph.subgraph(component.states)
    found = []
    for path in nx.simple_cycles(sub):
        found.append(path)
        if len(found) >= limit:
            break
    for path in sorted(found, key=lambda p: (len(p), p)):
        start = path.index(min(path))
        yield DetCycle.from_path(g, path[start:] + path[:start])
