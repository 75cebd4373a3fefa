"""
Qualitative reachability and safety in MDPs.

All routines work on anything exposing `num_states`, `num_actions`,
`successors` and `predecessors` (an Mdp or a ProductMdp). Ties are broken
towards the lowest action index so witnesses are reproducible.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .model import Mdp, StateSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RegionResult:
    """Winning region plus a memoryless strategy defined on it."""
    region: StateSet
    strategy: Dict[int, int] = field(default_factory=dict)

    def __contains__(self, q: int) -> bool:
        return q in self.region


def sure_reach(m, g: StateSet) -> RegionResult:
    """
    Least fixpoint of X -> g | Pre(X).

    A state joining at layer i+1 plays the lowest action whose support lies
    in the region of layer i, so every play reaches g within |Q| steps.
    """
    n, num_actions = m.num_states, m.num_actions
    succ, preds = m.successors, m.predecessors
    inside = bytearray(n)
    missing = [[len(succ[q][a]) for a in range(num_actions)] for q in range(n)]
    strategy: Dict[int, int] = {}
    layer = list(g)
    for q in layer:
        inside[q] = 1
    depth = 0
    while layer:
        candidates: Dict[int, int] = {}
        for x in layer:
            for q, a in preds[x]:
                missing[q][a] -= 1
                if missing[q][a] == 0 and not inside[q]:
                    if q not in candidates or a < candidates[q]:
                        candidates[q] = a
        layer = sorted(candidates)
        for q in layer:
            inside[q] = 1
            strategy[q] = candidates[q]
        if layer:
            depth += 1
    logger.debug(f"sure_reach: {len(strategy)} states added in {depth} layers")
    return RegionResult(StateSet.from_flags(inside), strategy)


def sure_safe(m, t: StateSet) -> RegionResult:
    """Greatest fixpoint of X -> t & Pre(X); the strategy never leaves it."""
    n, num_actions = m.num_states, m.num_actions
    succ, preds = m.successors, m.predecessors
    inside = bytearray(n)
    for q in t:
        inside[q] = 1
    outside = [[sum(1 for s in succ[q][a] if not inside[s]) for a in range(num_actions)]
               for q in range(n)]
    good = [sum(1 for a in range(num_actions) if outside[q][a] == 0) for q in range(n)]
    queue = deque(q for q in t if good[q] == 0)
    queued = set(queue)
    while queue:
        x = queue.popleft()
        inside[x] = 0
        for q, a in preds[x]:
            if not inside[q]:
                continue
            if outside[q][a] == 0:
                good[q] -= 1
                if good[q] == 0 and q not in queued:
                    queued.add(q)
                    queue.append(q)
            outside[q][a] += 1
    strategy: Dict[int, int] = {}
    for q in range(n):
        if inside[q]:
            strategy[q] = next(a for a in range(num_actions) if outside[q][a] == 0)
    logger.debug(f"sure_safe: {len(strategy)} of {len(t)} target states are safe")
    return RegionResult(StateSet.from_flags(inside), strategy)


def almost_reach(m, g: StateSet, within: Optional[StateSet] = None) -> RegionResult:
    """
    Almost-sure (equivalently limit-sure) reachability of g.

    Alternates "can reach g with positive probability using actions that
    stay inside W" with shrinking W to that set, until stable.

    Args:
        m: MDP or product
        g: Target set
        within: Optional starting W; actions leaving it are never used
    """
    n, num_actions = m.num_states, m.num_actions
    succ, preds = m.successors, m.predecessors
    allowed_states = bytearray(n)
    if within is None:
        allowed_states = bytearray(b"\x01" * n)
    else:
        for q in within:
            allowed_states[q] = 1
    rounds = 0
    while True:
        rounds += 1
        safe_action = [[all(allowed_states[s] for s in succ[q][a]) for a in range(num_actions)]
                       if allowed_states[q] else None for q in range(n)]
        distance = [-1] * n
        frontier = deque()
        for q in g:
            if allowed_states[q]:
                distance[q] = 0
                frontier.append(q)
        while frontier:
            x = frontier.popleft()
            for q, a in preds[x]:
                if distance[q] < 0 and allowed_states[q] and safe_action[q][a]:
                    distance[q] = distance[x] + 1
                    frontier.append(q)
        shrunk = False
        for q in range(n):
            if allowed_states[q] and distance[q] < 0:
                allowed_states[q] = 0
                shrunk = True
        if not shrunk:
            break
    strategy: Dict[int, int] = {}
    for q in range(n):
        if not allowed_states[q]:
            continue
        safe = [a for a in range(num_actions) if safe_action[q][a]]
        if distance[q] == 0:
            strategy[q] = safe[0] if safe else 0
            continue
        strategy[q] = next(a for a in safe
                           if any(distance[s] == distance[q] - 1 for s in succ[q][a]))
    logger.debug(f"almost_reach: region of {len(strategy)} states after {rounds} rounds")
    return RegionResult(StateSet.from_flags(allowed_states), strategy)


limit_reach = almost_reach


def reach_value_iter(m: Mdp, g: StateSet, iters: int) -> Dict[int, float]:
    """
    Bellman iteration for the maximal probability of eventually reaching g.

    Only a numerical cross-check; values are lower bounds that never decrease.
    """
    if iters < 1:
        raise ValueError(f"iters must be >= 1, got {iters}")
    n = m.num_states
    matrices = np.zeros((m.num_actions, n, n))
    for q, row in enumerate(m.delta):
        for a, dist in enumerate(row):
            for s, p in dist.items():
                matrices[a, q, s] = float(p)
    in_target = np.zeros(n, dtype=bool)
    in_target[list(g)] = True
    values = in_target.astype(float)
    for _ in range(iters):
        values = np.where(in_target, 1.0, (matrices @ values).max(axis=0))
    return {q: float(values[q]) for q in range(n)}

