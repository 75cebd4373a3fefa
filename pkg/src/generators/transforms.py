"""
Model transformations: state duplication and the two hardness reductions
used as test generators with independent ground truth.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from ..mdp import Dist, Mdp, ModelError, QueryError, StateSet, pre_seq

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Duplication:
    """
    Result of duplicate_outside.

    Attributes:
        mdp: The transformed model
        origin: origin[x] is the source state of x
        copies: copies[q] lists the states standing for source state q
    """
    mdp: Mdp
    origin: Tuple[int, ...]
    copies: Tuple[Tuple[int, ...], ...] = field(repr=False)

    def lift(self, d: Dist) -> Dist:
        """Spread a source distribution equally over the copies."""
        entries: Dict[int, Fraction] = {}
        for q, p in d.items():
            share = p / len(self.copies[q])
            for x in self.copies[q]:
                entries[x] = share
        return Dist(entries)

    def lift_set(self, states: StateSet) -> StateSet:
        return StateSet.of(self.mdp.num_states, (x for q in states for x in self.copies[q]))


@lru_cache(maxsize=64)
def duplicate(m: Mdp, keep: StateSet) -> Duplication:
    """
    Duplicate every state outside `keep`; mass entering a duplicated state
    is split equally between its two copies.
    """
    if keep.size != m.num_states:
        raise ModelError(f"Keep set over {keep.size} states, model has {m.num_states}")
    names: List[str] = []
    origin: List[int] = []
    copies: List[Tuple[int, ...]] = []
    taken = set(m.states)
    for q, name in enumerate(m.states):
        if q in keep:
            copies.append((len(names),))
            names.append(name)
            origin.append(q)
            continue
        pair = []
        for k in (1, 2):
            copy_name = m.fresh_name(f"{name}_{k}", taken)
            taken.add(copy_name)
            pair.append(len(names))
            names.append(copy_name)
            origin.append(q)
        copies.append(tuple(pair))

    def split(dist: Dist) -> Dist:
        entries: Dict[int, Fraction] = {}
        for s, p in dist.items():
            for x in copies[s]:
                entries[x] = p / len(copies[s])
        return Dist(entries)

    rows = [tuple(split(dist) for dist in m.delta[origin[x]]) for x in range(len(names))]
    result = Mdp(tuple(names), m.actions, tuple(rows))
    logger.debug(f"duplicate: {m.num_states} -> {result.num_states} states")
    return Duplication(result, tuple(origin), tuple(copies))


def duplicate_outside(m: Mdp, keep: StateSet) -> Mdp:
    return duplicate(m, keep).mdp


def reduce_event_to_weak(m: Mdp, q_init: int, qhat: int) -> Tuple[Mdp, int]:
    """
    Sure eventually synchronizing in {qhat} from q_init in `m` iff sure weakly
    synchronizing in {phat} from q_init in the result.

    Adds states phat and sink and an action '#': '#' leads to sink except
    from qhat, where it leads to phat; phat returns to q_init on every other
    action and sink is absorbing.

    Returns:
        (new model, index of phat)
    """
    phat_name = m.fresh_name("p_hat")
    sink_name = m.fresh_name("sink", [phat_name])
    sharp = "#"
    if sharp in m.actions:
        raise ModelError("Action '#' already used by the model")
    n = m.num_states
    phat, sink = n, n + 1
    rows = []
    for q, row in enumerate(m.delta):
        rows.append(row + (Dist.dirac(phat if q == qhat else sink),))
    rows.append(tuple(Dist.dirac(q_init) for _ in m.actions) + (Dist.dirac(sink),))
    rows.append(tuple(Dist.dirac(sink) for _ in range(m.num_actions + 1)))
    result = Mdp(m.states + (phat_name, sink_name), m.actions + (sharp,), tuple(rows))
    return result, phat


def reduce_preempty_to_almostweak(m: Mdp, t: StateSet) -> Tuple[Mdp, int]:
    """
    Pre^n(t) is non-empty for all n in `m` iff the fresh initial state is
    almost-sure weakly synchronizing in t in the result.

    The fresh state self-loops on the original actions and spreads uniformly
    over the original states on '#'; '#' leads back to it from everywhere else.

    Returns:
        (new model, index of the fresh initial state)

    Raises:
        QueryError: If t is not a singleton
    """
    if len(t) != 1:
        raise QueryError(f"Reduction needs a singleton target, got {len(t)} states")
    sharp = "#"
    if sharp in m.actions:
        raise ModelError("Action '#' already used by the model")
    n = m.num_states
    fresh = n
    rows = [row + (Dist.dirac(fresh),) for row in m.delta]
    rows.append(tuple(Dist.dirac(fresh) for _ in m.actions) + (Dist.uniform(range(n)),))
    name = m.fresh_name("q_init")
    result = Mdp(m.states + (name,), m.actions + (sharp,), tuple(rows))
    return result, fresh


def preempty_ground_truth(m: Mdp, t: StateSet, cap: Optional[int] = None) -> bool:
    """True iff no set of pre_seq(t) is empty."""
    return all(not s.is_empty() for s in pre_seq(m, t, cap=cap).distinct)
