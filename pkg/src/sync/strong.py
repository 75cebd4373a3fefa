"""
Strongly synchronizing objectives.

max_T: mass 1 (or close to 1) must eventually sit in one state of T at
every step, which forces play along a deterministic cycle. The question is
a reachability query in the product with a counter modulo the cycle length.

sum_T: the mass must eventually stay inside T, i.e. reach the sure safety
region of T.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from ..generators.transforms import duplicate
from ..mdp import (
    DetCycle,
    Dist,
    Mdp,
    QueryError,
    RegionResult,
    StateSet,
    StrategyError,
    almost_reach,
    det_graph,
    embed_initial,
    product_counter,
    scc,
    shortest_cycle,
    sure_reach,
    sure_safe,
)
from .strategy import Transducer, memoryless

logger = logging.getLogger(__name__)

MODES = ("sure", "almost", "limit")


def _normalize_mode(mode: str) -> str:
    if mode not in MODES:
        raise QueryError(f"Unknown winning mode {mode!r}; expected one of {', '.join(MODES)}")
    return "almost" if mode == "limit" else mode


def _reach(m, g: StateSet, mode: str) -> RegionResult:
    return sure_reach(m, g) if mode == "sure" else almost_reach(m, g)


def _as_dist(init: Union[int, Dist]) -> Dist:
    return init if isinstance(init, Dist) else Dist.dirac(init)


@dataclass(frozen=True)
class StrongMaxVerdict:
    """
    Strong max_T verdict.

    `cycle` is expressed over the source model; `strategy` is a transducer
    over the source model with one mode per counter value.
    """
    holds: bool
    mode: str
    cycle: Optional[DetCycle] = None
    shift: Optional[int] = None
    strategy: Optional[Transducer] = field(default=None, repr=False)
    cycles_checked: int = 0

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class StrongSumVerdict:
    holds: bool
    mode: str
    safe_region: StateSet
    strategy: Optional[Transducer] = field(default=None, repr=False)

    def __bool__(self) -> bool:
        return self.holds


def candidate_cycles(m: Mdp) -> List[DetCycle]:
    """One shortest deterministic cycle per cycle-containing SCC, sinks first."""
    g = det_graph(m)
    cycles = [shortest_cycle(g, component) for component in scc(g) if component.has_cycle]
    return [c for c in cycles if c is not None]


def evaluate_cycle(arena: Mdp, start: int, cycle: DetCycle, mode: str) -> Tuple[Optional[int], RegionResult]:
    """
    Check one cycle: <start, h> must reach <anchor, 0> in M x [l].

    Returns:
        (least winning shift h or None, the product region)
    """
    mode = _normalize_mode(mode)
    product = product_counter(arena, cycle.length)
    region = _reach(product, StateSet.of(product.num_states, [product.index(cycle.anchor, 0)]), mode)
    shift = next((h for h in range(cycle.length) if product.index(start, h) in region), None)
    return shift, region


def _cycle_transducer(arena: Mdp, start: int, cycle: DetCycle, shift: int,
                      region: RegionResult) -> Transducer:
    length = cycle.length
    product = product_counter(arena, length)

    def choose(mode: int, q: int) -> int:
        if q == cycle.state_at(mode):
            return cycle.action_at(mode)
        x = product.index(q, mode)
        if x not in region.strategy:
            raise StrategyError(f"No reach move for {product.state_name(x)}")
        return region.strategy[x]

    return Transducer.explore(arena, shift, [start], choose,
                              lambda mode, a, s: (mode - 1) % length)


def decide_strong_max(
    m: Mdp,
    init: Union[int, Dist],
    t: StateSet,
    mode: str
) -> StrongMaxVerdict:
    """
    Strongly synchronizing for max_T.

    For t != Q the states outside t are duplicated first so that mass can
    only concentrate in one state of t. Cycles come from every
    cycle-containing SCC of the deterministic graph, each checked for all
    counter shifts against a single product region.

    Raises:
        QueryError: If t is empty or the mode is unknown
    """
    mode = _normalize_mode(mode)
    if t.is_empty():
        raise QueryError("max_T needs a non-empty target set")
    d0 = _as_dist(init)
    dup = duplicate(m, t)
    arena, origin = dup.mdp, list(dup.origin)
    arena_init = dup.lift(d0)
    entry = None
    if arena_init.is_dirac:
        (start,) = tuple(arena_init)
    else:
        arena, start = embed_initial(arena, arena_init)
        origin.append(None)
        entry = start

    cycles = candidate_cycles(arena)
    for checked, cycle in enumerate(cycles, start=1):
        shift, region = evaluate_cycle(arena, start, cycle, mode)
        if shift is None:
            continue
        transducer = _cycle_transducer(arena, start, cycle, shift, region)
        if entry is None:
            projected = transducer.project(arena, origin, starts=[start])
        else:
            projected = transducer.project(arena, origin, entry=entry)
        source_cycle = DetCycle(tuple(origin[x] for x in cycle.states), cycle.actions)
        logger.info(f"decide_strong_max ({mode}): yes via cycle of length {cycle.length}, "
                    f"shift {shift}")
        return StrongMaxVerdict(True, mode, source_cycle, shift, projected, checked)
    logger.info(f"decide_strong_max ({mode}): no after {len(cycles)} cycles")
    return StrongMaxVerdict(False, mode, cycles_checked=len(cycles))


def decide_strong_sum(
    m: Mdp,
    init: Union[int, Dist],
    t: StateSet,
    mode: str
) -> StrongSumVerdict:
    """
    Strongly synchronizing for sum_T: reach S = sure_safe(t), surely or
    almost surely, from every state of the initial support.
    """
    mode = _normalize_mode(mode)
    d0 = _as_dist(init)
    safe = sure_safe(m, t)
    reach = _reach(m, safe.region, mode)
    holds = d0.support(m.num_states) <= reach.region
    strategy = None
    if holds:
        moves = dict(reach.strategy)
        moves.update(safe.strategy)
        strategy = memoryless(m, moves, d0)
    logger.info(f"decide_strong_sum ({mode}): {'yes' if holds else 'no'}, "
                f"|S|={len(safe.region)}")
    return StrongSumVerdict(holds, mode, safe.region, strategy)


def decide_strong(
    m: Mdp,
    init: Union[int, Dist],
    t: StateSet,
    function: str,
    mode: str
) -> Union[StrongMaxVerdict, StrongSumVerdict]:
    if function == "max":
        return decide_strong_max(m, init, t, mode)
    if function == "sum":
        return decide_strong_sum(m, init, t, mode)
    raise QueryError(f"Unknown function {function!r}; expected sum or max")
