"""
Eventually synchronizing subroutines.

Sure eventually synchronizing (plain and with a support constraint),
almost-sure eventually synchronizing into a periodic predecessor cycle,
and limit-sure eventually synchronizing with exact support. The weak
deciders are built on top of these.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..mdp import (
    Dist,
    InconclusiveError,
    Mdp,
    PredecessorSequence,
    ProductMdp,
    QueryError,
    RegionResult,
    StateSet,
    almost_reach,
    embed_initial,
    pre_seq,
    pre_set,
    product_counter,
)
from ..utils.settings import Limits
from .strategy import Transducer, closing_action

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairSequence:
    """
    (Pre^i(T), Pre^i(U)) for i = 0, 1, ... up to the first repeated pair.

    pairs[entry + period] == pairs[entry].
    """
    pairs: Tuple[Tuple[StateSet, StateSet], ...]
    entry: int
    period: int

    def at(self, n: int) -> Tuple[StateSet, StateSet]:
        if n < len(self.pairs):
            return self.pairs[n]
        return self.pairs[self.entry + (n - self.entry) % self.period]

    @property
    def distinct(self) -> Tuple[Tuple[StateSet, StateSet], ...]:
        return self.pairs[:self.entry + self.period]

    @property
    def aligned_index(self) -> int:
        """Smallest index >= entry that is a multiple of the period."""
        remainder = self.entry % self.period
        return self.entry if remainder == 0 else self.entry + self.period - remainder

    def orbit(self) -> Tuple[List[StateSet], List[StateSet]]:
        """
        The periodic part laid out by counter value.

        Returns:
            (rseq, zseq) with rseq[i] the T-component and zseq[i] the
            U-component at index aligned_index + i
        """
        base = self.aligned_index
        rseq = [self.at(base + i)[0] for i in range(self.period)]
        zseq = [self.at(base + i)[1] for i in range(self.period)]
        return rseq, zseq


@dataclass(frozen=True)
class ShiftInfo:
    period: int
    shift: int

    def __post_init__(self):
        if not 0 <= self.shift < self.period:
            raise QueryError(f"Shift {self.shift} outside 0..{self.period - 1}")


@dataclass(frozen=True)
class SureEventResult:
    """Verdict of a sure eventually synchronizing check; k is the least witness index."""
    holds: bool
    k: Optional[int]
    sequence: object

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class PeriodicResult:
    """Per-shift verdicts for almost-sure synchronization into a Pre-cycle."""
    holds: bool
    shift: Optional[ShiftInfo]
    by_shift: Tuple[bool, ...]
    product: ProductMdp = field(repr=False)
    region: RegionResult = field(repr=False)

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class LimitEventResult:
    """
    Verdict of limit-sure eventually synchronizing with exact support.

    `kind` is "sure" (mass 1 in T after k steps) or "periodic" (mass
    arbitrarily close to 1 in the periodic T-cycle, entered with `shift`).
    All state indices refer to `embedded`, whose fresh state `start`
    carries the initial distribution.
    """
    holds: bool
    kind: Optional[str]
    k: Optional[int]
    shift: Optional[ShiftInfo]
    sequence: PairSequence = field(repr=False)
    embedded: Mdp = field(repr=False)
    start: int
    periodic: Optional[PeriodicResult] = field(default=None, repr=False)

    def __bool__(self) -> bool:
        return self.holds


def pair_seq(m: Mdp, t: StateSet, u: StateSet, cap: Optional[int] = None) -> PairSequence:
    """
    Iterate pre_set on both components until a pair repeats.

    Raises:
        InconclusiveError: If `cap` distinct pairs are explored without a repeat
    """
    seen: Dict[Tuple[int, int], int] = {(t.bits, u.bits): 0}
    pairs = [(t, u)]
    while True:
        cur_t, cur_u = pairs[-1]
        nxt = (pre_set(m, cur_t), pre_set(m, cur_u))
        key = (nxt[0].bits, nxt[1].bits)
        if key in seen:
            entry = seen[key]
            pairs.append(nxt)
            period = len(pairs) - 1 - entry
            logger.debug(f"pair_seq: entry={entry}, period={period}")
            return PairSequence(tuple(pairs), entry, period)
        if cap is not None and len(pairs) >= cap:
            logger.warning(f"pair_seq gave up after {cap} distinct pairs")
            raise InconclusiveError('sequence_cap', cap, "pair sequence did not repeat")
        seen[key] = len(pairs)
        pairs.append(nxt)


def decide_sure_event(
    m: Mdp,
    q0: int,
    t: StateSet,
    limits: Optional[Limits] = None
) -> SureEventResult:
    """
    Sure eventually synchronizing from q0 into t: q0 in Pre^k(t) for some k.

    Only one preperiod plus one period of the sequence needs checking.
    """
    limits = limits or Limits()
    seq = pre_seq(m, t, cap=limits.sequence_cap)
    k = seq.first_index_containing(q0)
    logger.debug(f"decide_sure_event from {m.states[q0]}: k={k}")
    return SureEventResult(k is not None, k, seq)


def decide_sure_event_support(
    m: Mdp,
    q0: int,
    t: StateSet,
    u: StateSet,
    limits: Optional[Limits] = None
) -> SureEventResult:
    """
    Sure eventually synchronizing into t while the support stays inside u.

    Raises:
        QueryError: If t is not a subset of u
    """
    if not t <= u:
        raise QueryError("Target set must be a subset of the support set")
    limits = limits or Limits()
    seq = pair_seq(m, t, u, cap=limits.sequence_cap)
    k = next((i for i, (ti, ui) in enumerate(seq.distinct) if q0 in ti and q0 in ui), None)
    return SureEventResult(k is not None, k, seq)


def _check_pre_cycle(m: Mdp, layers: Sequence[StateSet], label: str) -> None:
    r = len(layers)
    if r < 1:
        raise QueryError(f"Empty {label} cycle")
    for i, layer in enumerate(layers):
        if pre_set(m, layer) != layers[(i + 1) % r]:
            raise QueryError(f"{label} layers {i} and {(i + 1) % r} do not form a Pre-cycle")


def decide_almost_event_periodic(
    m: Mdp,
    q0: int,
    rseq: Sequence[StateSet],
    within: Optional[Sequence[StateSet]] = None
) -> PeriodicResult:
    """
    Almost-sure eventually synchronizing into the Pre-cycle rseq, per shift.

    Builds the counter product M x [r] and the layered target
    W = {<q, i> | q in rseq[i]}; shift h succeeds when <q0, h> is almost-sure
    winning for reaching W. W is closed under its own safe actions, so once
    mass enters it, it is found in rseq[0] whenever the counter is 0.

    Args:
        m: The MDP
        q0: Start state
        rseq: r sets with rseq[(i+1) mod r] == pre_set(rseq[i])
        within: Optional Pre-cycle of the same length; product states outside
            its layers are never visited

    Raises:
        QueryError: If rseq or within is not a Pre-cycle
    """
    _check_pre_cycle(m, rseq, "target")
    r = len(rseq)
    product = product_counter(m, r)
    allowed = None
    if within is not None:
        if len(within) != r:
            raise QueryError(f"Support cycle has {len(within)} layers, expected {r}")
        _check_pre_cycle(m, within, "support")
        allowed = product.layered(list(within))
    region = almost_reach(product, product.layered(list(rseq)), within=allowed)
    by_shift = tuple(product.index(q0, h) in region for h in range(r))
    shift = next((ShiftInfo(r, h) for h, ok in enumerate(by_shift) if ok), None)
    logger.debug(f"decide_almost_event_periodic r={r}: shifts {by_shift}")
    return PeriodicResult(shift is not None, shift, by_shift, product, region)


def decide_limit_event_support(
    m: Mdp,
    d: Dist,
    t: StateSet,
    u: StateSet,
    limits: Optional[Limits] = None
) -> LimitEventResult:
    """
    Limit-sure eventually synchronizing into t with support inside u.

    Only the support of `d` is used: the uniform distribution over it is
    embedded as a fresh start state. The answer is yes if the start is sure
    winning for some pair index, or almost-sure winning for the periodic
    T-cycle while staying inside the matching U-cycle.

    Raises:
        QueryError: If t is not a subset of u
    """
    if not t <= u:
        raise QueryError("Target set must be a subset of the support set")
    limits = limits or Limits()
    embedded, start = embed_initial(m, Dist.uniform(d))
    size = embedded.num_states
    t_ext, u_ext = StateSet(t.bits, size), StateSet(u.bits, size)
    seq = pair_seq(embedded, t_ext, u_ext, cap=limits.sequence_cap)

    k = next((i for i, (ti, _) in enumerate(seq.distinct) if start in ti), None)
    if k is not None:
        logger.debug(f"decide_limit_event_support: sure after {k} steps")
        return LimitEventResult(True, "sure", k, None, seq, embedded, start)

    rseq, zseq = seq.orbit()
    if any(layer.is_empty() for layer in rseq):
        return LimitEventResult(False, None, None, None, seq, embedded, start)
    periodic = decide_almost_event_periodic(embedded, start, rseq, within=zseq)
    kind = "periodic" if periodic.holds else None
    logger.debug(f"decide_limit_event_support: periodic={periodic.holds}")
    return LimitEventResult(periodic.holds, kind, None, periodic.shift, seq,
                            embedded, start, periodic)


def synth_sure_event(m: Mdp, q0: int, t: StateSet, k: int) -> Transducer:
    """
    Countdown transducer bringing all mass into t after exactly k steps.

    Mode j means j steps remain; a state in Pre^j(t) plays the lowest action
    whose support lies in Pre^(j-1)(t). Mode 0 is absorbing and plays the
    lowest action.
    """
    layers = [t]
    for _ in range(k):
        layers.append(pre_set(m, layers[-1]))

    def choose(mode: int, q: int) -> int:
        if mode == 0:
            return 0
        return closing_action(m, q, layers[mode - 1])

    return Transducer.explore(m, k, [q0], choose, lambda mode, a, s: max(mode - 1, 0))
