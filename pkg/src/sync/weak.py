"""
Weakly synchronizing objectives.

Sure mode is decided through an (S, m, n) certificate: S is inside the
target, S is contained in Pre^n(S) and the start is in Pre^m(S). Almost-sure
mode looks for a support set U that the start can be driven into surely and
from which mass close to 1 can be pushed into the target while the support
returns into U. Limit-sure mode is the same question.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Set

from ..mdp import (
    Dist,
    InconclusiveError,
    Mdp,
    PredecessorSequence,
    QueryError,
    StateSet,
    StrategyError,
    embed_initial,
    pre_seq,
    pre_set,
)
from ..utils.settings import Limits
from .event import LimitEventResult, SureEventResult, decide_limit_event_support, decide_sure_event
from .strategy import Strategy, Transducer, closing_action

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeakSureCertificate:
    """S inside T with S <= Pre^n(S) and q0 in Pre^m(S)."""
    s: StateSet
    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 1:
            raise QueryError(f"Invalid certificate steps m={self.m}, n={self.n}")

    def check(self, mdp: Mdp, q0: int, t: StateSet) -> bool:
        """Re-verify the three conditions with pre_set only."""
        if self.s.is_empty() or not self.s <= t:
            return False
        reach = self.s
        for _ in range(self.m):
            reach = pre_set(mdp, reach)
        back = self.s
        for _ in range(self.n):
            back = pre_set(mdp, back)
        return q0 in reach and self.s <= back

    @classmethod
    def checked(cls, mdp: Mdp, q0: int, t: StateSet, s: StateSet, m: int, n: int) -> 'WeakSureCertificate':
        """
        Raises:
            QueryError: If the certificate does not hold on `mdp`
        """
        cert = cls(s, m, n)
        if not cert.check(mdp, q0, t):
            raise QueryError(f"Certificate (S={sorted(s)}, m={m}, n={n}) does not hold")
        return cert


@dataclass(frozen=True)
class WeakSureResult:
    holds: bool
    certificate: Optional[WeakSureCertificate] = None
    universal: Optional[StateSet] = None

    def __bool__(self) -> bool:
        return self.holds


def _greatest_fixpoint(t: StateSet, step) -> StateSet:
    current = t
    while True:
        nxt = t & step(current)
        if nxt == current:
            return current
        current = nxt


def decide_sure_weak(
    mdp: Mdp,
    q0: int,
    t: StateSet,
    limits: Optional[Limits] = None
) -> WeakSureResult:
    """
    Sure weakly synchronizing from q0 into t.

    First computes S* = nu X. t & Pre^N(X) where N is a multiple of every
    possible period beyond every preperiod; every certificate set lies below
    S*, so q0 outside all Pre^m(S*) is an exact no. Otherwise periods
    n = 1, 2, ... are tried and the first n with q0 in some Pre^m(S_n),
    S_n = nu X. t & Pre^n(X), gives the least (n, m) certificate.

    Raises:
        InconclusiveError: If a predecessor sequence exceeds sequence_cap
    """
    limits = limits or Limits()
    cap = limits.sequence_cap

    def pre_universal(x: StateSet) -> StateSet:
        seq = pre_seq(mdp, x, cap=cap)
        return seq.sets[seq.aligned_index]

    universal = _greatest_fixpoint(t, pre_universal)
    if universal.is_empty():
        logger.debug("decide_sure_weak: no self-recurrent subset of the target")
        return WeakSureResult(False, None, universal)
    useq = pre_seq(mdp, universal, cap=cap)
    if useq.first_index_containing(q0) is None:
        logger.debug("decide_sure_weak: start never reaches the recurrent subset")
        return WeakSureResult(False, None, universal)

    fallback_n = next(j for j in range(1, len(useq.sets)) if universal <= useq.sets[j])
    for n in range(1, min(limits.max_period, fallback_n) + 1):
        s_n = _greatest_fixpoint(t, lambda x: pre_seq(mdp, x, cap=cap).at(n))
        if s_n.is_empty():
            continue
        m = pre_seq(mdp, s_n, cap=cap).first_index_containing(q0)
        if m is not None:
            cert = WeakSureCertificate.checked(mdp, q0, t, s_n, m, n)
            logger.debug(f"decide_sure_weak: certificate |S|={len(s_n)}, m={m}, n={n}")
            return WeakSureResult(True, cert, universal)

    m = useq.first_index_containing(q0)
    logger.info(f"decide_sure_weak: period search stopped at {limits.max_period}, "
                f"using the universal certificate with n={fallback_n}")
    cert = WeakSureCertificate.checked(mdp, q0, t, universal, m, fallback_n)
    return WeakSureResult(True, cert, universal)


def synth_sure_weak(cert: WeakSureCertificate, mdp: Mdp, q0: int) -> Transducer:
    """
    Countdown transducer for a sure weak certificate.

    Mode j means j + 1 steps remain until the next visit of S; a state plays
    the lowest action whose support lies in Pre^j(S). On landing in S the
    countdown restarts at n - 1.

    Raises:
        StrategyError: If a reachable (mode, state) pair has no closing action
    """
    depth = max(cert.m, cert.n)
    layers: List[StateSet] = [cert.s]
    for _ in range(depth - 1):
        layers.append(pre_set(mdp, layers[-1]))
    initial = cert.m - 1 if cert.m > 0 else cert.n - 1

    def choose(mode: int, q: int) -> int:
        return closing_action(mdp, q, layers[mode])

    def advance(mode: int, action: int, s: int) -> int:
        return mode - 1 if mode > 0 else cert.n - 1

    transducer = Transducer.explore(mdp, initial, [q0], choose, advance)
    logger.info(f"synth_sure_weak: {transducer.mode_count} modes")
    return transducer


@dataclass(frozen=True)
class AlmostWeakResult:
    """
    Verdict for almost-sure weak synchronization.

    `witness` is the support set U; `entry` is the sure eventually result
    into U from the embedded initial distribution and `limit` the limit-sure
    eventually result from the uniform distribution on U.
    """
    holds: bool
    witness: Optional[StateSet] = None
    entry: Optional[SureEventResult] = field(default=None, repr=False)
    limit: Optional[LimitEventResult] = field(default=None, repr=False)
    explored: int = 0

    def __bool__(self) -> bool:
        return self.holds


def _union_options(mdp: Mdp, q: int) -> Set[int]:
    """Masks obtainable as the union of posts over a non-empty action subset."""
    options: Set[int] = set()
    for mask in mdp.post_masks[q]:
        options |= {o | mask for o in options}
        options.add(mask)
    return options


def _support_successors(mdp: Mdp, bits: int, options: Dict[int, Set[int]], cap: int) -> Set[int]:
    acc = {0}
    for q in StateSet(bits, mdp.num_states):
        acc = {x | o for x in acc for o in options[q]}
        if len(acc) > cap:
            raise InconclusiveError('support_cap', cap, "too many successor supports")
    return acc


def candidate_supports(mdp: Mdp, d0: Dist, limits: Limits) -> Iterator[StateSet]:
    """
    Supports reachable under pure strategies, breadth first from support(d0),
    each layer by (cardinality, mask); then, on small models, every other
    subset by ascending cardinality.
    """
    n = mdp.num_states
    options = {q: _union_options(mdp, q) for q in range(n)}
    start = d0.support_bits
    seen = {start}
    layer = [start]
    while layer:
        layer.sort(key=lambda b: (bin(b).count("1"), b))
        nxt = []
        for bits in layer:
            yield StateSet(bits, n)
            for succ in _support_successors(mdp, bits, options, limits.support_cap):
                if succ not in seen:
                    seen.add(succ)
                    if len(seen) > limits.support_cap:
                        raise InconclusiveError('support_cap', limits.support_cap,
                                                "reachable supports")
                    nxt.append(succ)
        layer = nxt
    if n <= limits.full_enumeration_threshold:
        rest = sorted((b for b in range(1, 1 << n) if b not in seen),
                      key=lambda b: (bin(b).count("1"), b))
        for bits in rest:
            yield StateSet(bits, n)


def decide_almost_weak(
    mdp: Mdp,
    d0: Dist,
    t: StateSet,
    limits: Optional[Limits] = None
) -> AlmostWeakResult:
    """
    Almost-sure weak synchronization from d0 into t.

    Yes iff some U is (a) surely reached as a support superset from d0 and
    (b) from the uniform distribution on U, mass arbitrarily close to 1 can
    be brought into Pre(t & U) while the support stays inside Pre(U).

    Raises:
        InconclusiveError: If support_cap or sequence_cap is reached
    """
    limits = limits or Limits()
    embedded, start = embed_initial(mdp, d0)
    explored = 0
    for u in candidate_supports(mdp, d0, limits):
        explored += 1
        goal = t & u
        if goal.is_empty():
            continue
        entry = decide_sure_event(embedded, start, StateSet(u.bits, embedded.num_states), limits)
        if not entry.holds:
            continue
        limit = decide_limit_event_support(
            mdp, Dist.uniform(u), pre_set(mdp, goal), pre_set(mdp, u), limits)
        if limit.holds:
            logger.info(f"decide_almost_weak: witness U={mdp.names(u)} after {explored} candidates")
            return AlmostWeakResult(True, u, entry, limit, explored)
    logger.info(f"decide_almost_weak: no witness among {explored} candidates")
    return AlmostWeakResult(False, explored=explored)


decide_limit_weak = decide_almost_weak


@dataclass(frozen=True)
class PhaseMark:
    """End of phase i: sum_T at `step` is at least 1 - 2^-i."""
    phase: int
    step: int
    mass: Fraction


class ScheduleStrategy(Strategy):
    """
    Infinite-memory strategy for almost-sure weak synchronization.

    The strategy only depends on (step, state). It simulates its own exact
    distribution to decide when a phase may stop: phase 0 drives the support
    into U, phase i >= 1 pushes mass at least 1 - 2^-i into the target and
    ends with the support back inside U.
    """

    def __init__(self, mdp: Mdp, d0: Dist, t: StateSet, result: AlmostWeakResult,
                 limits: Optional[Limits] = None):
        if not result.holds:
            raise StrategyError("No almost-sure weak witness to build a schedule from")
        self.mdp = mdp
        self.t = t
        self.witness = result.witness
        self.limits = limits or Limits()
        self._entry = result.entry
        self._limit = result.limit
        self._goal = t & result.witness
        self._moves: List[Dict[int, int]] = []
        self._dist = d0
        self.marks: List[PhaseMark] = []
        self._planner = self._plan()

    def initial_memory(self) -> None:
        return None

    def move(self, memory, step: int, state: int) -> int:
        self._extend(step)
        try:
            return self._moves[step][state]
        except KeyError:
            raise StrategyError(f"State {state} unreachable at step {step}") from None

    def update(self, memory, step: int, action: int, state: int) -> None:
        return None

    def phase_marks(self, count: int) -> List[PhaseMark]:
        """First `count` phase ends, planning further ahead if needed."""
        while len(self.marks) < count:
            self._extend(len(self._moves))
        return self.marks[:count]

    def to_json(self, phases: int) -> Dict[str, Any]:
        """
        The first `phases` phase ends and every move played before the last one.

        moves[k] maps each state in the support at step k to its action.
        """
        marks = self.phase_marks(phases)
        names, actions = self.mdp.states, self.mdp.actions
        return {
            'marks': [[mark.phase, mark.step] for mark in marks],
            'moves': [{names[q]: actions[a] for q, a in sorted(moves.items())}
                      for moves in self._moves[:marks[-1].step]],
        }

    def _extend(self, step: int) -> None:
        while len(self._moves) <= step:
            moves = next(self._planner)
            self._moves.append(moves)
            self._dist = self._advance(moves)

    def _advance(self, moves: Dict[int, int]) -> Dist:
        nxt: Dict[int, Fraction] = {}
        for q, p in self._dist.items():
            for s, ps in self.mdp.delta[q][moves[q]].items():
                nxt[s] = nxt.get(s, Fraction(0)) + p * ps
        return Dist(nxt)

    def _closing(self, pick) -> Dict[int, int]:
        return {q: closing_action(self.mdp, q, pick(q)) for q in self._dist}

    def _plan(self) -> Iterator[Dict[int, int]]:
        useq: PredecessorSequence = self._entry.sequence
        remaining = self._entry.k - 1
        while remaining > 0:
            target = useq.at(remaining - 1)
            yield self._closing(lambda q: target)
            remaining -= 1

        phase = 0
        while True:
            phase += 1
            threshold = 1 - Fraction(1, 2 ** phase)
            if self._limit.kind == "sure":
                yield from self._countdown(self._limit.k - 1)
            else:
                yield from self._periodic(threshold)
            mass = self._dist.mass(self.t)
            self.marks.append(PhaseMark(phase, len(self._moves), mass))
            logger.debug(f"ScheduleStrategy: phase {phase} ends at step {len(self._moves)} "
                         f"with mass {mass}")

    def _countdown(self, remaining: int) -> Iterator[Dict[int, int]]:
        """Follow the pair sequence down to index 0, then one closing step."""
        seq = self._limit.sequence
        while remaining > 0:
            t_next, u_next = seq.at(remaining - 1)
            t_now = seq.at(remaining)[0]
            yield self._closing(lambda q: t_next if q in t_now else u_next)
            remaining -= 1
        t_now = seq.at(0)[0]
        yield self._closing(lambda q: self._goal if q in t_now else self.witness)

    def _periodic(self, threshold: Fraction) -> Iterator[Dict[int, int]]:
        periodic = self._limit.periodic
        product = periodic.product
        r = product.modulus
        rseq, _ = self._limit.sequence.orbit()
        counter = (self._limit.shift.shift - 1) % r
        waited = 0
        while True:
            in_w = sum((p for q, p in self._dist.items() if q in rseq[counter]), Fraction(0))
            if in_w >= threshold:
                break
            if waited >= self.limits.phase_step_cap:
                raise InconclusiveError('phase_step_cap', self.limits.phase_step_cap,
                                        "phase did not reach its threshold")
            keep = rseq[(counter - 1) % r]
            moves = {}
            for q in self._dist:
                if q in rseq[counter]:
                    moves[q] = closing_action(self.mdp, q, keep)
                else:
                    moves[q] = periodic.region.strategy[product.index(q, counter)]
            yield moves
            counter = (counter - 1) % r
            waited += 1
        yield from self._countdown(self._limit.sequence.aligned_index + counter)


def synth_almost_weak(
    result: AlmostWeakResult,
    mdp: Mdp,
    d0: Dist,
    t: StateSet,
    limits: Optional[Limits] = None
) -> ScheduleStrategy:
    return ScheduleStrategy(mdp, d0, t, result, limits)


def weak_max_to_sum(mdp: Mdp, t: StateSet) -> List[StateSet]:
    """
    Singleton targets whose sum verdicts decide a max_T query by disjunction.

    Raises:
        QueryError: If t is empty
    """
    if t.is_empty():
        raise QueryError("max_T needs a non-empty target set")
    return [StateSet.of(mdp.num_states, [q]) for q in t]
