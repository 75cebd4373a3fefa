"""
Query model and dispatcher.

A QuerySpec names the objective (event, weak, strong), the function (sum,
max), the winning mode (sure, almost, limit), the target states and the
initial distribution. `solve` routes it to the matching decider and packs
the answer with a JSON-ready witness and a strategy runnable on the source
model.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple

from ..mdp import Dist, InconclusiveError, Mdp, QueryError, StateSet, embed_initial, to_fraction
from ..utils.settings import Limits
from .event import decide_limit_event_support, decide_sure_event, synth_sure_event
from .strategy import Strategy, Transducer
from .strong import decide_strong
from .weak import decide_almost_weak, decide_sure_weak, synth_almost_weak, synth_sure_weak, weak_max_to_sum

logger = logging.getLogger(__name__)

OBJECTIVES = ("event", "weak", "strong")
FUNCTIONS = ("sum", "max")
MODES = ("sure", "almost", "limit")

# Schedule phases recorded in almost-sure and limit-sure weak witnesses.
WITNESS_PHASES = 10


class Answer(str, Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class QuerySpec:
    """
    Attributes:
        objective: event, weak or strong
        mode: sure, almost or limit
        function: sum or max
        target: Target state names
        init: (state name, probability text) pairs
    """
    objective: str
    mode: str
    function: str
    target: Tuple[str, ...]
    init: Tuple[Tuple[str, str], ...]

    def __post_init__(self):
        for value, allowed, what in ((self.objective, OBJECTIVES, "objective"),
                                     (self.mode, MODES, "mode"),
                                     (self.function, FUNCTIONS, "function")):
            if value not in allowed:
                raise QueryError(f"Unknown {what} {value!r}; expected one of {', '.join(allowed)}")
        if not self.init:
            raise QueryError("Initial distribution is empty")

    @classmethod
    def parse(cls, objective: str, mode: str, function: str, target: str, init: str) -> 'QuerySpec':
        """
        Build from CLI-style strings.

        Args:
            target: Comma-separated state names (may be empty)
            init: A state name, or comma-separated name:probability pairs
        """
        names = tuple(n.strip() for n in target.split(",") if n.strip())
        entries: List[Tuple[str, str]] = []
        for part in init.split(","):
            part = part.strip()
            if not part:
                continue
            if ":" in part:
                name, prob = part.split(":", 1)
                entries.append((name.strip(), prob.strip()))
            else:
                entries.append((part, "1"))
        return cls(objective, mode, function, names, tuple(entries))

    def resolve(self, m: Mdp) -> Tuple[StateSet, Dist]:
        """
        Raises:
            ModelError: On unknown names or an initial distribution not summing to 1
        """
        target = m.state_set(self.target)
        d0 = Dist({m.state_index(name): to_fraction(p) for name, p in self.init})
        return target, d0

    def to_json(self) -> Dict[str, Any]:
        return {
            'objective': self.objective,
            'mode': self.mode,
            'function': self.function,
            'target': list(self.target),
            'init': {name: p for name, p in self.init},
        }


@dataclass
class Verdict:
    query: Optional[QuerySpec]
    answer: Answer
    witness: Dict[str, Any] = field(default_factory=dict)
    strategy: Optional[Strategy] = field(default=None, repr=False)
    explored: int = 0
    detail: Optional[str] = None

    @property
    def holds(self) -> bool:
        return self.answer is Answer.YES

    def to_json(self, elapsed_ms: Optional[float] = None) -> Dict[str, Any]:
        data = {
            'schema': 1,
            'query': self.query.to_json() if self.query else None,
            'verdict': self.answer.value,
            'witness': self.witness,
            'stats': {'explored': self.explored},
        }
        if elapsed_ms is not None:
            data['stats']['time_ms'] = round(elapsed_ms, 3)
        if self.detail:
            data['detail'] = self.detail
        return data


@dataclass(frozen=True)
class _Start:
    """Dirac start on the source model, or a fresh state carrying d0."""
    arena: Mdp
    state: int
    embedded: bool

    def project(self, m: Mdp, transducer: Transducer) -> Transducer:
        if not self.embedded:
            return transducer
        origin = list(range(m.num_states)) + [None]
        return transducer.project(self.arena, origin, entry=self.state)

    def lift(self, t: StateSet) -> StateSet:
        return StateSet(t.bits, self.arena.num_states)


def _start(m: Mdp, d0: Dist) -> _Start:
    if d0.is_dirac:
        (q0,) = tuple(d0)
        return _Start(m, q0, False)
    arena, fresh = embed_initial(m, d0)
    return _Start(arena, fresh, True)


def _names(m: Mdp, states) -> List[str]:
    return [m.states[q] for q in states]


def _event(m: Mdp, d0: Dist, t: StateSet, mode: str, limits: Limits) -> Verdict:
    if mode == "almost":
        raise QueryError("Almost-sure eventually synchronizing is not supported; "
                         "use mode sure or limit")
    if mode == "limit":
        result = decide_limit_event_support(m, d0, t, m.full_set(), limits)
        if not result.holds:
            return Verdict(None, Answer.NO, explored=len(result.sequence.distinct))
        witness = {'kind': 'limit_event', 'via': result.kind}
        if result.kind == "sure":
            witness['k'] = result.k - 1
        else:
            witness.update(period=result.shift.period, shift=result.shift.shift)
        return Verdict(None, Answer.YES, witness, explored=len(result.sequence.distinct))

    start = _start(m, d0)
    result = decide_sure_event(start.arena, start.state, start.lift(t), limits)
    if not result.holds:
        return Verdict(None, Answer.NO, explored=len(result.sequence.distinct))
    k = result.k - 1 if start.embedded else result.k
    transducer = start.project(m, synth_sure_event(start.arena, start.state, start.lift(t), result.k))
    witness = {'kind': 'steps', 'k': k, 'transducer': transducer.to_json(m)}
    return Verdict(None, Answer.YES, witness, transducer, explored=len(result.sequence.distinct))


def _weak(m: Mdp, d0: Dist, t: StateSet, mode: str, limits: Limits) -> Verdict:
    if mode == "sure":
        start = _start(m, d0)
        result = decide_sure_weak(start.arena, start.state, start.lift(t), limits)
        if not result.holds:
            return Verdict(None, Answer.NO)
        cert = result.certificate
        transducer = start.project(m, synth_sure_weak(cert, start.arena, start.state))
        steps = cert.m - 1 if start.embedded else cert.m
        witness = {
            'kind': 'certificate',
            'S': _names(start.arena, cert.s),
            'm': steps,
            'n': cert.n,
            'transducer': transducer.to_json(m),
        }
        return Verdict(None, Answer.YES, witness, transducer)

    result = decide_almost_weak(m, d0, t, limits)
    if not result.holds:
        return Verdict(None, Answer.NO, explored=result.explored)
    limit = result.limit
    phase = {'via': limit.kind}
    if limit.kind == "sure":
        phase['k'] = limit.k
    else:
        phase.update(period=limit.shift.period, shift=limit.shift.shift)
    witness = {
        'kind': 'witness_support',
        'U': _names(m, result.witness),
        'entry_steps': result.entry.k - 1,
        'phase': phase,
    }
    schedule = synth_almost_weak(result, m, d0, t, limits)
    witness['schedule'] = schedule.to_json(WITNESS_PHASES)
    return Verdict(None, Answer.YES, witness, schedule, explored=result.explored)


def _strong(m: Mdp, d0: Dist, t: StateSet, function: str, mode: str, limits: Limits) -> Verdict:
    result = decide_strong(m, d0, t, function, mode)
    if function == "max":
        if not result.holds:
            return Verdict(None, Answer.NO, explored=result.cycles_checked)
        cycle = result.cycle
        witness = {
            'kind': 'cycle',
            'states': _names(m, cycle.states),
            'actions': [m.actions[a] for a in cycle.actions],
            'shift': result.shift,
            'transducer': result.strategy.to_json(m),
        }
        return Verdict(None, Answer.YES, witness, result.strategy, explored=result.cycles_checked)
    if not result.holds:
        return Verdict(None, Answer.NO, {'safety_region': _names(m, result.safe_region)})
    witness = {
        'kind': 'safety_region',
        'S': _names(m, result.safe_region),
        'transducer': result.strategy.to_json(m),
    }
    return Verdict(None, Answer.YES, witness, result.strategy)


def _disjunction(m: Mdp, t: StateSet, decide: Callable[[StateSet], Verdict]) -> Verdict:
    """max_T for event and weak objectives: some singleton of t works for sum."""
    explored = 0
    for single in weak_max_to_sum(m, t):
        verdict = decide(single)
        explored += verdict.explored
        if verdict.holds:
            verdict.witness = dict(verdict.witness, state=m.states[next(iter(single))])
            verdict.explored = explored
            return verdict
    return Verdict(None, Answer.NO, explored=explored)


def solve(m: Mdp, spec: QuerySpec, limits: Optional[Limits] = None) -> Verdict:
    """
    Decide a query on `m`.

    Inconclusive caps yield an INCONCLUSIVE verdict; malformed or
    unsupported queries raise.

    Raises:
        QueryError: On unsupported or malformed queries
        ModelError: On names the model does not know
    """
    limits = limits or Limits()
    t, d0 = spec.resolve(m)
    logger.info(f"solve: {spec.objective}/{spec.function}/{spec.mode} "
                f"target={list(spec.target)} on {m.summary()}")
    try:
        if spec.objective == "strong":
            verdict = _strong(m, d0, t, spec.function, spec.mode, limits)
        else:
            run = _event if spec.objective == "event" else _weak
            if spec.function == "max":
                verdict = _disjunction(m, t, lambda single: run(m, d0, single, spec.mode, limits))
            else:
                verdict = run(m, d0, t, spec.mode, limits)
    except InconclusiveError as e:
        logger.warning(f"solve: inconclusive ({e})")
        verdict = Verdict(None, Answer.INCONCLUSIVE, {'cap': e.cap_name, 'value': e.cap_value},
                          detail=str(e))
    verdict.query = spec
    logger.info(f"solve: verdict {verdict.answer.value}")
    return verdict
