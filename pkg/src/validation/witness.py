"""
Re-verification of saved verdicts.

Structural parts of a witness (certificates, cycles, safety regions,
supports) are rechecked with pre_set, delta and almost_reach only, never
with the deciders that produced them; strategies and recorded schedules
are replayed with the exact simulator.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from ..mdp import (
    Dist,
    InconclusiveError,
    Mdp,
    QueryError,
    StateSet,
    StrategyError,
    almost_reach,
    embed_initial,
    pre_power,
    pre_set,
    product_counter,
)
from ..sync import QuerySpec, Transducer
from ..sync.strategy import Strategy
from ..utils.settings import Limits, SimulationSettings
from .simulate import SyncReport, check_sync, run_trace

logger = logging.getLogger(__name__)


@dataclass
class WitnessCheck:
    """Outcome of verify_witness; `ok` is False as soon as one check fails."""
    kind: Optional[str]
    passed: List[str] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)
    empirical: List[SyncReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def expect(self, condition: bool, message: str) -> bool:
        (self.passed if condition else self.failures).append(message)
        if not condition:
            logger.warning(f"verify_witness: failed: {message}")
        return condition

    def summary(self) -> str:
        lines = [f"witness {self.kind or '-'}: {'OK' if self.ok else 'FAILED'}"]
        lines += [f"  ok   {msg}" for msg in self.passed]
        lines += [f"  FAIL {msg}" for msg in self.failures]
        lines += [f"  {report.summary()}" for report in self.empirical]
        return "\n".join(lines)


def _spec_from_json(data: Dict[str, Any]) -> QuerySpec:
    query = data.get('query')
    if not query:
        raise QueryError("Verdict carries no query")
    init = tuple((name, str(p)) for name, p in query['init'].items())
    return QuerySpec(query['objective'], query['mode'], query['function'],
                     tuple(query['target']), init)


def _states(m: Mdp, names) -> StateSet:
    return m.state_set(names)


def _mass_at(check: WitnessCheck, m: Mdp, transducer: Transducer, d0: Dist, t: StateSet,
             steps: List[int], function: str = "sum") -> None:
    trace = run_trace(m, transducer, d0, max(steps))
    readings = trace.readings(t, function)
    for k in steps:
        check.expect(readings[k] == 1, f"strategy puts mass 1 in target at step {k} (got {readings[k]})")


def _stable_from(check: WitnessCheck, m: Mdp, transducer: Transducer, d0: Dist, t: StateSet,
                 start: int, function: str, mode: str, sim: SimulationSettings) -> None:
    horizon = max(start + 2 * m.num_states, sim.horizon if mode == "sure" else sim.witness_horizon)
    trace = run_trace(m, transducer, d0, horizon)
    if mode == "sure":
        readings = trace.readings(t, function)
        bad = [k for k in range(start, horizon + 1) if readings[k] != 1]
        check.expect(not bad, f"strategy keeps mass 1 in target from step {start} to {horizon}")
    else:
        check.empirical.append(check_sync(trace, t, function, "strong",
                                          1 - sim.almost_tolerance, sim.weak_hits))


def _check_steps(check, m, spec, d0, t, witness) -> None:
    k = int(witness['k'])
    start = d0.support(m.num_states)
    check.expect(start <= pre_power(m, t, k), f"initial support inside Pre^{k}(T)")
    transducer = Transducer.from_json(witness['transducer'], m)
    _mass_at(check, m, transducer, d0, t, [k])


def _check_certificate(check, m, spec, d0, t, witness) -> None:
    s = _states(m, witness['S'])
    steps, n = int(witness['m']), int(witness['n'])
    check.expect(not s.is_empty() and s <= t, "S is a non-empty subset of T")
    check.expect(s <= pre_power(m, s, n), f"S inside Pre^{n}(S)")
    check.expect(d0.support(m.num_states) <= pre_power(m, s, steps),
                 f"initial support inside Pre^{steps}(S)")
    transducer = Transducer.from_json(witness['transducer'], m)
    _mass_at(check, m, transducer, d0, t, [steps, steps + n, steps + 2 * n])


def _check_cycle(check, m, spec, d0, t, witness, sim) -> None:
    states = [m.state_index(q) for q in witness['states']]
    actions = [m.action_index(a) for a in witness['actions']]
    check.expect(len(states) == len(actions) + 1 and states[0] == states[-1],
                 "cycle closes on its first state")
    for q, a, nxt in zip(states, actions, states[1:]):
        dist = m.delta[q][a]
        check.expect(dist.is_dirac and dist[nxt] == 1,
                     f"{m.states[q]} -{m.actions[a]}-> {m.states[nxt]} is deterministic")
    check.expect(all(q in t for q in states), "cycle stays inside T")
    transducer = Transducer.from_json(witness['transducer'], m)
    length = max(len(actions), 1)
    _stable_from(check, m, transducer, d0, t, (2 * m.num_states + 1) * length, "max", spec.mode, sim)


def _check_safety(check, m, spec, d0, t, witness, sim) -> None:
    s = _states(m, witness['S'])
    check.expect(s <= t & pre_set(m, s), "S inside T and Pre(S)")
    transducer = Transducer.from_json(witness['transducer'], m)
    _stable_from(check, m, transducer, d0, t, m.num_states, "sum", spec.mode, sim)


class RecordedSchedule(Strategy):
    """Replays the per-step moves stored in a witness; the step index selects the row."""

    def __init__(self, m: Mdp, moves: List[Dict[str, str]]):
        self._moves = [{m.state_index(q): m.action_index(a) for q, a in step.items()}
                       for step in moves]

    def initial_memory(self) -> None:
        return None

    def move(self, memory, step: int, state: int) -> int:
        try:
            return self._moves[step][state]
        except (IndexError, KeyError):
            raise StrategyError(f"Recorded schedule has no move for state {state} at step {step}") from None

    def update(self, memory, step: int, action: int, state: int) -> None:
        return None


def _pair_orbit(m: Mdp, t: StateSet, u: StateSet, cap: int) -> Tuple[List[StateSet], List[StateSet]]:
    """T- and U-layers of the periodic part of (Pre^i(t), Pre^i(u)), counter-aligned."""
    pairs = [(t, u)]
    seen = {(t.bits, u.bits): 0}
    while True:
        cur_t, cur_u = pairs[-1]
        nxt = (pre_set(m, cur_t), pre_set(m, cur_u))
        key = (nxt[0].bits, nxt[1].bits)
        if key in seen:
            break
        if len(pairs) >= cap:
            raise InconclusiveError('sequence_cap', cap, "pair sequence did not repeat")
        seen[key] = len(pairs)
        pairs.append(nxt)
    entry = seen[key]
    period = len(pairs) - entry
    aligned = entry + (-entry) % period
    at = [pairs[entry + (aligned + i - entry) % period] for i in range(period)]
    return [p[0] for p in at], [p[1] for p in at]


def _check_limit_phase(check: WitnessCheck, m: Mdp, u: StateSet, goal: StateSet,
                       phase: Dict[str, Any], limits: Limits) -> None:
    """From the uniform distribution on U, mass tends to 1 in Pre(goal) with support inside Pre(U)."""
    embedded, start = embed_initial(m, Dist.uniform(u))
    size = embedded.num_states
    t_ext = StateSet(pre_set(m, goal).bits, size)
    u_ext = StateSet(pre_set(m, u).bits, size)
    via = phase.get('via')
    if via == "sure":
        k = int(phase['k'])
        check.expect(start in pre_power(embedded, t_ext, k),
                     f"uniform start on U inside Pre^{k}(Pre(T & U))")
        return
    if via != "periodic":
        check.expect(False, f"phase plan via {via!r} is sure or periodic")
        return
    period, shift = int(phase['period']), int(phase['shift'])
    rseq, zseq = _pair_orbit(embedded, t_ext, u_ext, limits.sequence_cap)
    if not check.expect(len(rseq) == period, f"pair sequence has period {period} (found {len(rseq)})"):
        return
    if not check.expect(0 <= shift < period and all(not layer.is_empty() for layer in rseq),
                        "periodic target layers are non-empty and the shift is in range"):
        return
    product = product_counter(embedded, period)
    region = almost_reach(product, product.layered(rseq), within=product.layered(zseq))
    check.expect(product.index(start, shift) in region,
                 f"uniform start on U almost-surely reaches the periodic target with shift {shift}")


def _check_support(check, m, spec, d0, t, witness, limits) -> None:
    u = _states(m, witness['U'])
    entry_steps = int(witness['entry_steps'])
    check.expect(not (t & u).is_empty(), "U meets T")
    check.expect(d0.support(m.num_states) <= pre_power(m, u, entry_steps),
                 f"initial support inside Pre^{entry_steps}(U)")
    if check.failures:
        return
    _check_limit_phase(check, m, u, t & u, witness['phase'], limits)
    if check.failures:
        return

    plan = witness['schedule']
    marks = [(int(phase), int(step)) for phase, step in plan['marks']]
    check.expect(bool(marks) and [p for p, _ in marks] == list(range(1, len(marks) + 1))
                 and all(a[1] < b[1] for a, b in zip(marks, marks[1:])),
                 "phase plan numbers phases 1, 2, ... at increasing steps")
    if check.failures:
        return
    try:
        trace = run_trace(m, RecordedSchedule(m, plan['moves']), d0, max(entry_steps, marks[-1][1]))
    except StrategyError as e:
        check.expect(False, f"recorded moves replay: {e}")
        return
    check.expect(trace.dists[entry_steps].support(m.num_states) <= u,
                 f"support inside U at step {entry_steps}")
    sums = trace.sum_t(t)
    for phase, step in marks:
        bound = 1 - Fraction(1, 2 ** phase)
        check.expect(sums[step] >= bound, f"phase {phase}: sum_T at step {step} >= {bound}")
        check.expect(trace.dists[step].support(m.num_states) <= u,
                     f"phase {phase}: support back inside U at step {step}")


def verify_witness(
    m: Mdp,
    data: Dict[str, Any],
    limits: Optional[Limits] = None,
    simulation: Optional[SimulationSettings] = None
) -> WitnessCheck:
    """
    Recheck a verdict produced by `solve(...).to_json()` against `m`.

    No-verdicts and inconclusive verdicts carry nothing to verify and pass.

    Raises:
        QueryError: On a verdict without a query or with an unknown witness kind
        ModelError: On names the model does not know
    """
    limits = limits or Limits()
    sim = simulation or SimulationSettings()
    spec = _spec_from_json(data)
    witness = data.get('witness') or {}
    kind = witness.get('kind')
    check = WitnessCheck(kind)
    if data.get('verdict') != "yes":
        check.passed.append(f"verdict {data.get('verdict')}: nothing to verify")
        return check

    t, d0 = spec.resolve(m)
    if 'state' in witness:
        t = _states(m, [witness['state']])
        check.expect(witness['state'] in spec.target, "witness state belongs to the target")

    if kind == "steps":
        _check_steps(check, m, spec, d0, t, witness)
    elif kind == "limit_event":
        check.passed.append("limit eventually verdict: no strategy to replay")
    elif kind == "certificate":
        _check_certificate(check, m, spec, d0, t, witness)
    elif kind == "cycle":
        _check_cycle(check, m, spec, d0, t, witness, sim)
    elif kind == "safety_region":
        _check_safety(check, m, spec, d0, t, witness, sim)
    elif kind == "witness_support":
        _check_support(check, m, spec, d0, t, witness, limits)
    else:
        raise QueryError(f"Unknown witness kind {kind!r}")
    logger.info(f"verify_witness: {kind} {'ok' if check.ok else 'FAILED'} "
                f"({len(check.passed)} checks passed, {len(check.failures)} failed)")
    return check
