"""
Exact symbolic-outcome simulator.

run_trace pushes the initial distribution through the MDP under a strategy,
keeping exact Fractions over (state, memory) pairs. check_sync reads a
finite trace against an objective; such verdicts are always empirical.
"""
import logging
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Dict, Hashable, List, Optional, Tuple

from ..mdp import Dist, Mdp, QueryError, StateSet
from ..sync.strategy import Strategy

logger = logging.getLogger(__name__)

KINDS = ("event", "weak", "strong")

Joint = Tuple[Tuple[Tuple[int, Hashable], Fraction], ...]


def decimal_text(p: Fraction, precision: int) -> str:
    """Render an exact rational as a rounded decimal string."""
    with localcontext() as ctx:
        ctx.prec = precision + 30
        value = Decimal(p.numerator) / Decimal(p.denominator)
        return str(value.quantize(Decimal(1).scaleb(-precision)))


@dataclass
class Trace:
    """
    Symbolic outcome prefix d_0 .. d_horizon.

    Attributes:
        mdp: The simulated model
        dists: State marginals per step
        joint: Exact (state, memory) distributions per step
    """
    mdp: Mdp
    dists: List[Dist] = field(default_factory=list)
    joint: List[Joint] = field(default_factory=list, repr=False)

    @property
    def horizon(self) -> int:
        return len(self.dists) - 1

    def sum_t(self, t: StateSet) -> List[Fraction]:
        return [d.mass(t) for d in self.dists]

    def max_t(self, t: StateSet) -> List[Fraction]:
        return [d.max_mass(t) for d in self.dists]

    def readings(self, t: StateSet, function: str) -> List[Fraction]:
        if function == "sum":
            return self.sum_t(t)
        if function == "max":
            return self.max_t(t)
        raise QueryError(f"Unknown function {function!r}; expected sum or max")

    def detect_period(self) -> Optional[Tuple[int, int]]:
        """(first index, period) of the first repeated joint distribution, if any."""
        seen: Dict[Joint, int] = {}
        for i, key in enumerate(self.joint):
            if key in seen:
                return seen[key], i - seen[key]
            seen[key] = i
        return None

    def csv_text(self, t: StateSet, precision: int = 6) -> str:
        """Per-state decimals plus sum_T/max_T as decimals and as exact rationals."""
        sums, maxes = self.sum_t(t), self.max_t(t)
        header = ["step", *self.mdp.states, "sum_T", "max_T", "sum_T_exact", "max_T_exact"]
        lines = [",".join(header)]
        for k, d in enumerate(self.dists):
            cells = [str(k)]
            cells += [decimal_text(d[q], precision) for q in range(self.mdp.num_states)]
            cells += [decimal_text(sums[k], precision), decimal_text(maxes[k], precision),
                      str(sums[k]), str(maxes[k])]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def to_csv(self, path: Path, t: StateSet, precision: int = 6) -> None:
        """Export the trace to CSV."""
        with open(path, 'w') as f:
            f.write(self.csv_text(t, precision))
        logger.info(f"Trace saved to: {path}")

    def summary(self, t: StateSet, precision: int = 6) -> str:
        sums, maxes = self.sum_t(t), self.max_t(t)
        best = max(range(len(sums)), key=lambda k: sums[k])
        lines = [
            "=" * 50,
            f"TRACE: {self.horizon} steps, target {self.mdp.names(t)}",
            "=" * 50,
            f"sum_T at step 0: {decimal_text(sums[0], precision)}",
            f"sum_T at last step: {decimal_text(sums[-1], precision)} ({sums[-1]})",
            f"max_T at last step: {decimal_text(maxes[-1], precision)} ({maxes[-1]})",
            f"Best sum_T: {decimal_text(sums[best], precision)} at step {best}",
            f"Steps with sum_T = 1: {[k for k, s in enumerate(sums) if s == 1]}",
        ]
        period = self.detect_period()
        if period:
            lines.append(f"Joint distribution periodic from step {period[0]} with period {period[1]}")
        lines.append("=" * 50)
        return "\n".join(lines)


def run_trace(m: Mdp, strategy: Strategy, d0: Dist, horizon: int) -> Trace:
    """
    Exact distribution sequence under `strategy` for `horizon` steps.

    Raises:
        QueryError: If horizon is negative
        StrategyError: If the strategy has no move at a reached pair
    """
    if horizon < 0:
        raise QueryError(f"Horizon must be non-negative, got {horizon}")
    memory0 = strategy.initial_memory()
    current: Dict[Tuple[int, Hashable], Fraction] = {(q, memory0): p for q, p in d0.items()}
    trace = Trace(m)
    for step in range(horizon + 1):
        marginal: Dict[int, Fraction] = {}
        for (q, _), p in current.items():
            marginal[q] = marginal.get(q, Fraction(0)) + p
        trace.dists.append(Dist(marginal))
        trace.joint.append(tuple(sorted(current.items(), key=lambda kv: (kv[0][0], repr(kv[0][1])))))
        if step == horizon:
            break
        following: Dict[Tuple[int, Hashable], Fraction] = {}
        for (q, memory), p in current.items():
            action = strategy.move(memory, step, q)
            for s, ps in m.delta[q][action].items():
                key = (s, strategy.update(memory, step, action, s))
                following[key] = following.get(key, Fraction(0)) + p * ps
        current = following
    logger.debug(f"run_trace: {horizon} steps, final support {sorted(trace.dists[-1])}")
    return trace


@dataclass(frozen=True)
class SyncReport:
    """Finite-horizon reading of an objective; never a proof."""
    kind: str
    function: str
    threshold: Fraction
    satisfied: bool
    indices: Tuple[int, ...]
    stable_from: Optional[int] = None
    label: str = "empirical"

    def __bool__(self) -> bool:
        return self.satisfied

    def summary(self) -> str:
        verdict = "satisfied" if self.satisfied else "not satisfied"
        shown = list(self.indices[:20])
        more = "" if len(self.indices) <= 20 else f" (+{len(self.indices) - 20} more)"
        lines = [f"{self.kind}/{self.function} p={self.threshold}: {verdict} ({self.label})",
                 f"  synchronized at steps {shown}{more}"]
        if self.stable_from is not None:
            lines.append(f"  synchronized at every step from {self.stable_from}")
        return "\n".join(lines)


def check_sync(
    trace: Trace,
    t: StateSet,
    function: str,
    kind: str,
    p: Fraction,
    weak_hits: int = 3
) -> SyncReport:
    """
    Read `trace` against an objective with threshold `p`.

    event: some step is p-synchronized. weak: at least `weak_hits`
    p-synchronized steps with the last one in the second half of the trace.
    strong: a p-synchronized suffix starting no later than mid-trace.
    """
    if kind not in KINDS:
        raise QueryError(f"Unknown objective {kind!r}; expected one of {', '.join(KINDS)}")
    readings = trace.readings(t, function)
    hits = tuple(k for k, value in enumerate(readings) if value >= p)
    middle = trace.horizon // 2
    stable_from = None
    if kind == "strong":
        for k in range(len(readings) - 1, -1, -1):
            if readings[k] < p:
                break
            stable_from = k
        satisfied = stable_from is not None and stable_from <= middle
    elif kind == "weak":
        satisfied = len(hits) >= weak_hits and hits[-1] >= middle
    else:
        satisfied = bool(hits)
    report = SyncReport(kind, function, Fraction(p), satisfied, hits, stable_from)
    logger.debug(f"check_sync: {report.summary()}")
    return report
