"""
Strategy representations understood by the simulator.

A strategy is driven by a memory value: the simulator keeps a distribution
over (state, memory) pairs and asks the strategy for a move and a memory
update after every step.
"""
import logging
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from ..mdp import Mdp, StateSet, StrategyError

logger = logging.getLogger(__name__)


class Strategy(ABC):
    """Pure strategy with explicit memory."""

    @abstractmethod
    def initial_memory(self) -> Hashable:
        ...

    @abstractmethod
    def move(self, memory: Hashable, step: int, state: int) -> int:
        """Action played at `step` in `state`."""

    @abstractmethod
    def update(self, memory: Hashable, step: int, action: int, state: int) -> Hashable:
        """Memory after playing `action` at `step` and landing in `state`."""


@dataclass
class Transducer(Strategy):
    """
    Finite-memory strategy <Mem, m0, update, next-move>.

    Tables only cover (mode, state) pairs reachable from the initial support.
    """
    initial_mode: int
    next_move: Dict[Tuple[int, int], int] = field(default_factory=dict)
    updates: Dict[Tuple[int, int, int], int] = field(default_factory=dict)

    @property
    def modes(self) -> List[int]:
        found = {self.initial_mode}
        found.update(mode for mode, _ in self.next_move)
        found.update(self.updates.values())
        return sorted(found)

    @property
    def mode_count(self) -> int:
        return len(self.modes)

    def initial_memory(self) -> int:
        return self.initial_mode

    def move(self, memory: int, step: int, state: int) -> int:
        try:
            return self.next_move[(memory, state)]
        except KeyError:
            raise StrategyError(f"No move for mode {memory} in state {state}") from None

    def update(self, memory: int, step: int, action: int, state: int) -> int:
        try:
            return self.updates[(memory, action, state)]
        except KeyError:
            raise StrategyError(
                f"No update for mode {memory}, action {action}, state {state}") from None

    @classmethod
    def explore(
        cls,
        m,
        initial_mode: int,
        starts: Iterable[int],
        choose: Callable[[int, int], int],
        advance: Callable[[int, int, int], int]
    ) -> 'Transducer':
        """
        Tabulate a strategy over the (mode, state) pairs it can reach.

        Args:
            m: Arena exposing `successors`
            initial_mode: m0
            starts: Initial support
            choose: (mode, state) -> action; may raise StrategyError
            advance: (mode, action, successor) -> next mode
        """
        transducer = cls(initial_mode)
        queue = deque((initial_mode, q) for q in sorted(set(starts)))
        seen = set(queue)
        while queue:
            mode, q = queue.popleft()
            action = choose(mode, q)
            transducer.next_move[(mode, q)] = action
            for s in m.successors[q][action]:
                nxt = advance(mode, action, s)
                transducer.updates[(mode, action, s)] = nxt
                if (nxt, s) not in seen:
                    seen.add((nxt, s))
                    queue.append((nxt, s))
        logger.debug(f"Transducer with {transducer.mode_count} modes over "
                     f"{len(transducer.next_move)} (mode, state) pairs")
        return transducer

    def project(
        self,
        arena,
        origin: Sequence[Optional[int]],
        starts: Iterable[int] = (),
        entry: Optional[int] = None
    ) -> 'Transducer':
        """
        Re-express a transducer built on a transformed arena over the source model.

        Args:
            arena: The transformed model the transducer was built on
            origin: origin[x] is the source state of arena state x (None if fresh)
            starts: Initial arena support; ignored when `entry` is given
            entry: Fresh initial state consumed by one step before the source start

        Raises:
            StrategyError: If copies of one source state disagree, or the entry
                step does not lead to a single mode
        """
        mode = self.initial_mode
        starts = sorted(set(starts))
        if entry is not None:
            action = self.move(mode, 0, entry)
            landed = {self.update(mode, 0, action, s) for s in arena.successors[entry][action]}
            if len(landed) != 1:
                raise StrategyError(f"Entry step leads to modes {sorted(landed)}")
            mode = landed.pop()
            starts = list(arena.successors[entry][action])

        projected = Transducer(mode)
        queue = deque((mode, q) for q in starts)
        seen = set(queue)
        while queue:
            md, x = queue.popleft()
            source = origin[x]
            if source is None:
                raise StrategyError(f"Fresh state {x} reachable after the entry step")
            action = self.move(md, 0, x)
            known = projected.next_move.setdefault((md, source), action)
            if known != action:
                raise StrategyError(f"Copies of state {source} disagree in mode {md}")
            for s in arena.successors[x][action]:
                nxt = self.update(md, 0, action, s)
                key = (md, action, origin[s])
                if projected.updates.setdefault(key, nxt) != nxt:
                    raise StrategyError(f"Copies of state {origin[s]} disagree on the update")
                if (nxt, s) not in seen:
                    seen.add((nxt, s))
                    queue.append((nxt, s))
        return projected

    def to_json(self, m: Mdp) -> Dict[str, Any]:
        return {
            'initial_mode': self.initial_mode,
            'modes': self.mode_count,
            'next': [[mode, m.states[q], m.actions[a]]
                     for (mode, q), a in sorted(self.next_move.items())],
            'update': [[mode, m.actions[a], m.states[q], nxt]
                       for (mode, a, q), nxt in sorted(self.updates.items())],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any], m: Mdp) -> 'Transducer':
        transducer = cls(int(data['initial_mode']))
        for mode, q, a in data.get('next', []):
            transducer.next_move[(int(mode), m.state_index(q))] = m.action_index(a)
        for mode, a, q, nxt in data.get('update', []):
            transducer.updates[(int(mode), m.action_index(a), m.state_index(q))] = int(nxt)
        return transducer


def memoryless(m, strategy: Dict[int, int], starts: Iterable[int]) -> Transducer:
    """Single-mode transducer playing a state -> action map."""

    def choose(mode: int, q: int) -> int:
        if q not in strategy:
            raise StrategyError(f"Memoryless strategy undefined in state {q}")
        return strategy[q]

    return Transducer.explore(m, 0, starts, choose, lambda mode, a, s: 0)


def closing_action(m: Mdp, q: int, target: StateSet) -> int:
    """
    Lowest action whose whole successor support lies in `target`.

    Raises:
        StrategyError: If no action of `q` stays inside `target`
    """
    for a, mask in enumerate(m.post_masks[q]):
        if mask & ~target.bits == 0:
            return a
    raise StrategyError(f"State {m.states[q]} has no action into {sorted(target)}")
