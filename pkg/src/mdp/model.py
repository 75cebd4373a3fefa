"""
Exact data model: state sets, distributions and MDPs.

States and actions are dense indices. Names live in side tables and are
only used for I/O and error messages.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from .exceptions import ModelError

logger = logging.getLogger(__name__)

Probability = Union[Fraction, int, str]


def to_fraction(value: Probability) -> Fraction:
    """Convert an int, Fraction or "p/q"/decimal string to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise ModelError(f"Refusing float probability {value!r}; use a string or Fraction")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise ModelError(f"Invalid probability {value!r}: {e}") from e


@dataclass(frozen=True)
class StateSet:
    """Subset of {0..size-1} stored as a bit mask."""
    bits: int
    size: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.size:
            raise ModelError(f"State set mask {self.bits:#x} exceeds {self.size} states")

    @classmethod
    def of(cls, size: int, members: Iterable[int] = ()) -> 'StateSet':
        bits = 0
        for q in members:
            if not 0 <= q < size:
                raise ModelError(f"State index {q} out of range for {size} states")
            bits |= 1 << q
        return cls(bits, size)

    @classmethod
    def empty(cls, size: int) -> 'StateSet':
        return cls(0, size)

    @classmethod
    def full(cls, size: int) -> 'StateSet':
        return cls((1 << size) - 1, size)

    def __contains__(self, q: int) -> bool:
        return 0 <= q < self.size and bool(self.bits >> q & 1)

    @classmethod
    def from_flags(cls, flags: bytes) -> 'StateSet':
        """Pack a 0/1 flag per state into a set."""
        digits = "".join("1" if f else "0" for f in reversed(flags))
        return cls(int(digits or "0", 2), len(flags))

    def __iter__(self) -> Iterator[int]:
        digits = bin(self.bits)[:1:-1]
        return (i for i, c in enumerate(digits) if c == "1")

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def _check(self, other: 'StateSet') -> None:
        if self.size != other.size:
            raise ModelError(f"State sets over {self.size} and {other.size} states")

    def __or__(self, other: 'StateSet') -> 'StateSet':
        self._check(other)
        return StateSet(self.bits | other.bits, self.size)

    def __and__(self, other: 'StateSet') -> 'StateSet':
        self._check(other)
        return StateSet(self.bits & other.bits, self.size)

    def __sub__(self, other: 'StateSet') -> 'StateSet':
        self._check(other)
        return StateSet(self.bits & ~other.bits, self.size)

    def __le__(self, other: 'StateSet') -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def issubset(self, other: 'StateSet') -> bool:
        return self <= other

    def complement(self) -> 'StateSet':
        return StateSet(((1 << self.size) - 1) & ~self.bits, self.size)

    def is_empty(self) -> bool:
        return self.bits == 0

    def __repr__(self) -> str:
        return f"StateSet({sorted(self)}, size={self.size})"


class Dist:
    """
    Exact probability distribution over state indices.

    Zero entries are never stored, so the support is the key set.
    Instances are immutable after construction.
    """

    __slots__ = ('_entries', '_key')

    def __init__(self, entries: Mapping[int, Probability]):
        cleaned: Dict[int, Fraction] = {}
        for q, p in entries.items():
            value = to_fraction(p)
            if value < 0 or value > 1:
                raise ModelError(f"Probability {value} for state {q} outside [0, 1]")
            if value > 0:
                cleaned[int(q)] = cleaned.get(int(q), Fraction(0)) + value
        total = sum(cleaned.values(), Fraction(0))
        if total != 1:
            raise ModelError(f"Distribution sums to {total}, expected exactly 1")
        self._entries = dict(sorted(cleaned.items()))
        self._key = tuple(self._entries.items())

    @classmethod
    def dirac(cls, q: int) -> 'Dist':
        return cls({q: Fraction(1)})

    @classmethod
    def uniform(cls, states: Iterable[int]) -> 'Dist':
        members = sorted(set(states))
        if not members:
            raise ModelError("Uniform distribution over an empty set")
        share = Fraction(1, len(members))
        return cls({q: share for q in members})

    def __getitem__(self, q: int) -> Fraction:
        return self._entries.get(q, Fraction(0))

    def __iter__(self) -> Iterator[int]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def items(self):
        return self._entries.items()

    @property
    def support_bits(self) -> int:
        bits = 0
        for q in self._entries:
            bits |= 1 << q
        return bits

    def support(self, size: int) -> StateSet:
        return StateSet(self.support_bits, size)

    @property
    def is_dirac(self) -> bool:
        return len(self._entries) == 1

    def mass(self, states: StateSet) -> Fraction:
        """Total probability in `states` (sum_T)."""
        return sum((p for q, p in self._entries.items() if q in states), Fraction(0))

    def max_mass(self, states: StateSet) -> Fraction:
        """Largest single-state probability inside `states` (max_T)."""
        return max((p for q, p in self._entries.items() if q in states), default=Fraction(0))

    def __eq__(self, other) -> bool:
        return isinstance(other, Dist) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        body = ", ".join(f"{q}: {p}" for q, p in self._entries.items())
        return f"Dist({{{body}}})"


@dataclass(frozen=True)
class Mdp:
    """
    Finite MDP with an exact-rational transition function.

    Attributes:
        states: State names, position = index
        actions: Action names, position = index
        delta: delta[q][a] is the successor distribution of (q, a)
    """
    states: Tuple[str, ...]
    actions: Tuple[str, ...]
    delta: Tuple[Tuple[Dist, ...], ...] = field(repr=False)

    def __post_init__(self):
        if not self.states:
            raise ModelError("MDP needs at least one state")
        if not self.actions:
            raise ModelError("MDP needs at least one action")
        for kind, names in (("state", self.states), ("action", self.actions)):
            if len(set(names)) != len(names):
                raise ModelError(f"Duplicate {kind} names in {list(names)}")
        if len(self.delta) != len(self.states):
            raise ModelError(f"delta has {len(self.delta)} rows for {len(self.states)} states")
        n = len(self.states)
        for q, row in enumerate(self.delta):
            if len(row) != len(self.actions):
                raise ModelError(f"State {self.states[q]} has {len(row)} actions, "
                                 f"expected {len(self.actions)}")
            for a, dist in enumerate(row):
                if not isinstance(dist, Dist):
                    raise ModelError(f"delta({self.states[q]},{self.actions[a]}) is not a Dist")
                if any(not 0 <= s < n for s in dist):
                    raise ModelError(f"delta({self.states[q]},{self.actions[a]}) "
                                     f"leaves the state space")

    @classmethod
    def build(
        cls,
        states: Iterable[str],
        actions: Iterable[str],
        rows: Mapping[Tuple[str, str], Mapping[str, Probability]]
    ) -> 'Mdp':
        """
        Build an MDP from name-keyed rows.

        Args:
            states: State names in index order
            actions: Action names in index order
            rows: (state, action) -> {successor: probability}; must be total

        Raises:
            ModelError: On unknown names or missing rows
        """
        states = tuple(states)
        actions = tuple(actions)
        s_index = {name: i for i, name in enumerate(states)}
        a_index = {name: i for i, name in enumerate(actions)}
        table: List[List[Optional[Dist]]] = [[None] * len(actions) for _ in states]
        for (q, a), succ in rows.items():
            if q not in s_index:
                raise ModelError(f"Unknown state: {q}")
            if a not in a_index:
                raise ModelError(f"Unknown action: {a}")
            unknown = [s for s in succ if s not in s_index]
            if unknown:
                raise ModelError(f"Unknown successor state(s) {unknown} in row ({q},{a})")
            table[s_index[q]][a_index[a]] = Dist({s_index[s]: p for s, p in succ.items()})
        for qi, row in enumerate(table):
            for ai, dist in enumerate(row):
                if dist is None:
                    raise ModelError(f"No transitions for ({states[qi]},{actions[ai]})")
        return cls(states, actions, tuple(tuple(row) for row in table))

    @property
    def num_states(self) -> int:
        return len(self.states)

    @property
    def num_actions(self) -> int:
        return len(self.actions)

    @cached_property
    def eta(self) -> Fraction:
        """Smallest positive transition probability."""
        return min(p for row in self.delta for dist in row for _, p in dist.items())

    @cached_property
    def post_masks(self) -> Tuple[Tuple[int, ...], ...]:
        """post_masks[q][a] is the support of delta(q, a) as a bit mask."""
        return tuple(tuple(dist.support_bits for dist in row) for row in self.delta)

    @cached_property
    def successors(self) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
        """successors[q][a] lists the support of delta(q, a) in index order."""
        return tuple(tuple(tuple(dist) for dist in row) for row in self.delta)

    @cached_property
    def predecessors(self) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
        """predecessors[q'] lists every (q, a) with q' in post(q, a)."""
        preds: List[List[Tuple[int, int]]] = [[] for _ in self.states]
        for q, row in enumerate(self.delta):
            for a, dist in enumerate(row):
                for succ in dist:
                    preds[succ].append((q, a))
        return tuple(tuple(p) for p in preds)

    @cached_property
    def _state_index(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.states)}

    @cached_property
    def _action_index(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.actions)}

    def state_index(self, name: str) -> int:
        try:
            return self._state_index[name]
        except KeyError:
            raise ModelError(f"Unknown state: {name}") from None

    def action_index(self, name: str) -> int:
        try:
            return self._action_index[name]
        except KeyError:
            raise ModelError(f"Unknown action: {name}") from None

    def post(self, q: int, a: int) -> StateSet:
        return StateSet(self.post_masks[q][a], self.num_states)

    def state_set(self, names: Iterable[str]) -> StateSet:
        return StateSet.of(self.num_states, (self.state_index(n) for n in names))

    def full_set(self) -> StateSet:
        return StateSet.full(self.num_states)

    def empty_set(self) -> StateSet:
        return StateSet.empty(self.num_states)

    def names(self, states: Iterable[int]) -> List[str]:
        return [self.states[q] for q in states]

    def dist_from_names(self, entries: Mapping[str, Probability]) -> Dist:
        return Dist({self.state_index(name): p for name, p in entries.items()})

    def fresh_name(self, base: str, taken: Iterable[str] = ()) -> str:
        """Return `base`, or `base_<k>`, not clashing with existing state names."""
        used = set(self.states) | set(taken)
        if base not in used:
            return base
        k = 1
        while f"{base}_{k}" in used:
            k += 1
        return f"{base}_{k}"

    def summary(self) -> str:
        transitions = sum(len(dist) for row in self.delta for dist in row)
        return (f"MDP: {self.num_states} states, {self.num_actions} actions, "
                f"{transitions} transitions, eta={self.eta}")
