"""
The Pre operator and its ultimately periodic iteration.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from .exceptions import InconclusiveError
from .model import Mdp, StateSet

logger = logging.getLogger(__name__)


def pre_set(m: Mdp, t: StateSet) -> StateSet:
    """States having an action whose whole successor support lies in `t`."""
    allowed = t.bits
    out = 0
    for q, masks in enumerate(m.post_masks):
        for mask in masks:
            if mask & ~allowed == 0:
                out |= 1 << q
                break
    return StateSet(out, m.num_states)


@dataclass(frozen=True)
class PredecessorSequence:
    """
    Pre^0(T), Pre^1(T), ... up to and including the first repeated set.

    sets[entry + period] == sets[entry]; every other pair of stored sets
    is distinct.
    """
    sets: Tuple[StateSet, ...]
    entry: int
    period: int

    def at(self, n: int) -> StateSet:
        """Pre^n(T) for any n >= 0."""
        if n < len(self.sets):
            return self.sets[n]
        return self.sets[self.entry + (n - self.entry) % self.period]

    @property
    def distinct(self) -> Tuple[StateSet, ...]:
        return self.sets[:self.entry + self.period]

    @property
    def periodic(self) -> Tuple[StateSet, ...]:
        """The repeating orbit sets[entry .. entry+period-1]."""
        return self.sets[self.entry:self.entry + self.period]

    def first_index_containing(self, q: int) -> Optional[int]:
        for k, s in enumerate(self.distinct):
            if q in s:
                return k
        return None

    def first_index_covering(self, states: StateSet) -> Optional[int]:
        for k, s in enumerate(self.distinct):
            if states <= s:
                return k
        return None

    @property
    def aligned_index(self) -> int:
        """
        Index j >= entry with j = 0 mod period.

        Pre^N(T) == sets[aligned_index] for every N >= entry that is a
        multiple of the period, in particular for any common multiple
        of all periods bounded by 2^|Q|.
        """
        remainder = self.entry % self.period
        return self.entry if remainder == 0 else self.entry + self.period - remainder


def pre_seq(m: Mdp, t: StateSet, cap: Optional[int] = None) -> PredecessorSequence:
    """
    Iterate pre_set from `t` until a set repeats.

    Args:
        m: The MDP
        t: Starting set
        cap: Maximum number of distinct sets to explore

    Raises:
        InconclusiveError: If `cap` distinct sets are explored without a repeat
    """
    seen: Dict[int, int] = {t.bits: 0}
    sets = [t]
    current = t
    while True:
        nxt = pre_set(m, current)
        if nxt.bits in seen:
            entry = seen[nxt.bits]
            sets.append(nxt)
            period = len(sets) - 1 - entry
            logger.debug(f"pre_seq from {len(t)} states: entry={entry}, period={period}")
            return PredecessorSequence(tuple(sets), entry, period)
        if cap is not None and len(sets) >= cap:
            logger.warning(f"pre_seq gave up after {cap} distinct sets")
            raise InconclusiveError('sequence_cap', cap, "predecessor sequence did not repeat")
        seen[nxt.bits] = len(sets)
        sets.append(nxt)
        current = nxt


def pre_power(m: Mdp, t: StateSet, n: int) -> StateSet:
    """Pre^n(t) by direct iteration; used for re-checking certificates."""
    current = t
    for _ in range(n):
        current = pre_set(m, current)
    return current
