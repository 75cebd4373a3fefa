"""
Model constructions shared by the deciders: the modulo-l counter product
and the embedding of an initial distribution as a fresh state.
"""
import logging
from functools import cached_property
from typing import List, Tuple

from .exceptions import ModelError
from .model import Dist, Mdp, StateSet

logger = logging.getLogger(__name__)


class ProductMdp:
    """
    Product M x [l] of an MDP with a countdown counter.

    Product state <q, i> has index q * l + i. Every step moves the counter
    from i to (i - 1) mod l and the first component as in the base MDP.
    The reach algorithms only need `successors` and `predecessors`, so the
    product is never materialised unless `as_mdp()` is called.
    """

    def __init__(self, base: Mdp, modulus: int):
        """
        Args:
            base: The MDP to lift
            modulus: Counter range l >= 1

        Raises:
            ModelError: If modulus < 1
        """
        if modulus < 1:
            raise ModelError(f"Counter modulus must be >= 1, got {modulus}")
        self.base = base
        self.modulus = modulus

    @property
    def num_states(self) -> int:
        return self.base.num_states * self.modulus

    @property
    def num_actions(self) -> int:
        return self.base.num_actions

    def index(self, q: int, i: int) -> int:
        return q * self.modulus + i % self.modulus

    def split(self, x: int) -> Tuple[int, int]:
        return divmod(x, self.modulus)

    def state_name(self, x: int) -> str:
        q, i = self.split(x)
        return f"{self.base.states[q]}@{i}"

    @cached_property
    def successors(self) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
        l = self.modulus
        rows = []
        for q, base_row in enumerate(self.base.successors):
            for i in range(l):
                nxt = (i - 1) % l
                rows.append(tuple(tuple(s * l + nxt for s in succ) for succ in base_row))
        return tuple(rows)

    @cached_property
    def predecessors(self) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
        l = self.modulus
        rows: List[Tuple[Tuple[int, int], ...]] = []
        for base_preds in self.base.predecessors:
            for j in range(l):
                prev = (j + 1) % l
                rows.append(tuple((q * l + prev, a) for q, a in base_preds))
        return tuple(rows)

    def delta(self, x: int, a: int) -> Dist:
        q, i = self.split(x)
        nxt = (i - 1) % self.modulus
        return Dist({s * self.modulus + nxt: p for s, p in self.base.delta[q][a].items()})

    def layered(self, sets: List[StateSet]) -> StateSet:
        """{<q, i> | q in sets[i]} as a product state set."""
        if len(sets) != self.modulus:
            raise ModelError(f"Need {self.modulus} layers, got {len(sets)}")
        bits = 0
        for i, layer in enumerate(sets):
            for q in layer:
                bits |= 1 << self.index(q, i)
        return StateSet(bits, self.num_states)

    def as_mdp(self) -> Mdp:
        names = tuple(self.state_name(x) for x in range(self.num_states))
        delta = tuple(tuple(self.delta(x, a) for a in range(self.num_actions))
                      for x in range(self.num_states))
        return Mdp(names, self.base.actions, delta)


def product_counter(m: Mdp, l: int) -> ProductMdp:
    product = ProductMdp(m, l)
    logger.debug(f"Counter product with l={l}: {product.num_states} states")
    return product


def embed_initial(m: Mdp, d0: Dist) -> Tuple[Mdp, int]:
    """
    Add a fresh state whose every action leads to `d0`.

    Returns:
        (extended MDP, index of the fresh state); original indices are unchanged
    """
    if any(not 0 <= q < m.num_states for q in d0):
        raise ModelError("Initial distribution mentions unknown states")
    name = m.fresh_name("init")
    row = tuple(d0 for _ in m.actions)
    extended = Mdp(m.states + (name,), m.actions, m.delta + (row,))
    return extended, m.num_states
