"""
Parameterised model families with known answers.

- prime_cycle_mdp: sure weakly synchronizing models whose witnesses need
  memory equal to a product of primes
- mbc_to_mdp: monotone Boolean circuits as strong max_T instances
- random_mdp, random_query: seeded random models with small exact
  denominators and seeded queries over them
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..mdp import Mdp, ModelError

logger = logging.getLogger(__name__)


def first_primes(n: int) -> List[int]:
    primes: List[int] = []
    candidate = 2
    while len(primes) < n:
        if all(candidate % p for p in primes if p * p <= candidate):
            primes.append(candidate)
        candidate += 1
    return primes


def prime_cycle_mdp(n: int) -> Mdp:
    """
    M_n: q_init branches uniformly into n a-cycles of prime lengths.

    Cycle i has states h{i}_0 .. h{i}_{p_i - 1}; a moves along the cycle,
    b leads from the last state to q_T and from any other state to sink.
    q_T returns to q_init on both actions; sink is absorbing.

    Raises:
        ModelError: If n < 1
    """
    if n < 1:
        raise ModelError(f"prime_cycle_mdp needs n >= 1, got {n}")
    primes = first_primes(n)
    states = ["q_init"]
    for i, p in enumerate(primes, start=1):
        states.extend(f"h{i}_{j}" for j in range(p))
    states += ["q_T", "sink"]
    entry = {f"h{i}_0": Fraction(1, n) for i in range(1, n + 1)}
    rows: Dict[Tuple[str, str], Dict[str, Fraction]] = {
        ("q_init", "a"): entry,
        ("q_init", "b"): entry,
        ("q_T", "a"): {"q_init": 1},
        ("q_T", "b"): {"q_init": 1},
        ("sink", "a"): {"sink": 1},
        ("sink", "b"): {"sink": 1},
    }
    for i, p in enumerate(primes, start=1):
        for j in range(p):
            rows[(f"h{i}_{j}", "a")] = {f"h{i}_{(j + 1) % p}": 1}
            rows[(f"h{i}_{j}", "b")] = {"q_T" if j == p - 1 else "sink": 1}
    return Mdp.build(states, ["a", "b"], rows)


@dataclass(frozen=True)
class MonotoneCircuit:
    """Binary tree of AND/OR gates over constant leaves '0' and '1'."""
    label: str
    left: Optional['MonotoneCircuit'] = None
    right: Optional['MonotoneCircuit'] = None

    def __post_init__(self):
        if self.label in ("0", "1"):
            if self.left is not None or self.right is not None:
                raise ModelError("Circuit leaves have no children")
        elif self.label in ("and", "or"):
            if self.left is None or self.right is None:
                raise ModelError(f"Gate {self.label} needs two children")
        else:
            raise ModelError(f"Unknown circuit label {self.label!r}")

    @classmethod
    def leaf(cls, value: bool) -> 'MonotoneCircuit':
        return cls("1" if value else "0")

    @property
    def is_leaf(self) -> bool:
        return self.label in ("0", "1")

    def evaluate(self) -> bool:
        if self.label == "1":
            return True
        if self.label == "0":
            return False
        if self.label == "and":
            return self.left.evaluate() and self.right.evaluate()
        return self.left.evaluate() or self.right.evaluate()

    def nodes(self) -> List['MonotoneCircuit']:
        """Vertices in pre-order; the root comes first."""
        out = [self]
        if not self.is_leaf:
            out += self.left.nodes()
            out += self.right.nodes()
        return out

    def depth(self) -> int:
        return 0 if self.is_leaf else 1 + max(self.left.depth(), self.right.depth())

    def __str__(self) -> str:
        if self.is_leaf:
            return self.label
        return f"{self.label}({self.left}, {self.right})"


def random_circuit(seed: int, depth: int) -> MonotoneCircuit:
    """Seeded random circuit of depth at most `depth`."""
    rng = np.random.default_rng(seed)

    def grow(level: int) -> MonotoneCircuit:
        if level == 0 or rng.random() < 0.25:
            return MonotoneCircuit.leaf(bool(rng.integers(0, 2)))
        label = "and" if rng.random() < 0.5 else "or"
        return MonotoneCircuit(label, grow(level - 1), grow(level - 1))

    return grow(depth)


def mbc_to_mdp(circuit: MonotoneCircuit) -> Tuple[Mdp, int, int]:
    """
    Encode a circuit so that the root is strongly synchronizing in {sync}
    (max_T, any mode) iff the circuit evaluates to 1.

    Actions L and R: 1-leaves go to sync, 0-leaves split evenly between the
    absorbing states q1 and q2, AND gates split evenly between their
    children, OR gates take the left child on L and the right child on R.

    Returns:
        (model, root index, sync index)
    """
    nodes = circuit.nodes()
    index = {id(node): k for k, node in enumerate(nodes)}
    names = [f"v{k}" for k in range(len(nodes))]
    states = names + ["sync", "q1", "q2"]
    rows: Dict[Tuple[str, str], Dict[str, Fraction]] = {}
    for node, name in zip(nodes, names):
        if node.label == "1":
            succ = {"L": {"sync": 1}, "R": {"sync": 1}}
        elif node.label == "0":
            half = {"q1": Fraction(1, 2), "q2": Fraction(1, 2)}
            succ = {"L": half, "R": half}
        else:
            left, right = names[index[id(node.left)]], names[index[id(node.right)]]
            if node.label == "and":
                half = {left: Fraction(1, 2)}
                half[right] = half.get(right, 0) + Fraction(1, 2)
                succ = {"L": half, "R": half}
            else:
                succ = {"L": {left: 1}, "R": {right: 1}}
        for action, dist in succ.items():
            rows[(name, action)] = dist
    for sink in ("sync", "q1", "q2"):
        rows[(sink, "L")] = {sink: 1}
        rows[(sink, "R")] = {sink: 1}
    m = Mdp.build(states, ["L", "R"], rows)
    return m, 0, m.state_index("sync")


def _composition(rng: np.random.Generator, total: int, parts: int) -> List[int]:
    """Random split of `total` into `parts` positive integers."""
    if parts == 1:
        return [total]
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, total), size=parts - 1, replace=False))
    bounds = [0] + cuts + [total]
    return [b - a for a, b in zip(bounds, bounds[1:])]


def random_mdp(
    seed: int,
    nstates: int,
    nactions: int,
    branching: int,
    max_denominator: int = 16
) -> Mdp:
    """
    Seeded random MDP.

    Every (q, a) gets between 1 and `branching` distinct successors whose
    probabilities share a random denominator of at most `max_denominator`.

    Raises:
        ModelError: If a parameter is not positive
    """
    if min(nstates, nactions, branching, max_denominator) < 1:
        raise ModelError("random_mdp parameters must be positive")
    rng = np.random.default_rng(seed)
    states = [f"q{i}" for i in range(nstates)]
    actions = [chr(ord("a") + i) for i in range(nactions)] if nactions <= 26 \
        else [f"a{i}" for i in range(nactions)]
    rows: Dict[Tuple[str, str], Dict[str, Fraction]] = {}
    for q in states:
        for a in actions:
            k = int(rng.integers(1, min(branching, nstates), endpoint=True))
            succ = sorted(int(s) for s in rng.choice(nstates, size=k, replace=False))
            denominator = int(rng.integers(k, max(k, max_denominator), endpoint=True))
            weights = _composition(rng, denominator, k)
            rows[(q, a)] = {states[s]: Fraction(w, denominator) for s, w in zip(succ, weights)}
    m = Mdp.build(states, actions, rows)
    logger.debug(f"random_mdp(seed={seed}): {m.summary()}")
    return m


def random_query(seed: int, m: Mdp) -> Tuple[str, List[str]]:
    """Seeded initial state and non-empty proper target set (the full set on 1-state models)."""
    rng = np.random.default_rng([seed, m.num_states])
    init = m.states[int(rng.integers(0, m.num_states))]
    size = int(rng.integers(1, max(m.num_states - 1, 1), endpoint=True))
    chosen = sorted(int(q) for q in rng.choice(m.num_states, size=size, replace=False))
    return init, [m.states[q] for q in chosen]
