"""
Model generators: transformations, hardness reductions used as test
generators, parameterised families and the built-in example models.
"""

from .transforms import (
    Duplication,
    duplicate,
    duplicate_outside,
    preempty_ground_truth,
    reduce_event_to_weak,
    reduce_preempty_to_almostweak,
)
from .families import (
    MonotoneCircuit,
    first_primes,
    mbc_to_mdp,
    prime_cycle_mdp,
    random_circuit,
    random_mdp,
    random_query,
)
from .fixtures import EXAMPLES, Expectation, ExampleModel, all_examples, builtin_example

__all__ = [
    'Duplication',
    'duplicate',
    'duplicate_outside',
    'preempty_ground_truth',
    'reduce_event_to_weak',
    'reduce_preempty_to_almostweak',
    'MonotoneCircuit',
    'first_primes',
    'mbc_to_mdp',
    'prime_cycle_mdp',
    'random_circuit',
    'random_mdp',
    'random_query',
    'EXAMPLES',
    'Expectation',
    'ExampleModel',
    'all_examples',
    'builtin_example',
]
