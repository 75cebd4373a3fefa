"""
Built-in example models with their expected verdicts.

Each example carries the model, the initial state and a list of
Expectation records, so the regression suite can iterate over them
without any side tables.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from ..mdp import Mdp, ModelError
from .families import prime_cycle_mdp

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Expectation:
    """
    One expected verdict.

    Attributes:
        objective: event, weak or strong
        function: sum or max
        mode: sure, almost or limit
        target: Target state names
        expected: True for a yes-verdict
        min_modes: Lower bound on the witness transducer size, if any
    """
    objective: str
    function: str
    mode: str
    target: Tuple[str, ...]
    expected: bool
    min_modes: Optional[int] = None

    @property
    def label(self) -> str:
        verdict = "yes" if self.expected else "no"
        return f"{self.objective}/{self.function}/{self.mode} {{{','.join(self.target)}}} -> {verdict}"


@dataclass(frozen=True)
class ExampleModel:
    name: str
    mdp: Mdp
    init: str
    expectations: Tuple[Expectation, ...] = field(default=())
    description: str = ""


def _expect(objective: str, function: str, target: str, **modes) -> List[Expectation]:
    names = tuple(target.split(","))
    return [Expectation(objective, function, mode, names, bool(value)) for mode, value in modes.items()]


def _almost_limit_strongly_differ() -> ExampleModel:
    m = Mdp.build(
        ["q_init", "q"], ["a"],
        {
            ("q_init", "a"): {"q_init": HALF, "q": HALF},
            ("q", "a"): {"q": 1},
        },
    )
    expectations = (
        _expect("strong", "sum", "q", sure=False, almost=True, limit=True)
        + _expect("strong", "max", "q", sure=False, almost=True, limit=True)
        + _expect("weak", "sum", "q", sure=False, almost=True, limit=True)
        + _expect("event", "sum", "q", sure=False, limit=True)
    )
    return ExampleModel("almost-limit-strongly-differ", m, "q_init", tuple(expectations),
                        "Mass at q after k steps is 1 - 2^-k; never exactly 1.")


def _weak_limit() -> ExampleModel:
    both = {"q1": HALF, "q2": HALF}
    m = Mdp.build(
        ["q_init", "q1", "q2", "q3", "q4", "q5", "q6"], ["a", "b"],
        {
            ("q_init", "a"): both, ("q_init", "b"): both,
            ("q1", "a"): {"q_init": 1}, ("q1", "b"): {"q_init": 1},
            ("q2", "a"): {"q3": 1}, ("q2", "b"): {"q3": 1},
            ("q3", "a"): {"q2": 1}, ("q3", "b"): {"q4": 1},
            ("q4", "a"): {"q5": 1}, ("q4", "b"): {"q5": 1},
            ("q5", "a"): {"q3": HALF, "q6": HALF}, ("q5", "b"): {"q3": HALF, "q6": HALF},
            ("q6", "a"): {"q5": 1}, ("q6", "b"): {"q5": 1},
        },
    )
    expectations = _expect("weak", "sum", "q4", sure=False, almost=True, limit=True)
    return ExampleModel("weak-limit", m, "q_init", tuple(expectations),
                        "pre_seq({q4}) enters its period 2 at index 1 with R = {q3}.")


def _inf_mem() -> ExampleModel:
    m = Mdp.build(
        ["q_init", "q1", "q2"], ["a", "b"],
        {
            ("q_init", "a"): {"q_init": HALF, "q1": HALF},
            ("q_init", "b"): {"q_init": 1},
            ("q1", "a"): {"q1": 1},
            ("q1", "b"): {"q2": 1},
            ("q2", "a"): {"q_init": 1},
            ("q2", "b"): {"q_init": 1},
        },
    )
    expectations = _expect("weak", "sum", "q2", sure=False, almost=True, limit=True)
    return ExampleModel("inf-mem", m, "q_init", tuple(expectations),
                        "Almost-sure weak witnesses need unbounded memory.")


def _co_buchi() -> ExampleModel:
    m = Mdp.build(
        ["q_init", "q1", "q2"], ["a"],
        {
            ("q_init", "a"): {"q_init": HALF, "q1": HALF},
            ("q1", "a"): {"q2": 1},
            ("q2", "a"): {"q2": 1},
        },
    )
    expectations = (
        _expect("strong", "sum", "q_init,q2", sure=False, almost=True, limit=True)
        + _expect("weak", "sum", "q_init,q2", sure=False, almost=True)
        + _expect("event", "sum", "q_init,q2", sure=True)
    )
    return ExampleModel("coBuchi", m, "q_init", tuple(expectations),
                        "Sure coBuchi winning but only almost-sure strongly synchronizing.")


def _strong_max_memory() -> ExampleModel:
    both = {"q1": HALF, "q2": HALF}
    m = Mdp.build(
        ["q_init", "q1", "q2", "q3"], ["a", "b"],
        {
            ("q_init", "a"): both, ("q_init", "b"): both,
            ("q1", "a"): {"q2": 1}, ("q1", "b"): {"q1": 1},
            ("q2", "a"): {"q3": 1}, ("q2", "b"): {"q3": 1},
            ("q3", "a"): {"q2": 1}, ("q3", "b"): {"q2": 1},
        },
    )
    expectations = [Expectation("strong", "max", "sure", ("q2", "q3"), True, min_modes=2)]
    expectations += _expect("strong", "sum", "q2,q3", sure=True, almost=True)
    return ExampleModel("strong-max-memory", m, "q_init", tuple(expectations),
                        "q1 must wait one step depending on the parity of the clock.")


def _twin() -> ExampleModel:
    m = Mdp.build(
        ["l", "p", "q"], ["a"],
        {
            ("l", "a"): {"p": Fraction(1, 5), "q": Fraction(4, 5)},
            ("p", "a"): {"p": 1},
            ("q", "a"): {"l": 1},
        },
    )
    expectations = (
        _expect("weak", "max", "l,p,q", almost=True, limit=True)
        + _expect("weak", "sum", "q", sure=False, almost=False, limit=False)
        + _expect("strong", "max", "p", sure=False, almost=True)
    )
    return ExampleModel("twin", m, "l", tuple(expectations),
                        "Source model of the duplication example; keep set {q}.")


def _exp_mem_weakly(n: int, min_modes: int) -> Callable[[], ExampleModel]:
    def build() -> ExampleModel:
        m = prime_cycle_mdp(n)
        expectations = (Expectation("weak", "sum", "sure", ("q_T",), True, min_modes=min_modes),)
        if n == 2:
            expectations += (Expectation("weak", "sum", "almost", ("q_T",), True),)
        name = "exp-mem-weakly" if n == 2 else f"exp-mem-weakly-{n}"
        return ExampleModel(name, m, "q_init", expectations,
                            f"Prime cycle family with n={n}.")
    return build


EXAMPLES: Dict[str, Callable[[], ExampleModel]] = {
    "almost-limit-strongly-differ": _almost_limit_strongly_differ,
    "weak-limit": _weak_limit,
    "inf-mem": _inf_mem,
    "coBuchi": _co_buchi,
    "strong-max-memory": _strong_max_memory,
    "twin": _twin,
    "exp-mem-weakly": _exp_mem_weakly(2, 6),
    "exp-mem-weakly-3": _exp_mem_weakly(3, 30),
}


def builtin_example(name: str) -> ExampleModel:
    """
    Build a named example.

    Raises:
        ModelError: If the name is unknown
    """
    try:
        builder = EXAMPLES[name]
    except KeyError:
        raise ModelError(f"Unknown example {name!r}; known: {', '.join(EXAMPLES)}") from None
    example = builder()
    logger.debug(f"builtin_example({name}): {example.mdp.summary()}")
    return example


def all_examples() -> List[ExampleModel]:
    return [builtin_example(name) for name in EXAMPLES]
