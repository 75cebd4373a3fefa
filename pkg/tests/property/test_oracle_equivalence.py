"""
Deciders against the brute-force support-graph oracle on a seeded corpus.

The corpus size defaults to 500 models and can be changed with
--corpus-size or SYNCMDP_CORPUS_SIZE.
"""
import logging
import time
from typing import List

import pytest

from src.cli.commands import ORACLE_QUERIES
from src.generators import random_mdp, random_query
from src.sync import Answer, QuerySpec, solve
from src.utils import ComparisonEntry, ComparisonReport
from src.validation import ORACLES

logger = logging.getLogger(__name__)

CORPUS_STATES = 5
CORPUS_ACTIONS = 2
CORPUS_BRANCHING = 3
ORACLES_ORDER = sorted(ORACLE_QUERIES.items())


def _compare(seed: int, limits) -> List[ComparisonEntry]:
    m = random_mdp(seed, CORPUS_STATES, CORPUS_ACTIONS, CORPUS_BRANCHING)
    init, target = random_query(seed, m)
    entries = []
    for question, (objective, function) in ORACLES_ORDER:
        spec = QuerySpec.parse(objective, "sure", function, ",".join(target), init)
        t, d0 = spec.resolve(m)
        verdict = solve(m, spec, limits)
        decided = None if verdict.answer is Answer.INCONCLUSIVE else verdict.holds
        reference = ORACLES[question](m, d0.support(m.num_states), t)
        entries.append(ComparisonEntry(f"random_{seed}", question, decided, reference, seed))
    return entries


@pytest.mark.oracle
def test_sure_deciders_match_oracle(corpus_seeds, limits):
    """Every sure-mode decider agrees with the oracle on the whole corpus."""
    report = ComparisonReport("random corpus")
    started = time.perf_counter()
    for seed in corpus_seeds:
        report.entries.extend(_compare(seed, limits))
    report.duration_seconds = time.perf_counter() - started
    logger.info(report.summary())

    skipped = [e for e in report.entries if e.skipped]
    assert not skipped, f"{len(skipped)} comparisons were inconclusive"
    assert report.passed, report.summary()


@pytest.mark.oracle
@pytest.mark.parametrize("seed", range(20))
def test_single_seed(seed, limits):
    """Small per-seed slice so a failure names its seed directly."""
    for entry in _compare(seed, limits):
        assert entry.agrees, f"seed {seed} {entry.question}: decider={entry.decider} " \
                             f"oracle={entry.reference}"
