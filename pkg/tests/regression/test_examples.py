"""
Verdict regressions on the built-in example models.

Every Expectation attached to an example becomes one test case, so adding
an expectation to an example automatically adds it here.
"""
from fractions import Fraction
from typing import List, Tuple

import pytest

from src.generators import Expectation, ExampleModel, all_examples, duplicate, builtin_example
from src.mdp import Dist, Mdp, pre_seq, reach_value_iter, sure_safe
from src.sync import Answer, QuerySpec, decide_strong_sum, solve
from src.utils.settings import SimulationSettings
from src.validation import check_sync, run_trace, verify_witness


def _cases() -> List[Tuple[ExampleModel, Expectation]]:
    return [(example, e) for example in all_examples() for e in example.expectations]


CASES = _cases()


def _spec(example: ExampleModel, e: Expectation) -> QuerySpec:
    return QuerySpec.parse(e.objective, e.mode, e.function, ",".join(e.target), example.init)


def _dirac(m: Mdp, name: str) -> Dist:
    return Dist.dirac(m.state_index(name))


@pytest.mark.regression
@pytest.mark.parametrize("example,expectation", CASES,
                         ids=[f"{x.name}: {e.label}" for x, e in CASES])
def test_expected_verdict(example, expectation, limits):
    """Each example verdict matches its recorded expectation exactly."""
    verdict = solve(example.mdp, _spec(example, expectation), limits)
    expected = Answer.YES if expectation.expected else Answer.NO
    assert verdict.answer is expected, f"{example.name}: {expectation.label}, got {verdict.answer.value}"
    if expectation.min_modes is not None:
        assert verdict.strategy.mode_count >= expectation.min_modes


@pytest.mark.regression
@pytest.mark.parametrize("example,expectation",
                         [(x, e) for x, e in CASES if e.expected and x.name != "exp-mem-weakly-3"],
                         ids=[f"{x.name}: {e.label}" for x, e in CASES
                              if e.expected and x.name != "exp-mem-weakly-3"])
def test_witness_reverifies(example, expectation, limits):
    """Yes-verdict witnesses pass the independent verification path."""
    verdict = solve(example.mdp, _spec(example, expectation), limits)
    check = verify_witness(example.mdp, verdict.to_json(), limits, SimulationSettings())
    assert check.ok, check.summary()


@pytest.mark.regression
class TestExactProbabilities:

    def test_co_buchi_value_iteration(self):
        m = builtin_example("coBuchi").mdp
        safe = sure_safe(m, m.state_set(["q_init", "q2"]))
        assert m.names(safe.region) == ["q2"]
        values = reach_value_iter(m, safe.region, 25)
        assert values[m.state_index("q_init")] >= 1 - 1e-6
        assert values[m.state_index("q2")] == 1.0

    def test_co_buchi_safety_region_in_verdict(self):
        m = builtin_example("coBuchi").mdp
        verdict = solve(m, QuerySpec.parse("strong", "sure", "sum", "q_init,q2", "q_init"))
        assert verdict.answer is Answer.NO
        assert verdict.witness == {'safety_region': ["q2"]}

    def test_strong_dispatch_matches_sum_decider(self):
        m = builtin_example("coBuchi").mdp
        t = m.state_set(["q_init", "q2"])
        for mode in ("sure", "almost", "limit"):
            direct = decide_strong_sum(m, 0, t, mode)
            verdict = solve(m, QuerySpec.parse("strong", mode, "sum", "q_init,q2", "q_init"))
            assert verdict.holds == direct.holds

    def test_weak_limit_sequence(self):
        m = builtin_example("weak-limit").mdp
        seq = pre_seq(m, m.state_set(["q4"]))
        assert (seq.entry, seq.period) == (1, 2)
        assert m.names(seq.at(seq.entry)) == ["q3"]


@pytest.mark.regression
class TestPrimeCycleWitness:

    def test_certificate(self):
        example = builtin_example("exp-mem-weakly")
        verdict = solve(example.mdp, QuerySpec.parse("weak", "sure", "sum", "q_T", "q_init"))
        assert verdict.witness['S'] == ["q_T"]
        assert (verdict.witness['m'], verdict.witness['n']) == (7, 8)

    def test_mass_one_at_predicted_steps(self):
        example = builtin_example("exp-mem-weakly")
        m = example.mdp
        verdict = solve(m, QuerySpec.parse("weak", "sure", "sum", "q_T", "q_init"))
        trace = run_trace(m, verdict.strategy, _dirac(m, "q_init"), 23)
        sums = trace.sum_t(m.state_set(["q_T"]))
        assert [k for k, s in enumerate(sums) if s == 1] == [7, 15, 23]

    def test_three_cycles(self):
        example = builtin_example("exp-mem-weakly-3")
        verdict = solve(example.mdp, QuerySpec.parse("weak", "sure", "sum", "q_T", "q_init"))
        assert verdict.witness['n'] == 32
        assert verdict.strategy.mode_count >= 30


@pytest.mark.regression
class TestStrongMaxMemory:

    def test_two_mode_transducer(self):
        example = builtin_example("strong-max-memory")
        m = example.mdp
        verdict = solve(m, QuerySpec.parse("strong", "sure", "max", "q2,q3", "q_init"))
        assert verdict.holds
        assert verdict.strategy.mode_count == 2
        assert verdict.witness['kind'] == "cycle"
        assert sorted(set(verdict.witness['states'])) == ["q2", "q3"]

    def test_trace_concentrates(self):
        example = builtin_example("strong-max-memory")
        m = example.mdp
        verdict = solve(m, QuerySpec.parse("strong", "sure", "max", "q2,q3", "q_init"))
        trace = run_trace(m, verdict.strategy, _dirac(m, "q_init"), 20)
        report = check_sync(trace, m.state_set(["q2", "q3"]), "max", "strong", Fraction(1))
        assert report, report.summary()


@pytest.mark.regression
class TestAlmostWeakSchedules:

    @pytest.mark.parametrize("name,target", [
        ("inf-mem", "q2"),
        ("weak-limit", "q4"),
        ("almost-limit-strongly-differ", "q"),
    ])
    def test_phase_marks(self, name, target):
        example = builtin_example(name)
        m = example.mdp
        verdict = solve(m, QuerySpec.parse("weak", "almost", "sum", target, example.init))
        marks = verdict.strategy.phase_marks(8)
        steps = [mark.step for mark in marks]
        assert steps == sorted(set(steps))
        trace = run_trace(m, verdict.strategy, _dirac(m, example.init), steps[-1])
        sums = trace.sum_t(m.state_set([target]))
        for mark in marks:
            assert sums[mark.step] >= 1 - Fraction(1, 2 ** mark.phase)
        assert sums[marks[-1].step] > Fraction(99, 100)


@pytest.mark.regression
class TestModeAliases:

    @pytest.mark.parametrize("name,objective,function,target", [
        ("almost-limit-strongly-differ", "strong", "sum", "q"),
        ("almost-limit-strongly-differ", "strong", "max", "q"),
        ("almost-limit-strongly-differ", "weak", "sum", "q"),
        ("coBuchi", "strong", "sum", "q_init,q2"),
        ("coBuchi", "weak", "sum", "q_init,q2"),
        ("weak-limit", "weak", "sum", "q4"),
        ("twin", "weak", "max", "l,p,q"),
        ("twin", "strong", "max", "p"),
    ])
    def test_limit_equals_almost(self, name, objective, function, target):
        example = builtin_example(name)
        verdicts = {}
        for mode in ("almost", "limit"):
            data = solve(example.mdp, QuerySpec.parse(objective, mode, function, target,
                                                      example.init)).to_json()
            data.pop('query')
            verdicts[mode] = data
        assert verdicts['almost'] == verdicts['limit']


@pytest.mark.regression
class TestTwinDuplication:

    def test_duplicated_max_matches_singleton_sum(self, limits):
        source = builtin_example("twin")
        dup = duplicate(source.mdp, source.mdp.state_set(["q"]))
        init = dup.lift(_dirac(source.mdp, source.init))
        init_text = ",".join(f"{dup.mdp.states[x]}:{p}" for x, p in init.items())
        everything = ",".join(dup.mdp.states)
        for mode in ("almost", "limit"):
            on_dup = solve(dup.mdp, QuerySpec.parse("weak", mode, "max", everything, init_text), limits)
            singleton = solve(source.mdp, QuerySpec.parse("weak", mode, "sum", "q", source.init), limits)
            assert on_dup.answer is Answer.NO
            assert on_dup.holds == singleton.holds


STRONG_LIMIT_CASES = [(x, e) for x, e in CASES
                      if e.objective == "strong" and e.mode in ("almost", "limit") and e.expected]


@pytest.mark.regression
@pytest.mark.parametrize("example,expectation", STRONG_LIMIT_CASES,
                         ids=[f"{x.name}: {e.label}" for x, e in STRONG_LIMIT_CASES])
def test_strong_witness_over_long_horizon(example, expectation, limits):
    """Replayed for 1000 steps, the reading stays within 1e-4 of 1 over the second half."""
    m = example.mdp
    spec = _spec(example, expectation)
    verdict = solve(m, spec, limits)
    sim = SimulationSettings()
    assert sim.witness_horizon == 1000
    check = verify_witness(m, verdict.to_json(), limits, sim)
    assert check.ok, check.summary()
    (report,) = check.empirical
    assert report.satisfied, report.summary()
    assert report.stable_from <= 500

    t, d0 = spec.resolve(m)
    readings = run_trace(m, verdict.strategy, d0, 1000).readings(t, expectation.function)
    assert min(readings[500:]) >= 1 - Fraction(1, 10000)
