"""
Unit tests for the event, weak and strong deciders on small hand-checked models.
"""
import pytest

from src.generators import builtin_example
from src.mdp import Dist, InconclusiveError, QueryError, StateSet
from src.sync import (
    ShiftInfo,
    WeakSureCertificate,
    candidate_cycles,
    candidate_supports,
    decide_almost_event_periodic,
    decide_almost_weak,
    decide_limit_event_support,
    decide_limit_weak,
    decide_strong,
    decide_strong_max,
    decide_strong_sum,
    decide_sure_event,
    decide_sure_event_support,
    decide_sure_weak,
    evaluate_cycle,
    pair_seq,
    synth_sure_weak,
    weak_max_to_sum,
)
from src.utils.settings import Limits
from src.validation import run_trace


@pytest.fixture
def weak_limit():
    return builtin_example("weak-limit").mdp


@pytest.fixture
def co_buchi():
    return builtin_example("coBuchi").mdp


@pytest.fixture
def strong_max_memory():
    return builtin_example("strong-max-memory").mdp


@pytest.fixture
def geometric():
    """q_init keeps half its mass and sends half into the absorbing q."""
    return builtin_example("almost-limit-strongly-differ").mdp


@pytest.mark.smoke
class TestSureEvent:

    def test_least_index(self, strong_max_memory):
        m = strong_max_memory
        result = decide_sure_event(m, 0, m.state_set(["q2", "q3"]))
        assert result.holds
        assert result.k == 2

    def test_never(self, co_buchi, geometric):
        assert not decide_sure_event(co_buchi, 0, co_buchi.state_set(["q2"]))
        result = decide_sure_event(geometric, 0, geometric.state_set(["q"]))
        assert result.k is None

    def test_with_support(self, strong_max_memory):
        m = strong_max_memory
        result = decide_sure_event_support(m, 0, m.state_set(["q2", "q3"]),
                                           m.state_set(["q1", "q2", "q3"]))
        assert result.k == 2

    def test_support_must_contain_target(self, strong_max_memory):
        m = strong_max_memory
        with pytest.raises(QueryError):
            decide_sure_event_support(m, 0, m.state_set(["q2"]), m.state_set(["q3"]))


@pytest.mark.smoke
class TestPairSequence:

    def test_entry_and_period(self, weak_limit):
        m = weak_limit
        seq = pair_seq(m, m.state_set(["q4"]), m.state_set(["q3", "q4"]))
        assert (seq.entry, seq.period) == (1, 2)
        assert seq.aligned_index == 2
        rseq, zseq = seq.orbit()
        assert [m.names(r) for r in rseq] == [["q2"], ["q3"]]
        assert [m.names(z) for z in zseq] == [["q2", "q3"], ["q2", "q3"]]
        assert seq.at(7) == seq.at(3)

    def test_cap(self, weak_limit):
        m = weak_limit
        with pytest.raises(InconclusiveError):
            pair_seq(m, m.state_set(["q4"]), m.state_set(["q3", "q4"]), cap=2)


@pytest.mark.smoke
class TestAlmostEventPeriodic:

    def test_rephasing_through_the_loop(self, weak_limit):
        m = weak_limit
        result = decide_almost_event_periodic(m, m.state_index("q2"),
                                              [m.state_set(["q3"]), m.state_set(["q2"])])
        assert result.by_shift == (True, True)
        assert result.shift == ShiftInfo(2, 0)

    def test_unreachable_layer(self, strong_max_memory):
        m = strong_max_memory
        result = decide_almost_event_periodic(m, 0, [m.state_set(["q1"])])
        assert not result.holds
        assert result.shift is None

    def test_rejects_non_cycle(self, weak_limit):
        with pytest.raises(QueryError):
            decide_almost_event_periodic(weak_limit, 0, [weak_limit.state_set(["q4"])])

    def test_shift_range(self):
        with pytest.raises(QueryError):
            ShiftInfo(2, 2)


@pytest.mark.smoke
class TestLimitEvent:

    def test_periodic(self, geometric):
        m = geometric
        result = decide_limit_event_support(m, Dist.dirac(0), m.state_set(["q"]), m.full_set())
        assert result.holds
        assert result.kind == "periodic"

    def test_sure_counts_embedding_step(self, co_buchi):
        m = co_buchi
        result = decide_limit_event_support(m, Dist.dirac(0), m.state_set(["q_init", "q2"]),
                                            m.full_set())
        assert (result.kind, result.k) == ("sure", 1)

    def test_support_must_contain_target(self, co_buchi):
        with pytest.raises(QueryError):
            decide_limit_event_support(co_buchi, Dist.dirac(0), co_buchi.state_set(["q2"]),
                                       co_buchi.state_set(["q1"]))


@pytest.mark.smoke
class TestSureWeak:

    def test_no_start_path_to_recurrent_subset(self, co_buchi):
        m = co_buchi
        result = decide_sure_weak(m, 0, m.state_set(["q_init", "q2"]))
        assert not result.holds
        assert m.names(result.universal) == ["q2"]

    def test_certificate_checks(self, co_buchi):
        m = co_buchi
        t = m.state_set(["q2"])
        assert WeakSureCertificate(t, 1, 1).check(m, m.state_index("q1"), t)
        with pytest.raises(QueryError):
            WeakSureCertificate.checked(m, 0, t, t, 0, 1)
        with pytest.raises(QueryError):
            WeakSureCertificate(t, -1, 1)

    def test_synthesized_countdown(self, co_buchi):
        m = co_buchi
        t = m.state_set(["q2"])
        q1 = m.state_index("q1")
        transducer = synth_sure_weak(WeakSureCertificate(t, 1, 1), m, q1)
        assert transducer.mode_count == 1
        trace = run_trace(m, transducer, Dist.dirac(q1), 5)
        assert trace.sum_t(t) == [0, 1, 1, 1, 1, 1]


@pytest.mark.smoke
class TestAlmostWeak:

    def test_candidate_order(self, co_buchi):
        supports = [s.bits for s in candidate_supports(co_buchi, Dist.dirac(0), Limits())]
        assert supports == [1, 3, 7, 2, 4, 5, 6]

    def test_support_cap(self, co_buchi):
        with pytest.raises(InconclusiveError):
            list(candidate_supports(co_buchi, Dist.dirac(0), Limits(support_cap=1)))

    def test_witness_support(self, geometric):
        m = geometric
        result = decide_almost_weak(m, Dist.dirac(0), m.state_set(["q"]))
        assert m.names(result.witness) == ["q_init", "q"]
        assert result.explored == 2
        assert decide_limit_weak is decide_almost_weak

    def test_max_splits_into_singletons(self, co_buchi):
        singles = weak_max_to_sum(co_buchi, co_buchi.state_set(["q1", "q2"]))
        assert [list(s) for s in singles] == [[1], [2]]
        with pytest.raises(QueryError):
            weak_max_to_sum(co_buchi, StateSet.empty(3))


@pytest.mark.smoke
class TestStrong:

    def test_candidate_cycles(self, strong_max_memory):
        cycles = candidate_cycles(strong_max_memory)
        assert sorted(c.length for c in cycles) == [1, 2]

    def test_evaluate_cycle_by_mode(self, geometric):
        (cycle,) = candidate_cycles(geometric)
        assert evaluate_cycle(geometric, 0, cycle, "sure")[0] is None
        assert evaluate_cycle(geometric, 0, cycle, "almost")[0] == 0

    def test_sum_modes(self, geometric):
        t = geometric.state_set(["q"])
        assert not decide_strong_sum(geometric, 0, t, "sure")
        verdict = decide_strong_sum(geometric, 0, t, "limit")
        assert verdict.holds
        assert verdict.mode == "almost"
        assert geometric.names(verdict.safe_region) == ["q"]

    def test_max_needs_target(self, geometric):
        with pytest.raises(QueryError):
            decide_strong_max(geometric, 0, StateSet.empty(2), "sure")

    @pytest.mark.parametrize("function,mode", [("min", "sure"), ("sum", "certain")])
    def test_unknown_choices(self, geometric, function, mode):
        with pytest.raises(QueryError):
            decide_strong(geometric, 0, geometric.full_set(), function, mode)
