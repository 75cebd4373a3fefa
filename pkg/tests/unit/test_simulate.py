"""
Unit tests for the exact simulator and the empirical objective reader.
"""
from fractions import Fraction

import pytest

from src.generators import builtin_example
from src.mdp import Dist, QueryError
from src.sync import Transducer, memoryless
from src.validation import Trace, check_sync, decimal_text, run_trace


def _single_action_trace(name: str, start: str, horizon: int) -> Trace:
    m = builtin_example(name).mdp
    strategy = memoryless(m, {q: 0 for q in range(m.num_states)}, [m.state_index(start)])
    return run_trace(m, strategy, Dist.dirac(m.state_index(start)), horizon)


@pytest.mark.smoke
class TestDecimalText:

    def test_rounding(self):
        assert decimal_text(Fraction(1, 3), 4) == "0.3333"
        assert decimal_text(Fraction(2, 3), 4) == "0.6667"
        assert decimal_text(Fraction(1), 2) == "1.00"
        assert decimal_text(Fraction(0), 3) == "0.000"


@pytest.mark.smoke
class TestRunTrace:

    def test_mass_is_exact(self):
        trace = _single_action_trace("almost-limit-strongly-differ", "q_init", 40)
        q = trace.mdp.state_set(["q"])
        sums = trace.sum_t(q)
        assert trace.horizon == 40
        for k in range(41):
            assert sums[k] == 1 - Fraction(1, 2 ** k)

    def test_no_period_while_mass_moves(self):
        trace = _single_action_trace("almost-limit-strongly-differ", "q_init", 20)
        assert trace.detect_period() is None

    def test_dirac_fixpoint_is_periodic(self):
        trace = _single_action_trace("coBuchi", "q2", 5)
        assert trace.detect_period() == (0, 1)
        assert all(d == Dist.dirac(2) for d in trace.dists)

    def test_memory_is_tracked(self):
        m = builtin_example("inf-mem").mdp
        a, b = m.action_index("a"), m.action_index("b")
        q_init, q1, q2 = (m.state_index(n) for n in ("q_init", "q1", "q2"))
        # mode 0 plays a once, mode 1 plays b from then on
        strategy = Transducer(0)
        for q in (q_init, q1, q2):
            strategy.next_move[(0, q)] = a
            strategy.next_move[(1, q)] = b
            for action in (a, b):
                strategy.updates[(0, action, q)] = 1
                strategy.updates[(1, action, q)] = 1
        trace = run_trace(m, strategy, Dist.dirac(q_init), 2)
        assert trace.dists[1] == Dist({q_init: Fraction(1, 2), q1: Fraction(1, 2)})
        assert trace.dists[2] == Dist({q_init: Fraction(1, 2), q2: Fraction(1, 2)})

    def test_negative_horizon(self):
        m = builtin_example("coBuchi").mdp
        with pytest.raises(QueryError):
            run_trace(m, memoryless(m, {0: 0, 1: 0, 2: 0}, [0]), Dist.dirac(0), -1)

    def test_readings_reject_unknown_function(self):
        trace = _single_action_trace("coBuchi", "q_init", 1)
        with pytest.raises(QueryError):
            trace.readings(trace.mdp.full_set(), "min")


@pytest.mark.smoke
class TestTraceExport:

    def test_csv_rows(self):
        trace = _single_action_trace("coBuchi", "q_init", 2)
        t = trace.mdp.state_set(["q_init", "q2"])
        lines = trace.csv_text(t, precision=6).splitlines()
        assert lines[0] == "step,q_init,q1,q2,sum_T,max_T,sum_T_exact,max_T_exact"
        assert lines[1] == "0,1.000000,0.000000,0.000000,1.000000,1.000000,1,1"
        assert lines[2] == "1,0.500000,0.500000,0.000000,0.500000,0.500000,1/2,1/2"
        assert lines[3] == "2,0.250000,0.250000,0.500000,0.750000,0.500000,3/4,1/2"

    def test_to_csv(self, tmp_path):
        trace = _single_action_trace("coBuchi", "q_init", 3)
        t = trace.mdp.state_set(["q2"])
        path = tmp_path / "trace.csv"
        trace.to_csv(path, t)
        assert path.read_text() == trace.csv_text(t)

    def test_summary(self):
        trace = _single_action_trace("coBuchi", "q_init", 4)
        text = trace.summary(trace.mdp.state_set(["q_init", "q2"]))
        assert "TRACE: 4 steps" in text
        assert "Steps with sum_T = 1: [0]" in text


@pytest.mark.smoke
class TestCheckSync:

    @pytest.fixture
    def co_buchi_trace(self) -> Trace:
        return _single_action_trace("coBuchi", "q_init", 20)

    def test_strong_stabilises(self, co_buchi_trace):
        t = co_buchi_trace.mdp.state_set(["q_init", "q2"])
        report = check_sync(co_buchi_trace, t, "sum", "strong", Fraction(99, 100))
        assert report
        assert report.stable_from == 7
        assert report.indices[:2] == (0, 7)
        assert "synchronized at every step from 7" in report.summary()

    def test_sure_strong_fails(self, co_buchi_trace):
        t = co_buchi_trace.mdp.state_set(["q_init", "q2"])
        report = check_sync(co_buchi_trace, t, "sum", "strong", Fraction(1))
        assert not report
        assert report.stable_from is None
        assert report.indices == (0,)

    def test_weak_and_event(self, co_buchi_trace):
        t = co_buchi_trace.mdp.state_set(["q_init", "q2"])
        p = Fraction(99, 100)
        assert check_sync(co_buchi_trace, t, "sum", "weak", p)
        assert check_sync(co_buchi_trace, t, "sum", "event", Fraction(1))
        assert not check_sync(co_buchi_trace, t, "sum", "weak", Fraction(1))

    def test_max_function(self, co_buchi_trace):
        t = co_buchi_trace.mdp.state_set(["q_init", "q2"])
        report = check_sync(co_buchi_trace, t, "max", "strong", Fraction(99, 100))
        assert report.stable_from == 8
        assert report.label == "empirical"

    def test_unknown_kind(self, co_buchi_trace):
        with pytest.raises(QueryError):
            check_sync(co_buchi_trace, co_buchi_trace.mdp.full_set(), "sum", "always", Fraction(1))
