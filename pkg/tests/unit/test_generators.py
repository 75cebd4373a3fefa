"""
Unit tests for model families, transformations and the example registry.
"""
from fractions import Fraction

import pytest

from src.generators import (
    EXAMPLES,
    MonotoneCircuit,
    duplicate,
    duplicate_outside,
    first_primes,
    mbc_to_mdp,
    builtin_example,
    preempty_ground_truth,
    prime_cycle_mdp,
    random_circuit,
    random_mdp,
    random_query,
    reduce_event_to_weak,
    reduce_preempty_to_almostweak,
)
from src.mdp import Dist, ModelError, QueryError, StateSet


@pytest.mark.smoke
class TestPrimeCycles:

    def test_first_primes(self):
        assert first_primes(5) == [2, 3, 5, 7, 11]

    def test_shape(self):
        m = prime_cycle_mdp(2)
        assert m.num_states == 8
        assert m.actions == ("a", "b")
        entry = m.delta[m.state_index("q_init")][0]
        assert dict(entry.items()) == {m.state_index("h1_0"): Fraction(1, 2),
                                       m.state_index("h2_0"): Fraction(1, 2)}
        assert m.delta[m.state_index("h2_2")][1] == Dist.dirac(m.state_index("q_T"))
        assert m.delta[m.state_index("h2_1")][1] == Dist.dirac(m.state_index("sink"))

    def test_needs_one_cycle(self):
        with pytest.raises(ModelError):
            prime_cycle_mdp(0)


@pytest.mark.smoke
class TestCircuits:

    def test_evaluate(self):
        one, zero = MonotoneCircuit.leaf(True), MonotoneCircuit.leaf(False)
        assert MonotoneCircuit("or", zero, one).evaluate()
        assert not MonotoneCircuit("and", zero, one).evaluate()
        assert MonotoneCircuit("and", one, MonotoneCircuit("or", zero, one)).depth() == 2

    def test_malformed(self):
        with pytest.raises(ModelError):
            MonotoneCircuit("and", MonotoneCircuit.leaf(True))
        with pytest.raises(ModelError):
            MonotoneCircuit("xor", MonotoneCircuit.leaf(True), MonotoneCircuit.leaf(True))

    def test_random_circuit_is_seeded(self):
        assert str(random_circuit(3, 4)) == str(random_circuit(3, 4))
        assert random_circuit(3, 4).depth() <= 4

    def test_encoding(self):
        circuit = MonotoneCircuit("and", MonotoneCircuit.leaf(True), MonotoneCircuit.leaf(False))
        m, root, sync = mbc_to_mdp(circuit)
        assert m.states == ("v0", "v1", "v2", "sync", "q1", "q2")
        assert (root, sync) == (0, 3)
        assert dict(m.delta[0][0].items()) == {1: Fraction(1, 2), 2: Fraction(1, 2)}
        assert m.delta[1][1] == Dist.dirac(sync)

    def test_shared_children_merge(self):
        leaf = MonotoneCircuit.leaf(True)
        m, root, _ = mbc_to_mdp(MonotoneCircuit("and", leaf, leaf))
        assert m.delta[root][0] == Dist.dirac(2)


@pytest.mark.smoke
class TestRandomModels:

    def test_deterministic(self):
        assert random_mdp(11, 6, 2, 3) == random_mdp(11, 6, 2, 3)
        assert random_query(11, random_mdp(11, 6, 2, 3)) == random_query(11, random_mdp(11, 6, 2, 3))

    @pytest.mark.parametrize("seed", range(10))
    def test_shape(self, seed):
        m = random_mdp(seed, 5, 3, 3, max_denominator=8)
        assert m.num_states == 5
        assert m.actions == ("a", "b", "c")
        for row in m.delta:
            for dist in row:
                assert 1 <= len(dist) <= 3
                assert sum(p for _, p in dist.items()) == 1
                assert all(p.denominator <= 8 for _, p in dist.items())

    @pytest.mark.parametrize("seed", range(10))
    def test_query(self, seed):
        m = random_mdp(seed, 5, 2, 3)
        init, target = random_query(seed, m)
        assert init in m.states
        assert 1 <= len(target) <= 4
        assert len(set(target)) == len(target)

    def test_rejects_bad_parameters(self):
        with pytest.raises(ModelError):
            random_mdp(0, 0, 2, 3)


@pytest.mark.smoke
class TestTransforms:

    def test_duplicate_twin(self):
        source = builtin_example("twin").mdp
        dup = duplicate(source, source.state_set(["q"]))
        m = dup.mdp
        assert m.states == ("l_1", "l_2", "p_1", "p_2", "q")
        assert dup.origin == (0, 0, 1, 1, 2)
        assert dict(m.delta[0][0].items()) == {2: Fraction(1, 10), 3: Fraction(1, 10),
                                               4: Fraction(4, 5)}
        assert m.delta[4][0] == Dist({0: Fraction(1, 2), 1: Fraction(1, 2)})
        assert dup.lift(Dist.dirac(0)) == Dist({0: Fraction(1, 2), 1: Fraction(1, 2)})
        assert list(dup.lift_set(source.state_set(["p", "q"]))) == [2, 3, 4]
        assert duplicate_outside(source, source.state_set(["q"])) == m

    def test_duplicate_rejects_wrong_size(self):
        source = builtin_example("twin").mdp
        with pytest.raises(ModelError):
            duplicate(source, StateSet.of(2, [0]))

    def test_event_reduction_shape(self):
        base = builtin_example("coBuchi").mdp
        reduced, phat = reduce_event_to_weak(base, 0, 2)
        assert reduced.states[phat] == "p_hat"
        assert reduced.actions == ("a", "#")
        sharp = reduced.action_index("#")
        assert reduced.delta[2][sharp] == Dist.dirac(phat)
        assert reduced.delta[0][sharp] == Dist.dirac(reduced.state_index("sink"))
        assert reduced.delta[phat][0] == Dist.dirac(0)

    def test_preempty_reduction_shape(self):
        base = builtin_example("coBuchi").mdp
        reduced, fresh = reduce_preempty_to_almostweak(base, base.state_set(["q2"]))
        sharp = reduced.action_index("#")
        assert reduced.delta[fresh][sharp] == Dist.uniform(range(3))
        assert reduced.delta[fresh][0] == Dist.dirac(fresh)
        assert reduced.delta[1][sharp] == Dist.dirac(fresh)

    def test_preempty_reduction_needs_singleton(self):
        base = builtin_example("coBuchi").mdp
        with pytest.raises(QueryError):
            reduce_preempty_to_almostweak(base, base.state_set(["q1", "q2"]))

    def test_sharp_action_clash(self):
        base = builtin_example("coBuchi").mdp
        reduced, _ = reduce_event_to_weak(base, 0, 2)
        with pytest.raises(ModelError):
            reduce_event_to_weak(reduced, 0, 2)

    def test_preempty_ground_truth(self):
        weak_limit = builtin_example("weak-limit").mdp
        assert preempty_ground_truth(weak_limit, weak_limit.state_set(["q4"]))
        co_buchi = builtin_example("coBuchi").mdp
        assert not preempty_ground_truth(co_buchi, co_buchi.state_set(["q1"]))


@pytest.mark.smoke
class TestExampleRegistry:

    def test_every_example_builds(self, fixtures):
        assert set(fixtures) == set(EXAMPLES)
        for example in fixtures.values():
            assert example.init in example.mdp.states
            assert example.expectations

    def test_unknown_example(self):
        with pytest.raises(ModelError, match="Unknown example"):
            builtin_example("nope")

    def test_expectation_label(self, fixtures):
        labels = [e.label for e in fixtures["coBuchi"].expectations]
        assert "event/sum/sure {q_init,q2} -> yes" in labels
