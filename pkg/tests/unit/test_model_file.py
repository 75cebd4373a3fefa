"""
Unit tests for the line-oriented model file format.
"""
from fractions import Fraction

import pytest

from src.cli.model_file import load_model, parse_model, save_model, serialize_model
from src.generators import builtin_example, reduce_event_to_weak
from src.mdp import ModelParseError

CO_BUCHI = """\
# coBuchi example
states: q_init q1 q2
actions: a

trans: q_init a q_init 1/2
trans: q_init a q1 0.5
trans: q1 a q2 1
trans: q2 a q2 1
"""


def _parse_error(text: str) -> ModelParseError:
    with pytest.raises(ModelParseError) as info:
        parse_model(text)
    return info.value


@pytest.mark.smoke
class TestParseModel:

    def test_parses_example(self):
        m = parse_model(CO_BUCHI)
        assert m.states == ("q_init", "q1", "q2")
        assert m.actions == ("a",)
        assert m.delta[0][0][1] == Fraction(1, 2)
        assert m == builtin_example("coBuchi").mdp

    def test_decimal_probabilities_are_exact(self):
        m = parse_model("states: x y\nactions: a\n"
                        "trans: x a x 0.1\ntrans: x a y 0.9\ntrans: y a y 1\n")
        assert m.delta[0][0][0] == Fraction(1, 10)

    def test_hash_is_a_valid_action_name(self):
        m = parse_model("states: x\nactions: a #\ntrans: x a x 1\ntrans: x # x 1\n")
        assert m.actions == ("a", "#")

    def test_unknown_state_position(self):
        err = _parse_error("states: x\nactions: a\ntrans: x a y 1\n")
        assert err.line == 3
        assert err.column == 12
        assert "Unknown state" in err.message

    def test_unknown_action_position(self):
        err = _parse_error("states: x\nactions: a\ntrans: x b x 1\n")
        assert (err.line, err.column) == (3, 10)

    def test_duplicate_state_name(self):
        err = _parse_error("states: x y x\nactions: a\n")
        assert (err.line, err.column) == (1, 13)

    def test_repeated_section(self):
        err = _parse_error("states: x\nstates: y\n")
        assert err.line == 2
        assert "repeated" in err.message

    def test_empty_section(self):
        err = _parse_error("states:\n")
        assert err.line == 1

    def test_unknown_keyword(self):
        err = _parse_error("states: x\nedges: x\n")
        assert (err.line, err.column) == (2, 1)

    @pytest.mark.parametrize("prob", ["0", "3/2", "abc", "1/0", "-1/2"])
    def test_bad_probability(self, prob):
        err = _parse_error(f"states: x\nactions: a\ntrans: x a x {prob}\n")
        assert (err.line, err.column) == (3, 14)

    def test_duplicate_transition(self):
        err = _parse_error("states: x y\nactions: a\n"
                           "trans: x a y 1/2\ntrans: x a y 1/2\ntrans: y a y 1\n")
        assert err.line == 4

    def test_row_must_sum_to_one(self):
        err = _parse_error("states: x y\nactions: a\n"
                           "trans: x a y 1/3\ntrans: x a x 1/3\ntrans: y a y 1\n")
        assert err.line == 4
        assert "sums to 2/3" in err.message

    def test_missing_row(self):
        err = _parse_error("states: x y\nactions: a\ntrans: x a y 1\n")
        assert err.line == 2
        assert "(y,a)" in err.message

    def test_trans_before_header(self):
        err = _parse_error("trans: x a x 1\n")
        assert err.line == 1

    def test_wrong_field_count(self):
        err = _parse_error("states: x\nactions: a\ntrans: x a x\n")
        assert err.line == 3

    def test_missing_sections(self):
        assert "actions" in _parse_error("states: x\n").message
        assert "No trans" in _parse_error("states: x\nactions: a\n").message

    def test_error_text_carries_position(self):
        err = _parse_error("states: x\nactions: a\ntrans: x a y 1\n")
        assert str(err).startswith("line 3, column 12:")


@pytest.mark.smoke
class TestSerializeModel:

    def test_canonical_text(self):
        m = parse_model(CO_BUCHI)
        text = serialize_model(m, comment="coBuchi")
        assert text.splitlines()[0] == "# coBuchi"
        assert "trans: q_init a q1 1/2" in text
        assert text.endswith("trans: q2 a q2 1\n")

    def test_reparse_gives_same_model(self):
        base = builtin_example("inf-mem").mdp
        reduced, _ = reduce_event_to_weak(base, 0, 2)
        assert parse_model(serialize_model(reduced)) == reduced

    def test_save_and_load(self, tmp_path):
        m = builtin_example("twin").mdp
        path = save_model(m, tmp_path / "nested" / "twin.mdp", comment="twin")
        assert path.exists()
        assert load_model(path) == m

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_model(tmp_path / "absent.mdp")
