"""
Unit tests for the oracle comparison report.
"""
import json

import pytest

from src.utils import ComparisonEntry, ComparisonReport


@pytest.fixture
def report() -> ComparisonReport:
    r = ComparisonReport("corpus/")
    r.entries += [
        ComparisonEntry("random_0.mdp", "event", True, True, 0, "oracle"),
        ComparisonEntry("random_0.mdp", "weak", False, False, 0, "oracle"),
        ComparisonEntry("random_1.mdp", "event", None, True, 1, "sequence_cap=3 reached"),
        ComparisonEntry("random_1.mdp", "strong_max", None, None, 1, "too large"),
    ]
    return r


@pytest.mark.smoke
class TestComparisonEntry:

    def test_agreement(self):
        assert ComparisonEntry("m", "event", True, True).agrees
        assert not ComparisonEntry("m", "event", True, False).agrees

    def test_skipped(self):
        assert ComparisonEntry("m", "event", None, True).skipped
        assert ComparisonEntry("m", "event", True, None).skipped
        assert not ComparisonEntry("m", "event", False, False).skipped


@pytest.mark.smoke
class TestComparisonReport:

    def test_counts(self, report):
        assert len(report.checked) == 2
        assert report.passed
        assert report.by_question() == {
            'event': {'agree': 1, 'mismatch': 0, 'skipped': 1},
            'strong_max': {'agree': 0, 'mismatch': 0, 'skipped': 1},
            'weak': {'agree': 1, 'mismatch': 0, 'skipped': 0},
        }

    def test_mismatch_fails(self, report):
        report.entries.append(ComparisonEntry("random_2.mdp", "weak", True, False, 2))
        assert not report.passed
        assert [e.model for e in report.mismatches] == ["random_2.mdp"]
        text = report.summary()
        assert "FAILED" in text
        assert "random_2.mdp (seed 2) weak: decider=True reference=False" in text

    def test_summary(self, report):
        text = report.summary()
        assert "ORACLE COMPARISON: corpus/" in text
        assert "Comparisons: 2 checked, 2 skipped" in text
        assert text.splitlines()[-2] == "PASSED"

    def test_json(self, report, tmp_path):
        path = report.to_json(tmp_path / "report.json")
        data = json.loads(path.read_text())
        assert data['passed'] is True
        assert data['mismatches'] == []
        assert data['by_question']['weak']['agree'] == 1

    def test_html(self, report, tmp_path):
        report.entries.append(ComparisonEntry("a<b>.mdp", "event", True, False, 3))
        page = report.to_html(tmp_path / "report.html").read_text()
        assert "FAILED" in page
        assert "a&lt;b&gt;.mdp" in page
