"""
Report Generator for batch oracle comparisons

Generates JSON, text and HTML reports with:
- Per-question agreement counts
- Mismatch listing (seed, model file, question)
- Pass/Fail verdict
"""
import html
import json
import logging
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

logger = logging.getLogger(__name__)


@dataclass
class ComparisonEntry:
    """One decider-vs-reference comparison."""
    model: str
    question: str
    decider: Optional[bool]
    reference: Optional[bool]
    seed: Optional[int] = None
    note: str = ""

    @property
    def agrees(self) -> bool:
        return self.decider is not None and self.decider == self.reference

    @property
    def skipped(self) -> bool:
        return self.decider is None or self.reference is None


@dataclass
class ComparisonReport:
    """Results of one oracle-compare run."""
    corpus: str
    started: datetime = field(default_factory=datetime.now)
    duration_seconds: float = 0.0
    entries: List[ComparisonEntry] = field(default_factory=list)

    @property
    def checked(self) -> List[ComparisonEntry]:
        return [e for e in self.entries if not e.skipped]

    @property
    def mismatches(self) -> List[ComparisonEntry]:
        return [e for e in self.checked if not e.agrees]

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def by_question(self) -> Dict[str, Dict[str, int]]:
        table: Dict[str, Dict[str, int]] = {}
        for e in self.entries:
            row = table.setdefault(e.question, {'agree': 0, 'mismatch': 0, 'skipped': 0})
            key = 'skipped' if e.skipped else ('agree' if e.agrees else 'mismatch')
            row[key] += 1
        return dict(sorted(table.items()))

    def to_json(self, path: Path) -> Path:
        data = {
            'corpus': self.corpus,
            'started': self.started.isoformat(timespec='seconds'),
            'duration_seconds': round(self.duration_seconds, 3),
            'passed': self.passed,
            'by_question': self.by_question(),
            'mismatches': [asdict(e) for e in self.mismatches],
        }
        path.write_text(json.dumps(data, indent=2) + "\n")
        logger.info(f"Comparison report saved to: {path}")
        return path

    def summary(self) -> str:
        lines = [
            "=" * 50,
            f"ORACLE COMPARISON: {self.corpus}",
            "=" * 50,
            f"Duration: {self.duration_seconds:.1f}s",
            f"Comparisons: {len(self.checked)} checked, "
            f"{len(self.entries) - len(self.checked)} skipped",
            "",
        ]
        for question, row in self.by_question().items():
            lines.append(f"  {question:<14} agree={row['agree']} mismatch={row['mismatch']} "
                         f"skipped={row['skipped']}")
        if self.mismatches:
            lines.append("")
            lines.append(f"Mismatches: {len(self.mismatches)}")
            for e in self.mismatches[:20]:
                lines.append(f"  {e.model} (seed {e.seed}) {e.question}: "
                             f"decider={e.decider} reference={e.reference}")
        lines.append("")
        lines.append("PASSED" if self.passed else "FAILED")
        lines.append("=" * 50)
        return "\n".join(lines)

    def to_html(self, path: Path) -> Path:
        status_class = "pass" if self.passed else "fail"
        status_text = "PASSED" if self.passed else "FAILED"
        rows = "".join(
            f"<tr><td>{html.escape(q)}</td><td>{r['agree']}</td>"
            f"<td class=\"{'fail' if r['mismatch'] else ''}\">{r['mismatch']}</td>"
            f"<td>{r['skipped']}</td></tr>"
            for q, r in self.by_question().items()
        )
        mismatch_rows = "".join(
            f"<tr><td>{html.escape(e.model)}</td><td>{e.seed}</td><td>{html.escape(e.question)}</td>"
            f"<td>{e.decider}</td><td>{e.reference}</td></tr>"
            for e in self.mismatches
        )
        page = f'''<!DOCTYPE html>
<html lang="en">
<head>
    <meta charset="UTF-8">
    <title>Oracle Comparison - {html.escape(self.corpus)}</title>
    <style>
        body {{
            font-family: -apple-system, BlinkMacSystemFont, 'Segoe UI', Roboto, sans-serif;
            background: #1a1a2e;
            color: #eee;
            padding: 20px;
        }}
        table {{ border-collapse: collapse; margin-bottom: 24px; }}
        td, th {{ border: 1px solid #444; padding: 4px 10px; }}
        .pass {{ color: #4caf50; }}
        .fail {{ color: #f44336; }}
    </style>
</head>
<body>
    <h1>Oracle Comparison: {html.escape(self.corpus)}</h1>
    <p class="{status_class}">{status_text} ({len(self.checked)} comparisons, {self.duration_seconds:.1f}s)</p>
    <table>
        <tr><th>Question</th><th>Agree</th><th>Mismatch</th><th>Skipped</th></tr>
        {rows}
    </table>
    <table>
        <tr><th>Model</th><th>Seed</th><th>Question</th><th>Decider</th><th>Reference</th></tr>
        {mismatch_rows}
    </table>
</body>
</html>
'''
        path.write_text(page)
        logger.info(f"HTML report saved to: {path}")
        return path
