"""
Line-oriented model file format.

    # comment
    states: q_init q
    actions: a
    trans: q_init a q_init 1/2
    trans: q_init a q 1/2
    trans: q a q 1

Comments take a whole line, so "#" stays usable as a name. Probabilities
are exact rationals ("1/2") or decimals ("0.5"), converted exactly. Every
(state, action) row must be present and sum to 1.
"""
import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from ..mdp import Dist, Mdp, ModelParseError

logger = logging.getLogger(__name__)

TOKEN = re.compile(r"\S+")
SECTIONS = ("states", "actions", "trans")


def _tokens(line: str) -> List[Tuple[str, int]]:
    """Tokens with their 1-based column."""
    return [(match.group(), match.start() + 1) for match in TOKEN.finditer(line)]


def _probability(text: str, line: int, column: int) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ModelParseError(f"Invalid probability {text!r}", line, column) from None
    if not 0 < value <= 1:
        raise ModelParseError(f"Probability {text} outside (0, 1]", line, column)
    return value


def parse_model(text: str) -> Mdp:
    """
    Parse a model file.

    Raises:
        ModelParseError: With the line and column of the first problem
    """
    states: Optional[List[str]] = None
    actions: Optional[List[str]] = None
    header_line: Dict[str, int] = {}
    rows: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    row_line: Dict[Tuple[int, int], int] = {}
    s_index: Dict[str, int] = {}
    a_index: Dict[str, int] = {}
    last_line = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        tokens = _tokens(raw)
        if not tokens or tokens[0][0].startswith("#"):
            continue
        head, head_col = tokens[0]
        if not head.endswith(":") or head[:-1] not in SECTIONS:
            raise ModelParseError(f"Expected one of {', '.join(s + ':' for s in SECTIONS)}, "
                                  f"got {head!r}", lineno, head_col)
        section = head[:-1]
        body = tokens[1:]

        if section in ("states", "actions"):
            if section in header_line:
                raise ModelParseError(f"Section {section} repeated (first on line "
                                      f"{header_line[section]})", lineno, head_col)
            if not body:
                raise ModelParseError(f"Section {section} is empty", lineno, head_col)
            names = [name for name, _ in body]
            seen = set()
            for name, col in body:
                if name in seen:
                    raise ModelParseError(f"Duplicate name {name!r} in {section}", lineno, col)
                seen.add(name)
            header_line[section] = lineno
            if section == "states":
                states = names
                s_index = {name: i for i, name in enumerate(names)}
            else:
                actions = names
                a_index = {name: i for i, name in enumerate(names)}
            continue

        if states is None or actions is None:
            raise ModelParseError("trans before states and actions are declared", lineno, head_col)
        if len(body) != 4:
            raise ModelParseError(f"trans needs <state> <action> <state> <probability>, "
                                  f"got {len(body)} fields", lineno, head_col)
        (src, src_col), (act, act_col), (dst, dst_col), (prob, prob_col) = body
        for name, col, table, what in ((src, src_col, s_index, "state"),
                                       (act, act_col, a_index, "action"),
                                       (dst, dst_col, s_index, "state")):
            if name not in table:
                raise ModelParseError(f"Unknown {what} {name!r}", lineno, col)
        key = (s_index[src], a_index[act])
        row = rows.setdefault(key, {})
        if s_index[dst] in row:
            raise ModelParseError(f"Duplicate transition {src} {act} {dst}", lineno, dst_col)
        row[s_index[dst]] = _probability(prob, lineno, prob_col)
        row_line[key] = lineno

    for section, names in (("states", states), ("actions", actions)):
        if names is None:
            raise ModelParseError(f"Missing section {section}", max(last_line, 1))
    if not rows:
        raise ModelParseError("No trans lines", max(last_line, 1))

    for (q, a), row in sorted(rows.items()):
        total = sum(row.values(), Fraction(0))
        if total != 1:
            raise ModelParseError(f"Row ({states[q]},{actions[a]}) sums to {total}, expected 1",
                                  row_line[(q, a)])
    delta = []
    for q in range(len(states)):
        dists = []
        for a in range(len(actions)):
            if (q, a) not in rows:
                raise ModelParseError(f"No transitions for ({states[q]},{actions[a]})",
                                      header_line["actions"])
            dists.append(Dist(rows[(q, a)]))
        delta.append(tuple(dists))
    m = Mdp(tuple(states), tuple(actions), tuple(delta))
    logger.debug(f"parse_model: {m.summary()}")
    return m


def serialize_model(m: Mdp, comment: Optional[str] = None) -> str:
    """Canonical text: exact rationals, rows in index order."""
    lines = []
    if comment:
        lines += [f"# {part}" for part in comment.splitlines()]
    lines.append("states: " + " ".join(m.states))
    lines.append("actions: " + " ".join(m.actions))
    for q, row in enumerate(m.delta):
        for a, dist in enumerate(row):
            for s, p in dist.items():
                lines.append(f"trans: {m.states[q]} {m.actions[a]} {m.states[s]} {p}")
    return "\n".join(lines) + "\n"


def load_model(path: Union[str, Path]) -> Mdp:
    """
    Raises:
        FileNotFoundError: If the file does not exist
        ModelParseError: On format errors
    """
    path = Path(path)
    text = path.read_text()
    logger.info(f"Loading model from {path}")
    return parse_model(text)


def save_model(m: Mdp, path: Union[str, Path], comment: Optional[str] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_model(m, comment))
    return path
