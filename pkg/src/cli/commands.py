"""
Subcommand implementations.

Every command takes the parsed argparse namespace plus the loaded Settings
and returns a process exit code; errors propagate as SyncError subclasses
and are mapped to exit codes in main.
"""
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from ..generators import (
    duplicate,
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
from ..mdp import Dist, Mdp, OracleSizeError, QueryError, StateSet
from ..sync import Answer, QuerySpec, Verdict, decide_sure_event, solve
from ..utils.report_generator import ComparisonEntry, ComparisonReport
from ..utils.settings import Limits, Settings
from ..validation import ORACLES, check_sync, run_trace, verify_witness
from .model_file import load_model, save_model

logger = logging.getLogger(__name__)

EXIT_CODES = {Answer.YES: 0, Answer.NO: 1, Answer.INCONCLUSIVE: 2}
FAMILIES = ("prime-cycle", "mbc", "random", "event-reduction", "preempty-reduction", "twin")
MANIFEST = "manifest.json"

# oracle question -> (objective, function)
ORACLE_QUERIES = {
    'event': ("event", "sum"),
    'weak': ("weak", "sum"),
    'strong_sum': ("strong", "sum"),
    'strong_max': ("strong", "max"),
}


def _spec(args) -> QuerySpec:
    return QuerySpec.parse(args.objective, args.mode, args.function, args.target, args.init)


def _timed_solve(m: Mdp, spec: QuerySpec, limits: Limits) -> Tuple[Verdict, float]:
    started = time.perf_counter()
    verdict = solve(m, spec, limits)
    return verdict, (time.perf_counter() - started) * 1000


def _write_or_print(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    logger.info(f"Wrote {out}")


def cmd_check(args, settings: Settings) -> int:
    m = load_model(args.model)
    verdict, elapsed = _timed_solve(m, _spec(args), settings.limits)
    _write_or_print(json.dumps(verdict.to_json(elapsed), indent=2) + "\n", args.out)
    return EXIT_CODES[verdict.answer]


def _trace_target(m: Mdp, spec: QuerySpec, verdict: Verdict) -> Tuple[StateSet, str]:
    """Target and function the witness strategy is read against."""
    state = verdict.witness.get('state')
    if state is not None:
        return m.state_set([state]), "sum"
    return m.state_set(spec.target), spec.function


def cmd_trace(args, settings: Settings) -> int:
    m = load_model(args.model)
    spec = _spec(args)
    verdict, _ = _timed_solve(m, spec, settings.limits)
    if verdict.answer is not Answer.YES:
        print(f"error: no witness strategy to trace (verdict {verdict.answer.value})", file=sys.stderr)
        return EXIT_CODES[verdict.answer]
    if verdict.strategy is None:
        raise QueryError(f"{spec.objective}/{spec.mode} verdicts carry no strategy to trace")
    horizon = settings.simulation.horizon if args.horizon is None else args.horizon
    _, d0 = spec.resolve(m)
    t, function = _trace_target(m, spec, verdict)
    trace = run_trace(m, verdict.strategy, d0, horizon)
    precision = settings.simulation.precision
    _write_or_print(trace.csv_text(t, precision), args.out)

    p = Fraction(1) if spec.mode == "sure" else 1 - settings.simulation.almost_tolerance
    report = check_sync(trace, t, function, spec.objective, p, settings.simulation.weak_hits)
    stream = sys.stdout if args.out is not None else sys.stderr
    print(trace.summary(t, precision), file=stream)
    print(report.summary(), file=stream)
    return 0


def _init_text(m: Mdp, d: Dist) -> str:
    if d.is_dirac:
        (q,) = tuple(d)
        return m.states[q]
    return ",".join(f"{m.states[q]}:{p}" for q, p in d.items())


def _entry(file: str, family: str, init: str, target: List[str], seed: Optional[int] = None,
           expected: Optional[Dict[str, bool]] = None, **extra) -> Dict[str, Any]:
    record = {'file': file, 'family': family, 'seed': seed, 'init': init,
              'target': target, 'expected': expected or {}}
    record.update(extra)
    return record


def generate_family(args, settings: Settings) -> List[Tuple[Mdp, Dict[str, Any]]]:
    """Models plus manifest records for one family; pure given the arguments."""
    family = args.family
    gen = settings.generators
    seed = args.seed
    count = args.count
    out: List[Tuple[Mdp, Dict[str, Any]]] = []

    if family == "prime-cycle":
        m = prime_cycle_mdp(args.n)
        out.append((m, _entry(f"prime_cycle_{args.n}.mdp", family, "q_init", ["q_T"],
                              expected={'weak/sum/sure': True}, n=args.n)))
    elif family == "twin":
        source = builtin_example("twin")
        dup = duplicate(source.mdp, source.mdp.state_set(["q"]))
        init = dup.lift(Dist.dirac(source.mdp.state_index(source.init)))
        out.append((dup.mdp, _entry("twin.mdp", family, _init_text(dup.mdp, init),
                                    list(dup.mdp.states),
                                    expected={'weak/max/almost': False})))
    elif family == "mbc":
        for s in range(seed, seed + count):
            circuit = random_circuit(s, args.depth)
            m, root, sync = mbc_to_mdp(circuit)
            value = circuit.evaluate()
            expected = {f"strong/max/{mode}": value for mode in ("sure", "almost", "limit")}
            out.append((m, _entry(f"mbc_{s}.mdp", family, m.states[root], [m.states[sync]], s,
                                  expected, circuit=str(circuit))))
    else:
        for s in range(seed, seed + count):
            base = random_mdp(s, args.states, args.actions, args.branching or gen.branching,
                              gen.max_denominator)
            init, target = random_query(s, base)
            if family == "random":
                out.append((base, _entry(f"random_{s}.mdp", family, init, target, s)))
            elif family == "event-reduction":
                q_init, qhat = base.state_index(init), base.state_index(target[0])
                reduced, phat = reduce_event_to_weak(base, q_init, qhat)
                reference = decide_sure_event(base, q_init, StateSet.of(base.num_states, [qhat]),
                                              settings.limits).holds
                out.append((reduced, _entry(f"event_reduction_{s}.mdp", family, init,
                                            [reduced.states[phat]], s,
                                            {'weak/sum/sure': reference}, qhat=target[0])))
            elif family == "preempty-reduction":
                t = base.state_set(target[:1])
                reduced, fresh = reduce_preempty_to_almostweak(base, t)
                reference = preempty_ground_truth(base, t, settings.limits.sequence_cap)
                out.append((reduced, _entry(f"preempty_reduction_{s}.mdp", family,
                                            reduced.states[fresh], target[:1], s,
                                            {'weak/sum/almost': reference})))
            else:
                raise QueryError(f"Unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    return out


def cmd_generate(args, settings: Settings) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = []
    for m, record in generate_family(args, settings):
        comment = record['family'] if record['seed'] is None else f"{record['family']} seed={record['seed']}"
        save_model(m, out_dir / record['file'], comment=comment)
        records.append(record)
    manifest = out_dir / MANIFEST
    existing = json.loads(manifest.read_text()) if manifest.exists() else []
    names = {r['file'] for r in records}
    merged = [r for r in existing if r['file'] not in names] + records
    manifest.write_text(json.dumps(merged, indent=2) + "\n")
    print(f"Generated {len(records)} model(s) in {out_dir}")
    return 0


def _decide(m: Mdp, spec: QuerySpec, limits: Limits) -> Optional[bool]:
    verdict = solve(m, spec, limits)
    return None if verdict.answer is Answer.INCONCLUSIVE else verdict.holds


def compare_entry(corpus: str, record: Dict[str, Any], limits: Limits,
                  use_oracle: bool = True) -> List[ComparisonEntry]:
    """All comparisons for one manifest record; runs in worker processes."""
    m = load_model(Path(corpus) / record['file'])
    name, seed = record['file'], record.get('seed')
    target = ",".join(record['target'])
    results: List[ComparisonEntry] = []

    for key, expected in sorted(record.get('expected', {}).items()):
        objective, function, mode = key.split("/")
        spec = QuerySpec.parse(objective, mode, function, target, record['init'])
        results.append(ComparisonEntry(name, key, _decide(m, spec, limits), bool(expected), seed,
                                       "manifest"))

    if use_oracle:
        for question, (objective, function) in ORACLE_QUERIES.items():
            spec = QuerySpec.parse(objective, "sure", function, target, record['init'])
            t, d0 = spec.resolve(m)
            try:
                reference = ORACLES[question](m, d0.support(m.num_states), t,
                                              limits.oracle_max_states)
            except OracleSizeError as e:
                results.append(ComparisonEntry(name, question, None, None, seed, str(e)))
                continue
            results.append(ComparisonEntry(name, question, _decide(m, spec, limits), reference,
                                           seed, "oracle"))
    return results


def cmd_oracle_compare(args, settings: Settings) -> int:
    corpus = Path(args.corpus)
    manifest = corpus / MANIFEST
    if not manifest.exists():
        raise FileNotFoundError(f"No {MANIFEST} in {corpus}")
    records = json.loads(manifest.read_text())
    limits = settings.limits
    report = ComparisonReport(str(corpus))
    started = time.perf_counter()
    jobs = max(1, args.jobs)
    if jobs == 1:
        batches = [compare_entry(str(corpus), r, limits, not args.no_oracle) for r in records]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(compare_entry, str(corpus), r, limits, not args.no_oracle)
                       for r in records]
            batches = [f.result() for f in futures]
    for batch in batches:
        report.entries.extend(batch)
    report.duration_seconds = time.perf_counter() - started

    print(report.summary())
    if args.report:
        report_dir = Path(args.report)
        report_dir.mkdir(parents=True, exist_ok=True)
        report.to_json(report_dir / "oracle_compare.json")
        report.to_html(report_dir / "oracle_compare.html")
    for e in report.mismatches:
        logger.error(f"Mismatch: {e.model} seed={e.seed} {e.question}: "
                     f"decider={e.decider} reference={e.reference}")
    return 0 if report.passed else 1


def cmd_verify_witness(args, settings: Settings) -> int:
    m = load_model(args.model)
    try:
        data = json.loads(Path(args.verdict).read_text())
    except json.JSONDecodeError as e:
        raise QueryError(f"Verdict file is not valid JSON: {e}") from e
    check = verify_witness(m, data, settings.limits, settings.simulation)
    print(check.summary())
    return 0 if check.ok else 1

