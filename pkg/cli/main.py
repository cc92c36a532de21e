"""
Command-line front end: ``python -m cli <command> ...``.

Exit status: 0 success, 1 goal not proven or no proof found, 2 usage or
input error, 3 resource limit.
"""
import functools
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional

import click

from config.settings import (
    CONCORDANCE_FILE, DEFAULT_AXIOM, DEFAULT_CACHE_CAP, DEFAULT_JOBS, DEFAULT_MAX_FH, DEFAULT_MAX_FT,
    DEFAULT_MAX_LEVEL, DEFAULT_POLICY, DEFAULT_PSP_DEPTH, MC_CSIZE_BUDGET, MT_TSIZE_BUDGET, REPORT_COLUMNS,
    TIME_LIMIT,
)
from core.analysis import Concordance, aggregate, analyze, render_rows
from core.dterms import LevelEnumerator, compact, count_dterms
from core.errors import CdToolsError, Exhausted, InvalidNUse, ProofCheckFailed, ResourceLimit, UndefinedMgt
from core.prover import DEDUP_MODES, POLICIES, EnumPolicy, level_summary, prove
from core.reductions import STRATEGIES, ReductionKind, normalize
from core.semantics import Atom, AxiomAssignment, Problem, check_proof, mgt, mgt_of_compacted, skolemize
from notations.corpus_file import Corpus, load_corpus, parse_corpus, print_corpus
from notations.d_notation import parse_dnotation, print_dnotation
from notations.json_proof import export_json, import_json
from notations.polish_notation import parse_polish, print_polish
from notations.tptp_problem import load_problem
from utils.axiom_factory import AxiomFactory
from utils.helpers import configure_logging, write_report

logger = logging.getLogger(__name__)

EXIT_NOT_PROVEN = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


@dataclass
class CliConfig:
    jobs: int = DEFAULT_JOBS
    time_limit: Optional[float] = TIME_LIMIT
    cache_cap: Optional[int] = DEFAULT_CACHE_CAP


def exit_code(error: CdToolsError) -> int:
    if isinstance(error, ResourceLimit):
        return EXIT_RESOURCE
    if isinstance(error, (InvalidNUse, UndefinedMgt, Exhausted, ProofCheckFailed)):
        return EXIT_NOT_PROVEN
    return EXIT_USAGE


def reports_errors(command: Callable) -> Callable:
    """Turn library errors into a diagnostic on stderr and an exit status."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except CdToolsError as error:
            click.echo(f"error: {error}", err=True)
            raise SystemExit(exit_code(error))
    return wrapper


def positive(ctx, param, value):
    if value is not None and value <= 0:
        raise click.BadParameter("must be positive")
    return value


def _assignment(axioms: List[str]) -> AxiomAssignment:
    if not axioms:
        return AxiomFactory.get_assignment(DEFAULT_AXIOM)
    if len(axioms) == 1:
        return AxiomFactory.get_assignment(axioms[0])
    return AxiomAssignment({str(i): parse_polish(AxiomFactory.resolve(a)) for i, a in enumerate(axioms, start=1)})


def _read_corpus(path: str, lenient: bool = False) -> Corpus:
    if path.endswith(".json"):
        return import_json(Path(path).read_text(encoding="utf-8"))
    return load_corpus(path, lenient)


def _emit(text: str) -> None:
    click.echo(text, nl=not text.endswith("\n"))


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log debug messages")
@click.option("-q", "--quiet", is_flag=True, help="Log warnings and errors only")
@click.option("--jobs", type=int, default=DEFAULT_JOBS, show_default=True, callback=positive,
              help="Worker threads for analyze and prove")
@click.option("--time-limit", type=float, default=TIME_LIMIT, show_default=True, callback=positive,
              help="Seconds before prove gives up")
@click.option("--cache-cap", type=int, default=DEFAULT_CACHE_CAP, callback=positive,
              help="D-terms kept per prover level, smallest formulas first (default: all)")
@click.pass_context
def cdtools(ctx, verbose: bool, quiet: bool, jobs: int, time_limit: float, cache_cap: Optional[int]):
    """Condensed-detachment proof structures: MGTs, checking, analysis, reduction and search."""
    configure_logging("DEBUG" if verbose else "WARNING" if quiet else None)
    ctx.obj = CliConfig(jobs, time_limit, cache_cap)


@cdtools.command("mgt")
@click.option("--axiom", "axioms", multiple=True,
              help="Axiom name or Polish formula; repeat for labels 1, 2, ...")
@click.option("--d", "dtext", help="D-term in D-notation")
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), help="Corpus file")
@click.option("--label", help="Label of the corpus; all steps when omitted")
@click.option("--route", type=click.Choice(["expand", "lemma"]), default="expand", show_default=True)
@click.option("--term", "as_term", is_flag=True, help="Print the first-order i(...) form")
@click.option("--lenient", is_flag=True, help="Accept dotless multi-digit numerals")
@reports_errors
def mgt_command(axioms, dtext, corpus, label, route, as_term, lenient):
    """Most general theorem of a D-term or of corpus labels."""
    show = (lambda a: repr(a.argument)) if as_term else (lambda a: print_polish(a.argument))
    if (dtext is None) == (corpus is None):
        raise click.UsageError("give exactly one of --d and --corpus")
    if dtext is not None:
        theorem = mgt(parse_dnotation(dtext, lenient), _assignment(list(axioms)))
        if theorem is None:
            click.echo("undefined", err=True)
            raise SystemExit(EXIT_NOT_PROVEN)
        click.echo(show(theorem))
        return
    loaded = _read_corpus(corpus, lenient)
    labels = [label] if label else loaded.delta.linearization()
    undefined = False
    for l in labels:
        theorem = mgt_of_compacted(loaded.delta, l, loaded.alpha, route)
        undefined = undefined or theorem is None
        click.echo(f"{l} {show(theorem) if theorem is not None else 'undefined'}")
    if undefined:
        raise SystemExit(EXIT_NOT_PROVEN)


@cdtools.command("check")
@click.argument("corpus", type=click.Path(exists=True, dir_okay=False))
@click.argument("problem", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--lenient", is_flag=True, help="Accept dotless multi-digit numerals")
@reports_errors
def check_command(corpus, problem, lenient):
    """Verify the roots of CORPUS against the goal of a TPTP PROBLEM."""
    loaded = _read_corpus(corpus, lenient)
    target = load_problem(problem) if problem else Problem(loaded.alpha)
    verdicts = check_proof(loaded.delta, target)
    for root, verdict in verdicts.items():
        status = {True: "proven", False: "not proven", None: "mgt"}[verdict.proven]
        formula = print_polish(verdict.mgt.argument) if verdict.mgt is not None else "undefined"
        sizes = verdict.sizes
        click.echo(f"{root}: {status} {formula} sizes {sizes.c_size}/{sizes.t_size}/{sizes.height}")
    if target.goal is not None and not any(v.proven for v in verdicts.values()):
        raise SystemExit(EXIT_NOT_PROVEN)


@cdtools.command("analyze")
@click.argument("corpus", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["text", "csv", "json"]), default="text", show_default=True)
@click.option("--columns", help="Comma separated property identifiers")
@click.option("--concordance", type=click.Path(dir_okay=False), default=str(CONCORDANCE_FILE),
              help="Named formulas and step labels")
@click.option("--no-concordance", is_flag=True)
@click.option("--mc-budget", type=int, default=MC_CSIZE_BUDGET, show_default=True)
@click.option("--mt-budget", type=int, default=MT_TSIZE_BUDGET, show_default=True)
@click.option("--no-minimal", is_flag=True, help="Skip the MC and MT searches")
@click.option("--no-regularity", is_flag=True, help="Skip RS and RC")
@click.option("--summary", is_flag=True, help="Append maxima, prime rows and DK violations")
@click.option("--output", help="Also save the table under this name in the reports directory")
@click.option("--lenient", is_flag=True)
@click.pass_obj
@reports_errors
def analyze_command(config: CliConfig, corpus, fmt, columns, concordance, no_concordance, mc_budget,
                    mt_budget, no_minimal, no_regularity, summary, output, lenient):
    """Property table with one row per subproof of CORPUS."""
    loaded = _read_corpus(corpus, lenient)
    table = None
    if not no_concordance and Path(concordance).exists():
        table = Concordance.load(Path(concordance))
    rows = analyze(loaded.delta, loaded.alpha, table,
                   mc_budget=None if no_minimal else mc_budget,
                   mt_budget=None if no_minimal else mt_budget,
                   regular=not no_regularity, jobs=config.jobs)
    selected = None
    if columns:
        selected = ["label", "D", "formula"] + [c.strip() for c in columns.split(",")]
        unknown = [c for c in selected[3:] if c not in REPORT_COLUMNS]
        if unknown:
            raise click.BadParameter(f"unknown columns {', '.join(unknown)}", param_hint="--columns")
    text = render_rows(rows, fmt, selected)
    _emit(text)
    if summary:
        overall = aggregate(rows)
        click.echo(f"max FT {overall['max_FT']}, max FH {overall['max_FH']}")
        click.echo(f"prime: {' '.join(overall['prime'])}")
        click.echo(f"DK violations: {' '.join(overall['dk_violations']) or 'none'}")
    if output:
        path = write_report(text, output)
        click.echo(f"saved {path}", err=True)


@cdtools.command("reduce")
@click.argument("corpus", type=click.Path(exists=True, dir_okay=False))
@click.option("--kinds", default="S,C", show_default=True,
              help="Comma separated reduction kinds among NSimp, IS, MS, S, MC, C")
@click.option("--strategy", type=click.Choice(sorted(STRATEGIES)), default="innermost", show_default=True)
@click.option("--restore-n", is_flag=True, help="n-simplify the normal form")
@click.option("--max-steps", type=int, callback=positive)
@click.option("--fail-if-irreducible", is_flag=True, help="Exit with 1 when no step applies")
@click.option("--format", "fmt", type=click.Choice(["cdp", "json"]), default="cdp", show_default=True)
@click.option("--lenient", is_flag=True)
@reports_errors
def reduce_command(corpus, kinds, strategy, restore_n, max_steps, fail_if_irreducible, fmt, lenient):
    """Normalize every root of CORPUS; the trace goes to stderr."""
    try:
        selected = [ReductionKind.parse(k) for k in kinds.split(",") if k.strip()]
    except ValueError as error:
        raise click.BadParameter(str(error), param_hint="--kinds")
    loaded = _read_corpus(corpus, lenient)
    reduced = []
    steps = 0
    for root, d in loaded.delta.expanded_roots().items():
        normal, trace = normalize(d, loaded.alpha, selected, strategy, restore_n, max_steps)
        for step in trace:
            click.echo(f"{root}: {step.describe()}", err=True)
        steps += len(trace)
        reduced.append((root, normal))
    result = Corpus(compact(reduced), loaded.alpha, [g for g in loaded.goals if g in dict(reduced)])
    _emit(export_json(result) if fmt == "json" else print_corpus(result, mgts=True))
    if fail_if_irreducible and steps == 0:
        raise SystemExit(EXIT_NOT_PROVEN)


@cdtools.command("prove")
@click.argument("problem", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--axiom", "axioms", multiple=True, help="Axiom name or Polish formula, without PROBLEM")
@click.option("--goal", help="Goal in Polish notation, without PROBLEM; variables are read as constants")
@click.option("--policy", type=click.Choice(POLICIES), default=DEFAULT_POLICY, show_default=True)
@click.option("--max-level", type=int, default=DEFAULT_MAX_LEVEL, show_default=True)
@click.option("--max-ft", type=int, default=DEFAULT_MAX_FT, show_default=True, callback=positive)
@click.option("--max-fh", type=int, default=DEFAULT_MAX_FH, show_default=True, callback=positive)
@click.option("--max-fv", type=int, callback=positive)
@click.option("--dedup", type=click.Choice(DEDUP_MODES), default="variant", show_default=True)
@click.option("--psp-depth", type=click.IntRange(min=0), default=DEFAULT_PSP_DEPTH, show_default=True,
              help="Subterm depth of PSP partners")
@click.option("--full-psp", is_flag=True, help="Pair each lemma with all of its subterms")
@click.option("--format", "fmt", type=click.Choice(["cdp", "json", "d"]), default="cdp", show_default=True)
@click.pass_obj
@reports_errors
def prove_command(config: CliConfig, problem, axioms, goal, policy, max_level, max_ft, max_fh, max_fv,
                  dedup, psp_depth, full_psp, fmt):
    """Search a proof of the goal of PROBLEM by structure enumeration."""
    if problem:
        target = load_problem(problem)
    elif goal:
        target = Problem(_assignment(list(axioms)), Atom(skolemize(parse_polish(goal))), "goal")
    else:
        raise click.UsageError("give a TPTP problem or --goal")
    settings = EnumPolicy(policy, max_level, max_ft, max_fh, max_fv, dedup,
                          psp_depth=None if full_psp else psp_depth, cache_cap=config.cache_cap,
                          time_limit=config.time_limit, jobs=config.jobs)
    try:
        result = prove(target, settings)
    except Exhausted as error:
        click.echo(level_summary(error.stats), err=True)
        raise
    click.echo(f"proof at level {result.level}, sizes {result.sizes.c_size}/{result.sizes.t_size}/"
               f"{result.sizes.height}", err=True)
    if fmt == "d":
        click.echo(print_dnotation(result.dterm))
        return
    found = Corpus(result.delta, target.axioms, result.delta.roots)
    _emit(export_json(found) if fmt == "json" else print_corpus(found, mgts=True))


@cdtools.command("count")
@click.option("--measure", "measure_name", type=click.Choice(LevelEnumerator.MEASURES), required=True)
@click.option("--upto", type=int, required=True, help="Largest size n; counts for 0..n are printed")
@reports_errors
def count_command(measure_name, upto):
    """Number of distinct single-axiom D-terms per size."""
    if upto < 0:
        raise click.BadParameter("must not be negative", param_hint="--upto")
    click.echo(" ".join(str(count_dterms(measure_name, n)) for n in range(upto + 1)))


@cdtools.command("convert")
@click.argument("source")
@click.option("--from", "source_format", type=click.Choice(["polish", "d", "corpus", "json"]), required=True)
@click.option("--to", "target_format", type=click.Choice(["polish", "term", "d", "corpus", "json"]),
              required=True)
@click.option("--lenient", is_flag=True)
@reports_errors
def convert_command(source, source_format, target_format, lenient):
    """Convert SOURCE (a file or literal text) between notations."""
    path = Path(source)
    text = path.read_text(encoding="utf-8") if path.is_file() else source
    if source_format in ("corpus", "json") and target_format in ("corpus", "json"):
        loaded = import_json(text) if source_format == "json" else parse_corpus(text, lenient)
        _emit(export_json(loaded) if target_format == "json" else print_corpus(loaded))
    elif source_format == "d" and target_format in ("d", "term"):
        d = parse_dnotation(text, lenient)
        click.echo(print_dnotation(d) if target_format == "d" else repr(d))
    elif source_format == "polish" and target_format in ("polish", "term"):
        f = parse_polish(text)
        click.echo(print_polish(f) if target_format == "polish" else repr(f))
    else:
        raise click.UsageError(f"cannot convert {source_format} to {target_format}")
