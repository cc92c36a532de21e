"""
Per-subproof property tables.

``analyze`` relabels the expanded roots of a compacted D-term so that every
distinct compound subproof gets a row, then computes structural properties
(DC … DK), properties of the most general theorem (FC … FO), minimal proof
sizes (MC, MT), regularity (RS, RC) and statistics of the in-place theorems
at all occurrences (IT, IH).
"""
import itertools
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from config.settings import (
    CONCORDANCE_FILE, IMPLICATION, MC_CSIZE_BUDGET, MT_TSIZE_BUDGET, N_LABEL, REPORT_COLUMNS,
)
from core.dterms import (
    CompactedDTerm, DTerm, LevelEnumerator, c_gt, compact, dag_stats, is_prime, leaves_in_order, measure,
    prim, strictly_contains, successive_heights,
)
from core.errors import NonImplicational, NotATheorem, NotCompound
from core.reductions import is_c_regular, is_s_regular
from core.semantics import Atom, AxiomAssignment, tree_positions
from core.terms import Term, canonical, compacted_size, subsumes, variables
from notations.d_notation import print_dnotation
from notations.polish_notation import parse_polish, print_polish
from utils.helpers import render_table, rounded_median

logger = logging.getLogger(__name__)

ORGANIC = "organic"
WEAKLY_ORGANIC = "weakly-organic"
NEITHER = "neither"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class SizeBound:
    """Exact minimal size (lo == hi) or an interval; hi None means unbounded."""

    lo: int
    hi: Optional[int]

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def __str__(self) -> str:
        if self.exact:
            return str(self.lo)
        return f"[{self.lo},{self.hi if self.hi is not None else '∞'}]"


# ---------------------------------------------------------------------------
# structural relationship of premises

def ds_relation(d: DTerm) -> str:
    """DS tag of D(d1, d2).

    "=" for identical premises, "▷n" for an n minor premise, "▷"/"◁" when one
    premise strictly contains the other (prefixed or suffixed by the label
    of a primitive premise), ">c"/"<c" for the strict compaction ordering,
    "none" otherwise.

    Raises:
        NotCompound: if d is primitive
    """
    if d.is_constant:
        raise NotCompound(f"{d!r} has no premises")
    major, minor = d.args
    if major is minor:
        return "="
    if minor.is_constant and minor.name == N_LABEL:
        return "▷n"
    if strictly_contains(major, minor):
        return "▷" + (minor.name if minor.is_constant else "")
    if strictly_contains(minor, major):
        return (major.name if major.is_constant else "") + "◁"
    if c_gt(major, minor):
        return ">c"
    if c_gt(minor, major):
        return "<c"
    return "none"


# ---------------------------------------------------------------------------
# theoremhood

def _check_implicational(f: Term) -> None:
    stack = [f]
    while stack:
        t = stack.pop()
        if t.is_constant or (t.is_compound and (t.functor != IMPLICATION or len(t.args) != 2)):
            raise NonImplicational(f"{t!r} is not built from implication and variables")
        if t.is_compound:
            stack.extend(t.args)


def is_tautology(f: Term) -> bool:
    """
    Truth of f under every two-valued assignment with classical implication.

    Raises:
        NonImplicational: if f contains constants or other functors
    """
    _check_implicational(f)
    names = variables(f)
    for values in itertools.product((False, True), repeat=len(names)):
        valuation = dict(zip(names, values))
        memo: Dict[Term, bool] = {}

        def value(t: Term) -> bool:
            if t.is_variable:
                return valuation[t]
            done = memo.get(t)
            if done is None:
                done = (not value(t.args[0])) or value(t.args[1])
                memo[t] = done
            return done
        if not value(f):
            return False
    return True


def organic_status(f: Term) -> str:
    """
    Organic if no strict subformula is a theorem; weakly organic if f is
    i(p, g) with a variable p not in g and g organic; neither otherwise.

    Raises:
        NotATheorem: if f is not a tautology
    """
    if not is_tautology(f):
        raise NotATheorem(f"{f!r} is not a theorem")
    if not any(is_tautology(t) for t in _strict_compound_subterms(f)):
        return ORGANIC
    head, body = f.args
    if head.is_variable and head not in variables(body) and body.is_compound:
        if is_tautology(body) and organic_status(body) == ORGANIC:
            return WEAKLY_ORGANIC
    return NEITHER


def _strict_compound_subterms(f: Term) -> List[Term]:
    found: Dict[Term, None] = {}
    stack = list(f.args) if f.is_compound else []
    while stack:
        t = stack.pop()
        if t.is_compound and t not in found:
            found[t] = None
            stack.extend(t.args)
    return list(found)


def _organic_column(argument: Term) -> str:
    try:
        return organic_status(argument)
    except NotATheorem:
        return UNDETERMINED


# ---------------------------------------------------------------------------
# minimal proofs

@lru_cache(maxsize=8)
def _proof_levels(alpha: AxiomAssignment, measure_name: str) -> LevelEnumerator:
    return LevelEnumerator(measure_name, alpha.labels, keep=lambda d: alpha.mgt_argument(d) is not None)


def min_proof_size(goal: Atom, alpha: AxiomAssignment, measure_name: str = "csize",
                   budget: Optional[int] = None, upper: Optional[int] = None) -> SizeBound:
    """
    Smallest size of a D-term whose MGT subsumes the goal.

    Args:
        goal: the formula to prove; its variables are treated as constants
        alpha: the axiom assignment
        measure_name: "csize" or "tsize"
        budget: largest size enumerated exhaustively
        upper: size of a known proof, reported as upper bound

    Returns:
        The exact size, or [budget + 1, upper] when no proof up to the budget exists
    """
    if measure_name not in ("csize", "tsize"):
        raise ValueError(f"minimal proof size is defined for csize and tsize, not {measure_name!r}")
    if budget is None:
        budget = MC_CSIZE_BUDGET if measure_name == "csize" else MT_TSIZE_BUDGET
    levels = _proof_levels(alpha, measure_name)
    target = goal.argument
    for n in range(budget + 1):
        for d in levels.level(n):
            argument = alpha.mgt_argument(d)
            if argument.size <= target.size and subsumes(argument, target):
                return SizeBound(n, n)
    return SizeBound(budget + 1, upper)


# ---------------------------------------------------------------------------
# in-place theorem statistics and regularity

def _occurrence_ipts(roots: Sequence[DTerm], alpha: AxiomAssignment) -> Dict[DTerm, List[Term]]:
    found: Dict[DTerm, List[Term]] = {}
    for root in roots:
        table = alpha.ipt_table(root)
        if table is None:
            continue
        for p, node in tree_positions(root):
            if node.is_constant and node.name == N_LABEL:
                continue
            found.setdefault(node, []).append(table[p])
    return found


def _ipt_summary(terms: Sequence[Term]) -> Tuple[Optional[int], ...]:
    if not terms:
        return (None, None, None, None)
    sizes = [t.size for t in terms]
    heights = [t.height for t in terms]
    return (max(sizes), rounded_median(sizes), max(heights), rounded_median(heights))


def ipt_stats(delta: CompactedDTerm, alpha: AxiomAssignment, label: str) -> Tuple[Optional[int], ...]:
    """
    (IT_U, IT_M, IH_U, IH_M): maximum and rounded median of tree size and
    height of the in-place theorems at all occurrences of a subproof in the
    expanded roots.
    """
    d = delta.expand(label) if label in delta else prim(label)
    roots = list(delta.expanded_roots().values())
    return _ipt_summary(_occurrence_ipts(roots, alpha).get(d, []))


def regularity(delta: CompactedDTerm, alpha: AxiomAssignment, label: str) -> Tuple[bool, bool]:
    """(RS, RC) of the subproof named by label, taken as a proof on its own."""
    d = delta.expand(label) if label in delta else prim(label)
    return is_s_regular(d, alpha), is_c_regular(d, alpha)


# ---------------------------------------------------------------------------
# concordance

@dataclass
class Concordance:
    """Named formulas and step labels of known proofs, keyed by canonical formula."""

    named: Dict[Term, List[str]] = field(default_factory=dict)
    names: Dict[str, List[str]] = field(default_factory=dict)
    proofs: Dict[str, Dict[Term, List[str]]] = field(default_factory=dict)

    @classmethod
    def load(cls, path: Path = CONCORDANCE_FILE) -> "Concordance":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        concordance = cls()
        for entry in raw.get("named", []):
            key = canonical(parse_polish(entry["formula"]))
            concordance.named.setdefault(key, []).append(entry["id"])
            concordance.names[entry["id"]] = list(entry.get("names", []))
        for proof, steps in raw.get("proofs", {}).items():
            column = concordance.proofs.setdefault(proof, {})
            for label, formula in steps.items():
                column.setdefault(canonical(parse_polish(formula)), []).append(label)
        logger.debug("concordance: %d named formulas, proofs %s", len(concordance.names), list(concordance.proofs))
        return concordance

    def lookup(self, argument: Optional[Term]) -> Dict[str, Optional[str]]:
        result: Dict[str, Optional[str]] = {proof: None for proof in self.proofs}
        result["NN"] = None
        if argument is None:
            return result
        key = canonical(argument)
        for proof, column in self.proofs.items():
            if key in column:
                result[proof] = ",".join(column[key])
        if key in self.named:
            result["NN"] = ",".join(self.named[key])
        return result


# ---------------------------------------------------------------------------
# property rows

@dataclass
class PropertyRow:
    label: str
    dterm: str
    formula: Optional[str]
    values: Dict[str, object] = field(default_factory=dict)

    def __getitem__(self, column: str):
        return self.values.get(column)

    def to_dict(self) -> Dict[str, object]:
        row = {"label": self.label, "D": self.dterm, "formula": self.formula}
        for column in REPORT_COLUMNS:
            value = self.values.get(column)
            row[column] = str(value) if isinstance(value, SizeBound) else value
        return row


def relabel(delta: CompactedDTerm) -> CompactedDTerm:
    """Fully labelled compaction of the expanded roots: one label per compound subproof."""
    roots = [(None, d) for d in delta.expanded_roots().values() if d.is_compound]
    return compact(roots, label_all=True)


def analyze(delta: CompactedDTerm, alpha: AxiomAssignment, concordance: Optional[Concordance] = None,
            mc_budget: Optional[int] = MC_CSIZE_BUDGET, mt_budget: Optional[int] = MT_TSIZE_BUDGET,
            regular: bool = True, jobs: int = 1) -> List[PropertyRow]:
    """
    One property row per axiom and per distinct compound subproof.

    Args:
        delta: the compacted proof
        alpha: the axiom assignment
        concordance: named formulas and step labels for the MER/ŁUK/NN columns
        mc_budget: exhaustive budget of the minimal compacted size search; None skips MC
        mt_budget: exhaustive budget of the minimal tree size search; None skips MT
        regular: compute RS and RC
        jobs: number of worker threads for the rows

    Returns:
        Rows ordered axioms first, then compound subproofs in post-order of first visit
    """
    full = relabel(delta)
    roots = list(delta.expanded_roots().values())
    stats = dag_stats(full)
    ipts = _occurrence_ipts(roots, alpha)
    present = {leaf.name for root in roots for leaf in leaves_in_order(root)}
    axiom_rows = [label for label in alpha.labels if label in present]
    labels = axiom_rows + full.linearization()

    def row(label: str) -> PropertyRow:
        d = full.expand(label) if label in full.bindings else prim(label)
        argument = alpha.mgt_argument(d)
        sizes = measure(d)
        values: Dict[str, object] = {
            "DC": sizes.c_size, "DT": sizes.t_size, "DH": sizes.height, "DX": sizes.sc_size,
            "DI": stats.incoming.get(label, 0), "DR": stats.occurrences.get(label, 0),
            "DS": ds_relation(d) if d.is_compound else None,
            "DP": is_prime(d),
        }
        values["DK_L"], values["DK_R"] = successive_heights(d)
        if concordance is not None:
            values.update(concordance.lookup(argument))
        if argument is not None:
            values.update({
                "FC": compacted_size(argument), "FT": argument.size, "FH": argument.height,
                "FV": len(variables(argument)), "FO": _organic_column(argument),
            })
            goal = Atom(argument)
            if mc_budget is not None:
                values["MC"] = min_proof_size(goal, alpha, "csize", mc_budget, upper=sizes.c_size)
            if mt_budget is not None:
                values["MT"] = min_proof_size(goal, alpha, "tsize", mt_budget, upper=sizes.t_size)
            if regular:
                values["RS"], values["RC"] = is_s_regular(d, alpha), is_c_regular(d, alpha)
        summary = _ipt_summary(ipts.get(d, []))
        values["IT_U"], values["IT_M"], values["IH_U"], values["IH_M"] = summary
        logger.debug("row %s done", label)
        dterm = print_dnotation(full.bindings[label]) if label in full.bindings else label
        return PropertyRow(label, dterm, print_polish(argument) if argument is not None else None, values)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            rows = list(executor.map(row, labels))
    else:
        rows = [row(label) for label in labels]
    logger.info("analyzed %d subproofs", len(rows))
    return rows


def render_rows(rows: Sequence[PropertyRow], fmt: str = "text",
                columns: Optional[Sequence[str]] = None) -> str:
    """Render property rows as text, CSV or JSON with the property identifiers as columns."""
    columns = list(columns or ["label", "D", "formula"] + REPORT_COLUMNS)
    return render_table([r.to_dict() for r in rows], columns, fmt)


def aggregate(rows: Sequence[PropertyRow]) -> Mapping[str, object]:
    """Overall figures of a table: maxima of FT/FH and the rows violating DK² ≤ 2.5·DH."""
    formulas = [r for r in rows if r["FT"] is not None]
    return {
        "max_FT": max((r["FT"] for r in formulas), default=None),
        "max_FH": max((r["FH"] for r in formulas), default=None),
        "prime": [r.label for r in rows if r["DP"]],
        "dk_violations": [
            r.label for r in rows
            if max(r["DK_L"], r["DK_R"]) ** 2 > 2.5 * r["DH"]
        ],
    }
