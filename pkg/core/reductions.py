"""
Proof-shortening rewrites on D-terms.

Single-occurrence replacements (IS, MS, S) substitute a subproof by one of
its own subproofs at one position. All-occurrence replacements (MC, C)
replace every occurrence of a subproof e by a proof e' that is strictly
smaller with respect to the compaction ordering. ``normalize`` applies them
until none is left, each step decreasing ⟨c-size, sc-size, t-size⟩.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Set, Tuple, Union

from config.settings import N_LABEL
from core.dterms import (
    D, N, DTerm, SizeReport, c_gt, leaves_in_order, measure, replace_all, sub, subeq, subeq_preorder,
)
from core.errors import PositionOutOfRange, UndefinedMgt
from core.semantics import AxiomAssignment, allows_n_minor, tree_positions
from core.terms import Position, Term, format_position, replace_at, subsumes, subterm_at

logger = logging.getLogger(__name__)


class ReductionKind(Enum):
    NSIMP = "NSimp"
    IS = "IS"
    MS = "MS"
    S = "S"
    MC = "MC"
    C = "C"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, text: str) -> "ReductionKind":
        for kind in cls:
            if kind.value.lower() == text.strip().lower():
                return kind
        raise ValueError(f"unknown reduction kind {text!r}")


S_FAMILY = (ReductionKind.IS, ReductionKind.MS, ReductionKind.S)
C_FAMILY = (ReductionKind.MC, ReductionKind.C)


@dataclass(frozen=True)
class ReductionStep:
    kind: ReductionKind
    site: Union[Tuple[Position, Position], Tuple[DTerm, DTerm]]
    replacement: DTerm
    before: SizeReport
    after: SizeReport

    def describe(self) -> str:
        if self.kind in S_FAMILY:
            p, q = self.site
            where = f"at {format_position(p)} by {format_position(q)}"
        else:
            e, e_new = self.site
            where = f"{e!r} ↦ {e_new!r}"
        return f"{self.kind} {where}: {self.before.key()} → {self.after.key()}"


def _mgt_or_raise(alpha: AxiomAssignment, d: DTerm) -> Term:
    argument = alpha.mgt_argument(d)
    if argument is None:
        raise UndefinedMgt(f"MGT of {d!r} is undefined")
    return argument


# ---------------------------------------------------------------------------
# n-simplification

def n_simplify(d: DTerm, alpha: AxiomAssignment) -> DTerm:
    """Replace the minor premise by n wherever the major premise's MGT allows it.

    Raises:
        UndefinedMgt: if the MGT of a major premise is undefined
    """
    memo: Dict[DTerm, DTerm] = {}

    def walk(x: DTerm) -> DTerm:
        if x.is_constant:
            return x
        done = memo.get(x)
        if done is None:
            major, minor = x.args
            if allows_n_minor(_mgt_or_raise(alpha, major)):
                done = D(walk(major), N)
            else:
                done = D(walk(major), walk(minor))
            memo[x] = done
        return done
    return walk(d)


# ---------------------------------------------------------------------------
# single-occurrence reductions

def _ipt_table_or_raise(d: DTerm, alpha: AxiomAssignment) -> Dict[Position, Term]:
    table = alpha.ipt_table(d)
    if table is None:
        raise UndefinedMgt(f"MGT of {d!r} is undefined")
    return table


def find_s_family(d: DTerm, alpha: AxiomAssignment, kind: ReductionKind,
                  first_only: bool = False) -> List[Tuple[Position, Position]]:
    """All position pairs (p, p') with p strictly above p' where the kind's guard holds.

    IS compares the in-place theorems at p and p' literally; MS asks whether
    Mgt(d|p') subsumes Mgt(d|p); S whether Mgt(d|p') subsumes Ipt(d, p).
    Positions p' holding ``n`` are skipped.

    Raises:
        UndefinedMgt: if the MGT of d is undefined
    """
    if kind not in S_FAMILY:
        raise ValueError(f"{kind} is not a single-occurrence reduction")
    table = _ipt_table_or_raise(d, alpha)
    found: List[Tuple[Position, Position]] = []
    for p, node in tree_positions(d):
        if node.is_constant:
            continue
        verdicts: Dict[DTerm, bool] = {}
        for relative, e in tree_positions(node)[1:]:
            if e.is_constant and e.name == N_LABEL:
                continue
            q = p + relative
            if kind is ReductionKind.IS:
                holds = table[q] is table[p]
            else:
                holds = verdicts.get(e)
                if holds is None:
                    target = alpha.mgt_argument(node) if kind is ReductionKind.MS else table[p]
                    holds = subsumes(_mgt_or_raise(alpha, e), target)
                    verdicts[e] = holds
            if holds:
                found.append((p, q))
                if first_only:
                    return found
    return found


def apply_s_reduction(d: DTerm, p: Position, q: Position) -> DTerm:
    """d with the subproof at p replaced by the subproof at q, q strictly below p.

    Raises:
        PositionOutOfRange: if q is not strictly below p or not a position of d
    """
    p, q = tuple(p), tuple(q)
    if len(q) <= len(p) or q[:len(p)] != p:
        raise PositionOutOfRange(format_position(q), d)
    return replace_at(d, p, subterm_at(d, q))


def is_s_regular(d: DTerm, alpha: AxiomAssignment, kind: ReductionKind = ReductionKind.S) -> bool:
    """No S-family pair of the given kind exists in d."""
    if d.is_constant:
        return True
    return not find_s_family(d, alpha, kind, first_only=True)


# ---------------------------------------------------------------------------
# all-occurrence reductions

def c_candidates(e: DTerm, alpha: AxiomAssignment) -> List[DTerm]:
    """Proofs e' with e >_c e' built from the subproofs and axiom leaves of e.

    Candidates need a defined MGT and a legal use of every n minor premise.
    """
    if e.is_constant:
        return []
    strict = sub(e)
    leaves = [leaf for leaf in leaves_in_order(e) if leaf.name != N_LABEL]
    parts = [x for x in subeq_preorder(e)[1:]] + leaves
    result: List[DTerm] = []
    if strict:
        result.extend(leaves)
    for a in parts:
        sa = subeq(a)
        for b in parts:
            if len(sa | subeq(b)) == len(strict):
                continue
            result.append(D(a, b))
    return [x for x in result if _usable(x, alpha)]


def _usable(x: DTerm, alpha: AxiomAssignment) -> bool:
    if alpha.mgt_argument(x) is None:
        return False
    for node in subeq(x):
        major, minor = node.args
        if minor is N and not allows_n_minor(alpha.mgt_argument(major)):
            return False
    return True


def find_c_family(d: DTerm, alpha: AxiomAssignment, kind: ReductionKind,
                  first_only: bool = False) -> List[Tuple[DTerm, DTerm]]:
    """Pairs (e, e') with e a compound subproof of d and e >_c e'.

    MC asks whether Mgt(e') subsumes Mgt(e); C whether Mgt(e') subsumes the
    in-place theorem of every occurrence of e. Pairs are ordered by
    descending c-size of e, then ascending c-size of e'.

    Raises:
        UndefinedMgt: if the MGT of d is undefined
    """
    if kind not in C_FAMILY:
        raise ValueError(f"{kind} is not an all-occurrence reduction")
    if d.is_constant:
        return []
    table = _ipt_table_or_raise(d, alpha)
    occurrences: Dict[DTerm, List[Position]] = {}
    for p, node in tree_positions(d):
        if node.is_compound:
            occurrences.setdefault(node, []).append(p)

    found: List[Tuple[DTerm, DTerm]] = []
    for e in sorted(subeq_preorder(d), key=lambda x: -len(subeq(x))):
        candidates = sorted(c_candidates(e, alpha), key=lambda x: len(subeq(x)))
        for e_new in candidates:
            pattern = alpha.mgt_argument(e_new)
            if kind is ReductionKind.MC:
                holds = subsumes(pattern, _mgt_or_raise(alpha, e))
            else:
                holds = all(subsumes(pattern, table[p]) for p in occurrences[e])
            if holds:
                found.append((e, e_new))
                if first_only:
                    return found
    return found


def apply_c_reduction(d: DTerm, e: DTerm, e_new: DTerm) -> DTerm:
    """d[e ↦ e']: every occurrence of e replaced by e'."""
    if not c_gt(e, e_new):
        raise ValueError(f"{e!r} is not strictly above {e_new!r} in the compaction ordering")
    return replace_all(d, e, e_new)


def is_c_regular(d: DTerm, alpha: AxiomAssignment, kind: ReductionKind = ReductionKind.C) -> bool:
    """No C-family pair of the given kind exists in d."""
    if d.is_constant:
        return True
    return not find_c_family(d, alpha, kind, first_only=True)


# ---------------------------------------------------------------------------
# normalization

def _postorder_key(position: Position) -> Position:
    return tuple(position) + (3,)


def _preorder_key(position: Position) -> Position:
    return tuple(position)


STRATEGIES: Dict[str, Callable[[Position], Position]] = {
    "innermost": _postorder_key,
    "outermost": _preorder_key,
}


def _s_step(d: DTerm, alpha: AxiomAssignment, kinds: Iterable[ReductionKind],
            order: Callable[[Position], Position]) -> Optional[ReductionStep]:
    before = measure(d)
    options: Dict[Tuple[Position, Position], ReductionKind] = {}
    for kind in kinds:
        for pair in find_s_family(d, alpha, kind):
            options.setdefault(pair, kind)
    for p, q in sorted(options, key=lambda pq: (order(pq[0]), pq[1])):
        reduced = apply_s_reduction(d, p, q)
        after = measure(reduced)
        if after.key() < before.key():
            return ReductionStep(options[(p, q)], (p, q), reduced, before, after)
    return None


def _c_step(d: DTerm, alpha: AxiomAssignment, kinds: Iterable[ReductionKind]) -> Optional[ReductionStep]:
    before = measure(d)
    for kind in kinds:
        for e, e_new in find_c_family(d, alpha, kind):
            reduced = apply_c_reduction(d, e, e_new)
            after = measure(reduced)
            if after.key() < before.key():
                return ReductionStep(kind, (e, e_new), reduced, before, after)
    return None


def normalize(d: DTerm, alpha: AxiomAssignment, kinds: Iterable[ReductionKind],
              strategy: str = "innermost", restore_n: bool = False,
              max_steps: Optional[int] = None) -> Tuple[DTerm, List[ReductionStep]]:
    """Rewrite d until no reduction of the selected kinds applies.

    Single-occurrence reductions are tried before all-occurrence ones; the
    whole term is rescanned after every step. A step is taken only if it
    decreases ⟨c-size, sc-size, t-size⟩ lexically.

    Args:
        d: the D-term
        alpha: the axiom assignment
        kinds: selected reduction kinds; NSimp runs once before the others
        strategy: "innermost" (post-order first) or "outermost" (preorder first)
            for choosing the single-occurrence site
        restore_n: run n-simplification again on the result
        max_steps: stop after this many steps

    Returns:
        The normal form and the trace of steps

    Raises:
        UndefinedMgt: if an MGT needed on the way is undefined
    """
    selected: Set[ReductionKind] = set(kinds)
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    order = STRATEGIES[strategy]
    s_kinds = [k for k in S_FAMILY if k in selected]
    c_kinds = [k for k in C_FAMILY if k in selected]
    trace: List[ReductionStep] = []

    if ReductionKind.NSIMP in selected:
        simplified = n_simplify(d, alpha)
        if simplified is not d:
            trace.append(ReductionStep(ReductionKind.NSIMP, (d, simplified), simplified,
                                       measure(d), measure(simplified)))
            d = simplified

    if d.is_constant:
        return d, trace
    _mgt_or_raise(alpha, d)

    while max_steps is None or len(trace) < max_steps:
        step = _s_step(d, alpha, s_kinds, order) if s_kinds else None
        if step is None and c_kinds:
            step = _c_step(d, alpha, c_kinds)
        if step is None:
            break
        logger.debug("reduction step %s", step.describe())
        trace.append(step)
        d = step.replacement
        if d.is_constant:
            break

    if restore_n and not d.is_constant:
        d = n_simplify(d, alpha)
    logger.info("normalized in %d steps to %s", len(trace), measure(d))
    return d, trace
