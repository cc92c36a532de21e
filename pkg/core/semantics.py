"""
Formulas attached to proof structures.

A D-term together with an axiom assignment determines, for every position,
an in-place theorem (IPT) through one global unification of its pairings,
and for every subterm a most general theorem (MGT). MGTs are computed bottom
up and memoized per shared subterm; IPTs are computed from the global
pairing set.
"""
import logging
import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from config.settings import IMPLICATION, MGT_CACHE_SIZE, N_LABEL
from core.dterms import CompactedDTerm, DTerm, SizeReport, measure, prim, subeq
from core.errors import (
    InvalidNUse, MissingAxiom, NonPositionalVariable, NotUnifiable, PositionOutOfRange, UnknownLabel,
)
from core.terms import (
    EPSILON, Constant, Position, PosVar, Term, Unifier, Variable, canonical, format_position,
    imp, make_pair, subsumes, substitute, variables,
)

logger = logging.getLogger(__name__)

IPT_CACHE_SIZE = 32


@dataclass(frozen=True)
class Atom:
    """P(argument); P is the single unary predicate."""

    argument: Term

    def __str__(self) -> str:
        return f"P({self.argument!r})"


def y_var(position: Position) -> Variable:
    return Variable(PosVar("y", tuple(position)))


def x_var(position: Position, index: int) -> Variable:
    return Variable(PosVar("x", tuple(position), index))


def standardize(term: Term, position: Position = EPSILON) -> Term:
    """Rename the variables of term to x_p^1, x_p^2, ... in first-occurrence order."""
    mapping = {v: x_var(position, i) for i, v in enumerate(variables(term), start=1)}
    return substitute(term, mapping)


def shift(term: Term, position: Position) -> Term:
    """Move every positional variable of term below position.

    Raises:
        NonPositionalVariable: if term has a variable that is not positional
    """
    if not position:
        for v in variables(term):
            if not isinstance(v.name, PosVar):
                raise NonPositionalVariable(f"{v} is not a positional variable")
        return term
    mapping = {}
    for v in variables(term):
        if not isinstance(v.name, PosVar):
            raise NonPositionalVariable(f"{v} is not a positional variable")
        kind, where, index = v.name
        mapping[v] = Variable(PosVar(kind, tuple(position) + where, index))
    return substitute(term, mapping)


def skolemize(term: Term) -> Term:
    """Ground instance of term: variables become constants a, b, c, ..."""
    letters = "abcdefgh"
    mapping = {
        v: Constant(letters[i] if i < len(letters) else f"c{i}")
        for i, v in enumerate(variables(term))
    }
    return substitute(term, mapping)


def allows_n_minor(argument: Optional[Term]) -> bool:
    """Whether a major premise with this MGT argument may take n as minor premise.

    True for a variable, and for i(x, t) with a variable x not occurring in t.
    """
    if argument is None:
        return False
    if argument.is_variable:
        return True
    if argument.is_compound and argument.functor == IMPLICATION:
        head, body = argument.args
        return head.is_variable and head not in variables(body)
    return False


def detach(major: Term, minor: Term) -> Optional[Term]:
    """Canonical conclusion of detaching minor from major, or None when they do not unify."""
    conclusion = y_var(EPSILON)
    unifier = Unifier()
    try:
        unifier.unify(standardize(major, (1,)), imp(standardize(minor, (2,)), conclusion))
    except NotUnifiable:
        return None
    return canonical(unifier.resolve(conclusion))


class AxiomAssignment:
    """Mapping from primitive labels to axiom terms over variables x_ε^i.

    The assignment keeps the MGT arguments of the MGT_CACHE_SIZE D-terms it
    has used most recently.
    """

    def __init__(self, axioms: Mapping[str, Term]):
        if N_LABEL in axioms:
            raise ValueError(f"{N_LABEL!r} cannot be assigned an axiom")
        self.terms: Dict[str, Term] = {str(l): standardize(t) for l, t in axioms.items()}
        self._mgt: "OrderedDict[DTerm, Optional[Term]]" = OrderedDict()
        self._ipt: "OrderedDict[DTerm, Optional[Dict[Position, Term]]]" = OrderedDict()
        self._lock = threading.RLock()

    def __getitem__(self, label: str) -> Term:
        try:
            return self.terms[label]
        except KeyError:
            raise MissingAxiom(label) from None

    def __contains__(self, label: str) -> bool:
        return label in self.terms

    def __repr__(self) -> str:
        return f"AxiomAssignment({', '.join(f'{l}: {canonical(t)!r}' for l, t in self.terms.items())})"

    @property
    def labels(self) -> List[str]:
        return list(self.terms)

    def mgt_argument(self, d: DTerm) -> Optional[Term]:
        """Canonical argument of Mgt(d), or None when undefined."""
        with self._lock:
            if d in self._mgt:
                self._mgt.move_to_end(d)
                return self._mgt[d]
        if d.is_constant:
            if d.name == N_LABEL:
                result = canonical(x_var(EPSILON, 0))
            else:
                result = canonical(self[d.name])
        else:
            major = self.mgt_argument(d.args[0])
            minor = self.mgt_argument(d.args[1])
            result = None if major is None or minor is None else detach(major, minor)
        with self._lock:
            self._mgt[d] = result
            if len(self._mgt) > MGT_CACHE_SIZE:
                self._mgt.popitem(last=False)
        return result

    def ipt_table(self, d: DTerm) -> Optional[Dict[Position, Term]]:
        """IPT arguments of all positions of d, or None when undefined."""
        with self._lock:
            if d in self._ipt:
                self._ipt.move_to_end(d)
                return self._ipt[d]
        unifier = Unifier()
        table: Optional[Dict[Position, Term]]
        try:
            for pairing in pairings(d, self):
                unifier.unify(pairing.left, pairing.right)
        except NotUnifiable:
            table = None
        else:
            table = {p: unifier.resolve(y_var(p)) for p, _ in tree_positions(d)}
        with self._lock:
            self._ipt[d] = table
            if len(self._ipt) > IPT_CACHE_SIZE:
                evicted, _ = self._ipt.popitem(last=False)
                logger.debug("evicted IPT table of a D-term of size %d", evicted.size)
        return table


@dataclass(frozen=True)
class Problem:
    """Axioms plus an optional ground goal."""

    axioms: AxiomAssignment
    goal: Optional[Atom] = None
    name: str = ""

    def __post_init__(self):
        if self.goal is not None and not self.goal.argument.ground:
            raise ValueError(f"goal of {self.name or 'problem'} must be ground")


@dataclass(frozen=True)
class Pairing:
    """The pair {left, right} attached to a position of a D-term."""

    position: Position
    left: Term
    right: Term

    @property
    def pair(self) -> Tuple[Term, Term]:
        return make_pair(self.left, self.right)

    def __str__(self) -> str:
        return f"{format_position(self.position)}: {{{self.left!r}, {self.right!r}}}"


def tree_positions(d: DTerm) -> List[Tuple[Position, DTerm]]:
    """(position, subterm) for every position of d as a tree, in preorder."""
    result: List[Tuple[Position, DTerm]] = []
    stack: List[Tuple[Position, DTerm]] = [(EPSILON, d)]
    while stack:
        here, node = stack.pop()
        result.append((here, node))
        if node.is_compound:
            stack.append((here + (2,), node.args[1]))
            stack.append((here + (1,), node.args[0]))
    return result


def pairings(d: DTerm, alpha: AxiomAssignment) -> List[Pairing]:
    """One pairing per position of d.

    Raises:
        MissingAxiom: if a leaf label other than n has no axiom
    """
    result = []
    for here, node in tree_positions(d):
        if node.is_compound:
            result.append(Pairing(here, y_var(here + (1,)), imp(y_var(here + (2,)), y_var(here))))
        elif node.name == N_LABEL:
            result.append(Pairing(here, y_var(here), x_var(here, 0)))
        else:
            result.append(Pairing(here, y_var(here), shift(alpha[node.name], here)))
    return result


def mgt(d: DTerm, alpha: AxiomAssignment) -> Optional[Atom]:
    """Most general theorem of d, canonically renamed, or None when undefined."""
    argument = alpha.mgt_argument(d)
    return Atom(argument) if argument is not None else None


def ipt(d: DTerm, position: Position, alpha: AxiomAssignment) -> Optional[Atom]:
    """In-place theorem of d at position, or None when undefined.

    Variables are the positional variables of the global unification and are
    not renamed.

    Raises:
        PositionOutOfRange: if position is not a position of d
    """
    table = alpha.ipt_table(d)
    if table is None:
        node = d
        for i in position:
            if node.is_constant or i not in (1, 2):
                raise PositionOutOfRange(format_position(position), d)
            node = node.args[i - 1]
        return None
    if tuple(position) not in table:
        raise PositionOutOfRange(format_position(position), d)
    return Atom(table[tuple(position)])


def lemma_theorems(delta: CompactedDTerm, alpha: AxiomAssignment) -> Dict[str, Optional[Term]]:
    """MGT argument of every label, computed with lower labels used as axioms."""
    theorems: Dict[str, Optional[Term]] = {}
    memo: Dict[DTerm, Optional[Term]] = {}

    def argument_of(e: DTerm) -> Optional[Term]:
        if e.is_constant:
            return theorems[e.name] if e.name in theorems else alpha.mgt_argument(e)
        if e not in memo:
            major = argument_of(e.args[0])
            minor = argument_of(e.args[1])
            memo[e] = None if major is None or minor is None else detach(major, minor)
        return memo[e]

    for label in delta.linearization():
        theorems[label] = argument_of(delta.bindings[label])
    for alias, target in delta.aliases.items():
        theorems[alias] = argument_of(prim(target))
    return theorems


def mgt_of_compacted(delta: CompactedDTerm, label: str, alpha: AxiomAssignment,
                     route: str = "expand") -> Optional[Atom]:
    """MGT of a label of a compacted D-term.

    Args:
        delta: the compacted D-term
        label: a label of delta or an axiom label
        alpha: the axiom assignment
        route: "expand" computes the MGT of the expanded tree; "lemma" treats
            lower labels as axioms whose terms are their own MGTs

    Returns:
        The MGT, or None when undefined
    """
    if label not in delta:
        if label in alpha:
            return mgt(prim(label), alpha)
        raise UnknownLabel(f"label {label!r} is neither defined nor an axiom")
    if route == "expand":
        return mgt(delta.expand(label), alpha)
    if route == "lemma":
        argument = lemma_theorems(delta, alpha)[label]
        return Atom(argument) if argument is not None else None
    raise ValueError(f"unknown route {route!r}")


def check_n_uses(d: DTerm, alpha: AxiomAssignment) -> None:
    """Raise InvalidNUse if some D(d1, n) has a major premise d1 that forbids it."""
    for node in subeq(d):
        major, minor = node.args
        if minor.is_constant and minor.name == N_LABEL:
            if not allows_n_minor(alpha.mgt_argument(major)):
                raise InvalidNUse(f"n used as minor premise of {major!r}")


@dataclass(frozen=True)
class Verdict:
    label: str
    mgt: Optional[Atom]
    proven: Optional[bool]
    sizes: SizeReport


def check_proof(delta: CompactedDTerm, problem: Problem) -> Dict[str, Verdict]:
    """Verdict per root: proven iff the root's MGT subsumes the ground goal.

    For a problem without goal the verdicts carry only the MGTs.
    """
    verdicts = {}
    for root in delta.roots:
        d = delta.expand(root)
        check_n_uses(d, problem.axioms)
        theorem = mgt(d, problem.axioms)
        proven = None
        if problem.goal is not None:
            proven = theorem is not None and subsumes(theorem.argument, problem.goal.argument)
        verdicts[root] = Verdict(root, theorem, proven, measure(d))
        logger.debug("root %s: %s (%s)", root, theorem, proven)
    return verdicts
