"""
Condensed-detachment problems in a subset of TPTP CNF.

Only the clause shapes of CD problems are recognized: the detachment clause
``~P(i(X,Y)) | ~P(X) | P(Y)`` with its literals in any order, unit positive
axioms and a unit negative ground goal. The unary predicate and the binary
functor may have any name, e.g. ``is_a_theorem`` and ``implies``.
"""
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Tuple, Union

from core.errors import Malformed, MultipleDetClauses, UnrecognizedClauseShape
from core.semantics import Atom, AxiomAssignment, Problem
from core.terms import Constant, Term, Variable, imp
from notations.base_notation import BaseNotation

logger = logging.getLogger(__name__)

_BLOCK_COMMENT = re.compile(r"/\*.*?\*/", re.DOTALL)
_LINE_COMMENT = re.compile(r"%[^\n]*")


@dataclass(frozen=True)
class Literal:
    positive: bool
    predicate: str
    argument: "RawTerm"


@dataclass(frozen=True)
class RawTerm:
    """A term as written, before functor names are mapped to implication."""

    name: str
    args: Tuple["RawTerm", ...] = ()

    @property
    def is_variable(self) -> bool:
        return not self.args and (self.name[:1].isupper() or self.name[:1] == "_")


@dataclass(frozen=True)
class Clause:
    name: str
    role: str
    literals: Tuple[Literal, ...]
    line: int


class TptpNotation(BaseNotation):
    """Reader for CD problems in TPTP CNF."""

    # Symbols
    CNF = "cnf"
    NEGATION = "~"
    DISJUNCTION = "|"
    END = "."

    def fail(self, message: str) -> Malformed:
        line = self.text.count("\n", 0, self.pos) + 1
        return Malformed(message, line)

    def parse(self, text: str, name: str = "") -> Problem:
        """
        Read a problem.

        Args:
            text: TPTP text
            name: Problem name, e.g. the file stem

        Returns:
            The problem; its goal is absent when the file has no goal clause

        Raises:
            Malformed: On syntax errors, no axiom or several goals
            UnrecognizedClauseShape: On a clause that is not one of the CD shapes
            MultipleDetClauses: If more than one detachment clause is present
        """
        clauses = self.clauses(text)
        det_lines: List[int] = []
        axioms: Dict[str, Term] = {}
        goals: List[Term] = []
        symbols: Dict[str, set] = {"predicate": set(), "functor": set()}
        for clause in clauses:
            for literal in clause.literals:
                symbols["predicate"].add(literal.predicate)
            if self._is_det(clause):
                det_lines.append(clause.line)
                symbols["functor"].add(clause_functor(clause))
                continue
            if len(clause.literals) != 1:
                raise UnrecognizedClauseShape(
                    f"clause {clause.name} has {len(clause.literals)} literals", clause.line)
            literal = clause.literals[0]
            term = self._term(literal.argument, clause, symbols["functor"])
            if literal.positive:
                axioms[str(len(axioms) + 1)] = term
            elif term.ground:
                goals.append(term)
            else:
                raise UnrecognizedClauseShape(f"negative unit clause {clause.name} is not ground", clause.line)
        if len(symbols["predicate"]) > 1:
            raise UnrecognizedClauseShape(f"several predicates: {', '.join(sorted(symbols['predicate']))}")
        if len(symbols["functor"]) > 1:
            raise UnrecognizedClauseShape(f"several binary functors: {', '.join(sorted(symbols['functor']))}")
        if len(det_lines) > 1:
            raise MultipleDetClauses(f"{len(det_lines)} detachment clauses", det_lines[1])
        if not det_lines:
            raise UnrecognizedClauseShape("problem has no detachment clause")
        if not axioms:
            raise Malformed("problem has no axiom clause")
        if len(goals) > 1:
            raise Malformed(f"problem has {len(goals)} goal clauses")
        goal = Atom(goals[0]) if goals else None
        logger.info("problem %s: %d axioms, %s", name or "(unnamed)", len(axioms),
                    f"goal {goal}" if goal else "no goal")
        return Problem(AxiomAssignment(axioms), goal, name)

    def format(self, problem: Problem) -> str:
        raise NotImplementedError("TPTP problems are read only")

    # ------------------------------------------------------------------
    # shapes

    @staticmethod
    def _is_det(clause: Clause) -> bool:
        if len(clause.literals) != 3:
            return False
        negative = [l.argument for l in clause.literals if not l.positive]
        positive = [l.argument for l in clause.literals if l.positive]
        if len(negative) != 2 or len(positive) != 1:
            return False
        conclusion = positive[0]
        if not conclusion.is_variable:
            return False
        for major, minor in (negative, negative[::-1]):
            if (len(major.args) == 2 and minor.is_variable and major.args[0] == minor
                    and major.args[1] == conclusion and minor != conclusion):
                return True
        return False

    def _term(self, raw: RawTerm, clause: Clause, functors: set) -> Term:
        if raw.is_variable:
            return Variable(raw.name)
        if not raw.args:
            return Constant(raw.name)
        if len(raw.args) != 2:
            raise UnrecognizedClauseShape(
                f"functor {raw.name}/{len(raw.args)} in clause {clause.name} is not binary", clause.line)
        functors.add(raw.name)
        return imp(self._term(raw.args[0], clause, functors), self._term(raw.args[1], clause, functors))

    # ------------------------------------------------------------------
    # syntax

    def clauses(self, text: str) -> List[Clause]:
        """
        Split TPTP text into clauses.

        Raises:
            Malformed: On anything but ``cnf(name, role, clause).`` records
        """
        text = _BLOCK_COMMENT.sub(lambda m: "\n" * m.group().count("\n"), text)
        self.reset(_LINE_COMMENT.sub("", text))
        result = []
        self.skip_whitespace()
        while not self.at_end():
            line = self.text.count("\n", 0, self.pos) + 1
            keyword = self._name()
            if keyword != self.CNF:
                raise self.fail(f"unsupported record {keyword!r}")
            self._symbol("(")
            name = self._name()
            self._symbol(",")
            role = self._name()
            self._symbol(",")
            literals = self._disjunction()
            self._symbol(")")
            self._symbol(self.END)
            result.append(Clause(name, role, tuple(literals), line))
            self.skip_whitespace()
        return result

    def _symbol(self, symbol: str) -> None:
        self.skip_whitespace()
        self.expect(symbol)

    def _name(self) -> str:
        self.skip_whitespace()
        if self.peek() == "'":
            self.advance()
            end = self.text.find("'", self.pos)
            if end < 0:
                raise self.fail("unterminated quoted name")
            if end == self.pos:
                raise self.fail("empty quoted name")
            name = self.text[self.pos:end]
            self.pos = end + 1
            return name
        start = self.pos
        while not self.at_end() and (self.peek().isalnum() or self.peek() in "_$"):
            self.pos += 1
        if start == self.pos:
            raise self.fail(f"expected a name, found {self.peek() or 'end of text'!r}")
        return self.text[start:self.pos]

    def _disjunction(self) -> List[Literal]:
        self.skip_whitespace()
        if self.peek() == "(":
            self.advance()
            literals = self._disjunction()
            self._symbol(")")
            return literals
        literals = [self._literal()]
        self.skip_whitespace()
        while self.peek() == self.DISJUNCTION:
            self.advance()
            literals.append(self._literal())
            self.skip_whitespace()
        return literals

    def _literal(self) -> Literal:
        self.skip_whitespace()
        positive = True
        if self.peek() == self.NEGATION:
            self.advance()
            positive = False
        atom = self._raw_term()
        if len(atom.args) != 1:
            raise self.fail(f"literal {atom.name} is not a unary predicate application")
        return Literal(positive, atom.name, atom.args[0])

    def _raw_term(self) -> RawTerm:
        name = self._name()
        self.skip_whitespace()
        if self.peek() != "(":
            return RawTerm(name)
        self.advance()
        args = [self._raw_term()]
        self.skip_whitespace()
        while self.peek() == ",":
            self.advance()
            args.append(self._raw_term())
            self.skip_whitespace()
        self._symbol(")")
        return RawTerm(name, tuple(args))


def clause_functor(clause: Clause) -> str:
    for literal in clause.literals:
        if literal.argument.args:
            return literal.argument.name
    return ""


def parse_tptp_cd(text: str, name: str = "") -> Problem:
    return TptpNotation().parse(text, name)


def load_problem(path: Union[str, Path]) -> Problem:
    """Read a TPTP problem file, named after the file stem."""
    path = Path(path)
    return TptpNotation().parse(path.read_text(encoding="utf-8"), path.stem)
