"""
Łukasiewicz Polish notation for implicational formulas.

``C`` is implication, a lowercase letter optionally followed by digits is a
variable (``p``, ``q``, ``v1``), and names declared as constants are read as
constants (Skolem symbols of ground goals).
"""
from typing import AbstractSet, List

from config.settings import IMPLICATION
from core.errors import NonImplicational
from core.terms import Constant, Term, Variable, canonical, imp, variables
from notations.base_notation import BaseNotation


class PolishNotation(BaseNotation):
    """Reader and writer for Polish notation."""

    # Symbols
    IMPLICATION_SYMBOL = "C"

    def parse(self, text: str, constants: AbstractSet[str] = frozenset()) -> Term:
        """
        Read one formula.

        Args:
            text: Polish text such as ``CCpqCCqrCpr``
            constants: Names to read as constants instead of variables

        Returns:
            The formula as an ``i``-term

        Raises:
            Malformed: On unknown symbols, a truncated formula or trailing symbols
        """
        self.reset(text.strip(), self.line)
        # arguments collected so far for each open C
        pending: List[List[Term]] = []
        result = None
        while result is None:
            if self.at_end():
                raise self.fail("truncated formula")
            symbol = self.peek()
            if symbol == self.IMPLICATION_SYMBOL:
                self.advance()
                pending.append([])
                continue
            if not ("a" <= symbol <= "z"):
                raise self.fail(f"unexpected symbol {symbol!r}")
            name = self.advance()
            while self.peek().isdigit():
                name += self.advance()
            value: Term = Constant(name) if name in constants else Variable(name)
            while pending:
                pending[-1].append(value)
                if len(pending[-1]) < 2:
                    break
                value = imp(*pending.pop())
            else:
                result = value
        self.ensure_consumed()
        return result

    def format(self, term: Term) -> str:
        """
        Write a formula; terms with positional variables are canonically renamed.

        Raises:
            NonImplicational: If the term has a functor other than implication
        """
        if not term.ground and any(not isinstance(v.name, str) for v in variables(term)):
            term = canonical(term)
        out: List[str] = []
        stack = [term]
        while stack:
            t = stack.pop()
            if t.is_compound:
                if t.functor != IMPLICATION or len(t.args) != 2:
                    raise NonImplicational(f"{t!r} is not an implicational formula")
                out.append(self.IMPLICATION_SYMBOL)
                stack.append(t.args[1])
                stack.append(t.args[0])
            else:
                out.append(str(t.name))
        return "".join(out)


def parse_polish(text: str, constants: AbstractSet[str] = frozenset()) -> Term:
    return PolishNotation().parse(text, constants)


def print_polish(term: Term) -> str:
    return PolishNotation().format(term)
