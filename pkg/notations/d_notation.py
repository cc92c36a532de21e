"""
Meredith's D-notation for proof structures.

``D`` is detachment written in prefix form, numerals are axiom or lemma
labels and ``n`` is the reserved leaf of n-simplified proofs. A numeral
ends at a following dot; a dotless run of digits is read digit by digit,
except a run that reaches the end of the text where exactly one argument is
still missing, which is one numeral. So ``D31`` is D(3,1) and ``D5.11`` is
D(5,11).
"""
import logging
from typing import List, Optional

from config.settings import N_LABEL
from core.dterms import D, DTerm, N, prim
from core.errors import Malformed
from notations.base_notation import BaseNotation

logger = logging.getLogger(__name__)


class DNotation(BaseNotation):
    """Reader and writer for D-notation."""

    # Symbols
    DETACHMENT_SYMBOL = "D"
    TERMINATOR = "."
    N_SYMBOL = N_LABEL

    def parse(self, text: str, lenient: bool = False) -> DTerm:
        """
        Read one D-term.

        Args:
            text: D-notation text such as ``DD13.D16.16.13``
            lenient: Accept dotless multi-digit numerals. When the strict
                reading fails, every digit run is read as one numeral and a
                warning is logged.

        Returns:
            The D-term

        Raises:
            Malformed: On unknown symbols, truncation or trailing symbols
        """
        source = text.strip()
        try:
            return self._parse(source, greedy=False)
        except Malformed:
            if not lenient:
                raise
        d = self._parse(source, greedy=True)
        logger.warning("read %r with dotless multi-digit numerals as %s", source, self.format(d))
        return d

    def _parse(self, text: str, greedy: bool) -> DTerm:
        self.reset(text, self.line)
        needed = 1
        pending: List[List[DTerm]] = []
        result: Optional[DTerm] = None
        while not self.at_end():
            if needed == 0:
                raise self.fail(f"trailing symbols {self.text[self.pos:]!r}")
            symbol = self.peek()
            if symbol == self.DETACHMENT_SYMBOL:
                self.advance()
                needed += 1
                pending.append([])
                continue
            if symbol == self.N_SYMBOL:
                self.advance()
                leaf = N
            elif symbol.isdigit():
                leaf = prim(self._numeral(needed, greedy))
            elif symbol == self.TERMINATOR:
                raise self.fail("dot without a numeral")
            else:
                raise self.fail(f"unexpected symbol {symbol!r}")
            needed -= 1
            value = leaf
            while pending:
                pending[-1].append(value)
                if len(pending[-1]) < 2:
                    break
                value = D(*pending.pop())
            else:
                result = value
        if result is None:
            raise self.fail("truncated D-term")
        return result

    def _numeral(self, needed: int, greedy: bool) -> str:
        end = self.pos
        while end < len(self.text) and self.text[end].isdigit():
            end += 1
        run = self.text[self.pos:end]
        if end < len(self.text) and self.text[end] == self.TERMINATOR:
            self.pos = end + 1
            return run
        if greedy or (needed == 1 and end == len(self.text)):
            self.pos = end
            return run
        return self.advance()

    def format(self, d: DTerm) -> str:
        """
        Write a D-term with the fewest dots that still read back the same.

        A multi-digit numeral gets a dot unless it is the last token; any
        numeral directly followed by a multi-digit or dotted numeral gets one.

        Raises:
            Malformed: If a leaf is neither a numeral nor ``n``
        """
        tokens: List[str] = []
        stack = [d]
        while stack:
            x = stack.pop()
            if x.is_compound:
                tokens.append(self.DETACHMENT_SYMBOL)
                stack.append(x.args[1])
                stack.append(x.args[0])
            elif x.name == self.N_SYMBOL or x.name.isdigit():
                tokens.append(x.name)
            else:
                raise Malformed(f"label {x.name!r} cannot be written in D-notation")
        dotted = [False] * len(tokens)
        for i in range(len(tokens) - 1, -1, -1):
            token = tokens[i]
            if not token.isdigit():
                continue
            if len(token) > 1 and i < len(tokens) - 1:
                dotted[i] = True
            elif i + 1 < len(tokens) and tokens[i + 1].isdigit() and (len(tokens[i + 1]) > 1 or dotted[i + 1]):
                dotted[i] = True
        return "".join(t + self.TERMINATOR if dot else t for t, dot in zip(tokens, dotted))


def parse_dnotation(text: str, lenient: bool = False) -> DTerm:
    return DNotation().parse(text, lenient)


def print_dnotation(d: DTerm) -> str:
    return DNotation().format(d)
