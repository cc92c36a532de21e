"""
Proof corpus files.

A corpus is a line-oriented UTF-8 file with ``#`` comments. Axioms are
written ``label : PolishFormula`` and proof steps ``label = DNotation``,
optionally followed by ``: PolishFormula`` stating the step's theorem. A
leading ``*`` marks a goal root. Labels must be defined before they are
used.

    1 : CCCpqrCCrpCsp
    2 = DDD1D111n : CCCpqpCrp
    * 19 = D33 : CpCqp
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from config.settings import N_LABEL
from core.dterms import CompactedDTerm, DTerm, prims
from core.errors import DuplicateLabel, Malformed, UndefinedLabel
from core.semantics import AxiomAssignment, lemma_theorems
from core.terms import Term, subsumes, variant
from notations.base_notation import BaseNotation
from notations.d_notation import DNotation
from notations.polish_notation import PolishNotation

logger = logging.getLogger(__name__)


@dataclass
class Corpus:
    """A compacted D-term with its axioms, goal marks and stated formulas."""

    delta: CompactedDTerm
    alpha: AxiomAssignment
    goals: List[str] = field(default_factory=list)
    formulas: Dict[str, Term] = field(default_factory=dict)

    def theorems(self) -> Dict[str, Optional[Term]]:
        """MGT argument of every step label."""
        return lemma_theorems(self.delta, self.alpha)


class CorpusNotation(BaseNotation):
    """Reader and writer for corpus files."""

    # Symbols
    COMMENT = "#"
    GOAL_MARK = "*"
    STEP_SEPARATOR = "="
    FORMULA_SEPARATOR = ":"

    def __init__(self, lenient: bool = False):
        super().__init__()
        self.lenient = lenient
        self.polish = PolishNotation()
        self.dnotation = DNotation()

    def parse(self, text: str) -> Corpus:
        """
        Read a corpus.

        Args:
            text: Corpus file content

        Returns:
            The corpus

        Raises:
            Malformed: On a line that is neither an axiom nor a step
            DuplicateLabel: If a label is defined twice
            UndefinedLabel: If a step uses a label not defined above it
        """
        axioms: Dict[str, Term] = {}
        bindings: Dict[str, DTerm] = {}
        aliases: Dict[str, str] = {}
        goals: List[str] = []
        formulas: Dict[str, Term] = {}
        lines: Dict[str, int] = {}

        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split(self.COMMENT, 1)[0].strip()
            if not line:
                continue
            goal = line.startswith(self.GOAL_MARK)
            if goal:
                line = line[len(self.GOAL_MARK):].strip()
            if self.STEP_SEPARATOR in line:
                label, rest = (part.strip() for part in line.split(self.STEP_SEPARATOR, 1))
                dtext, formula = self._split_formula(rest)
                self._check_label(label, lines, number)
                d = self._read_dterm(dtext, number)
                for used in sorted(prims(d)):
                    if used in aliases:
                        raise Malformed(f"step {label} uses {used}, which only renames {aliases[used]}", number)
                    if used != N_LABEL and used not in axioms and used not in bindings:
                        raise UndefinedLabel(f"step {label} uses label {used!r} before its definition", number)
                if d.is_constant:
                    if d.name not in axioms and d.name not in bindings:
                        raise Malformed(f"step {label} must be a detachment or name an axiom or step", number)
                    aliases[label] = d.name
                else:
                    bindings[label] = d
                if formula is not None:
                    formulas[label] = self._read_formula(formula, number)
            elif self.FORMULA_SEPARATOR in line:
                if goal:
                    raise Malformed("an axiom cannot be marked as goal", number)
                label, formula = (part.strip() for part in line.split(self.FORMULA_SEPARATOR, 1))
                self._check_label(label, lines, number)
                axioms[label] = self._read_formula(formula, number)
            else:
                raise Malformed(f"expected 'label : formula' or 'label = D-term', got {raw.strip()!r}", number)
            lines[label] = number
            if goal:
                goals.append(label)

        if not axioms:
            raise Malformed("corpus declares no axioms")
        corpus = Corpus(CompactedDTerm(bindings, aliases), AxiomAssignment(axioms), goals, formulas)
        logger.info("loaded corpus: %d axioms, %d steps, roots %s",
                    len(axioms), len(bindings) + len(aliases), ", ".join(corpus.delta.roots))
        if formulas:
            self._check_formulas(corpus, lines)
        return corpus

    def _split_formula(self, rest: str) -> Tuple[str, Optional[str]]:
        if self.FORMULA_SEPARATOR in rest:
            dtext, formula = rest.split(self.FORMULA_SEPARATOR, 1)
            return dtext.strip(), formula.strip()
        return rest, None

    @staticmethod
    def _check_label(label: str, lines: Dict[str, int], number: int) -> None:
        if not label or any(ch.isspace() for ch in label):
            raise Malformed(f"invalid label {label!r}", number)
        if label == N_LABEL:
            raise Malformed(f"{N_LABEL!r} is reserved and cannot be defined", number)
        if label in lines:
            raise DuplicateLabel(f"label {label!r} already defined on line {lines[label]}", number)

    def _read_dterm(self, text: str, number: int) -> DTerm:
        self.dnotation.line = number
        return self.dnotation.parse(text, self.lenient)

    def _read_formula(self, text: str, number: int) -> Term:
        self.polish.line = number
        return self.polish.parse(text)

    @staticmethod
    def _check_formulas(corpus: Corpus, lines: Dict[str, int]) -> None:
        theorems = corpus.theorems()
        for label, stated in corpus.formulas.items():
            computed = theorems.get(label)
            if computed is None:
                logger.warning("line %d: step %s has no MGT", lines[label], label)
            elif not subsumes(computed, stated):
                logger.warning("line %d: stated formula of %s is not an instance of its MGT %s",
                               lines[label], label, PolishNotation().format(computed))
            elif not variant(computed, stated):
                logger.info("line %d: stated formula of %s is a proper instance of its MGT", lines[label], label)

    def format(self, corpus: Corpus, mgts: bool = False) -> str:
        """
        Write a corpus: axioms first, then steps in dependency order.

        Args:
            corpus: The corpus
            mgts: Also write computed MGTs for steps without a stated formula

        Returns:
            The file content
        """
        theorems = corpus.theorems() if mgts else {}
        goals = set(corpus.goals)
        out = []
        for label, term in corpus.alpha.terms.items():
            out.append(f"{label} {self.FORMULA_SEPARATOR} {self.polish.format(term)}")
        steps = corpus.delta.linearization() + list(corpus.delta.aliases)
        for label in steps:
            mark = f"{self.GOAL_MARK} " if label in goals else ""
            line = f"{mark}{label} {self.STEP_SEPARATOR} {self.dnotation.format(corpus.delta[label])}"
            formula = corpus.formulas.get(label, theorems.get(label))
            if formula is not None:
                line += f" {self.FORMULA_SEPARATOR} {self.polish.format(formula)}"
            out.append(line)
        return "\n".join(out) + "\n"


def parse_corpus(text: str, lenient: bool = False) -> Corpus:
    return CorpusNotation(lenient).parse(text)


def print_corpus(corpus: Corpus, mgts: bool = False) -> str:
    return CorpusNotation().format(corpus, mgts)


def load_corpus(path: Union[str, Path], lenient: bool = False) -> Corpus:
    """Read a corpus file."""
    logger.debug("reading corpus %s", path)
    return CorpusNotation(lenient).read(path)
