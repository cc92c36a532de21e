"""
Exception hierarchy of the toolkit.

Undefined most general theorems are not errors: ``mgt`` and ``ipt`` return
``None`` for them.
"""
from typing import Optional


class CdToolsError(Exception):
    """Base class for all toolkit errors."""


class NotUnifiable(CdToolsError):
    """A set of term pairs has no unifier (clash or occurs check)."""


class PositionOutOfRange(CdToolsError):
    """A position does not address a subterm."""

    def __init__(self, position, term=None):
        self.position = position
        self.term = term
        super().__init__(f"position {position} out of range" + (f" in {term}" if term is not None else ""))


class NonPositionalVariable(CdToolsError):
    """shift was applied to a term with a non-positional variable."""


class NotCompound(CdToolsError):
    """An operation requiring a compound D-term got a primitive one."""


class UnknownLabel(CdToolsError):
    """A label is not in the domain of a compacted D-term."""


class CyclicLabels(CdToolsError):
    """The label dependency relation of a compacted D-term has a cycle."""


class MissingAxiom(CdToolsError):
    """A primitive label of a D-term has no axiom assigned."""

    def __init__(self, label: str):
        self.label = label
        super().__init__(f"no axiom assigned to label {label!r}")


class InvalidNUse(CdToolsError):
    """An 'n' minor premise appears where the major premise does not allow it."""


class UndefinedMgt(CdToolsError):
    """A reduction needs an MGT that is undefined."""


class NonImplicational(CdToolsError):
    """A formula uses symbols other than implication and variables."""


class NotATheorem(CdToolsError):
    """organic_status was asked about a formula that is not a theorem."""


class ProofCheckFailed(CdToolsError):
    """A proof found by the prover does not prove its goal when checked."""


class ResourceLimit(CdToolsError):
    """A configured time, size or cache limit was hit."""


class Exhausted(CdToolsError):
    """The prover finished all levels without finding a proof."""

    def __init__(self, message: str, stats=None):
        self.stats = stats or []
        super().__init__(message)


class NotationError(CdToolsError):
    """Base class for errors raised while reading a notation."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Malformed(NotationError):
    """Text is not well formed in the expected notation."""


class UndefinedLabel(NotationError, UnknownLabel):
    """A corpus step references a label before its definition."""


class DuplicateLabel(NotationError):
    """A corpus defines a label twice."""


class UnrecognizedClauseShape(NotationError):
    """A TPTP clause is neither the detachment clause, an axiom nor a goal."""


class MultipleDetClauses(NotationError):
    """A TPTP problem has more than one detachment clause."""
