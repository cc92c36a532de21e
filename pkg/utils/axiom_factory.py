"""
Axiom assignment factory for the named single-axiom systems.
"""
from typing import Dict, Optional

from config.settings import AXIOMS, DEFAULT_AXIOM
from core.semantics import AxiomAssignment
from notations.polish_notation import parse_polish


class AxiomFactory:
    """Factory class for creating AxiomAssignment instances."""

    _instances: Dict[str, AxiomAssignment] = {}

    @staticmethod
    def resolve(axiom: str) -> str:
        """
        Polish text of an axiom given by name or directly.

        Args:
            axiom: A name from AXIOMS or a formula in Polish notation

        Returns:
            The formula in Polish notation
        """
        return AXIOMS.get(axiom, axiom)

    @classmethod
    def create_assignment(cls, axiom: str = DEFAULT_AXIOM, label: str = "1") -> AxiomAssignment:
        """
        Create a new single-axiom assignment.

        Args:
            axiom: Axiom name or Polish formula
            label: Primitive label of the axiom

        Returns:
            Fresh AxiomAssignment with its own MGT memo
        """
        return AxiomAssignment({label: parse_polish(cls.resolve(axiom))})

    @classmethod
    def get_assignment(cls, axiom: str = DEFAULT_AXIOM) -> AxiomAssignment:
        """
        Get the shared assignment for an axiom (memos are reused across calls).

        Args:
            axiom: Axiom name or Polish formula

        Returns:
            AxiomAssignment with label "1"
        """
        key = cls.resolve(axiom)
        if key not in cls._instances:
            cls._instances[key] = cls.create_assignment(key)
        return cls._instances[key]

    @classmethod
    def reset(cls, axiom: Optional[str] = None) -> None:
        """Drop one shared assignment, or all of them."""
        if axiom is None:
            cls._instances.clear()
        else:
            cls._instances.pop(cls.resolve(axiom), None)
