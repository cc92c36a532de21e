"""
Base notation class with a text cursor and common reading helpers.
All notation readers and writers should inherit from this class.
"""
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Optional, Union

from core.errors import Malformed


class BaseNotation(ABC):
    """Base class containing the cursor handling shared by all notations."""

    def __init__(self, text: str = "", line: Optional[int] = None):
        """
        Initialize the notation with the text to read.

        Args:
            text: Source text
            line: Line number of the text in its file, for diagnostics
        """
        self.text = text
        self.pos = 0
        self.line = line

    def reset(self, text: str, line: Optional[int] = None) -> None:
        """
        Start reading a new text.

        Args:
            text: Source text
            line: Optional line number for diagnostics
        """
        self.text = text
        self.pos = 0
        self.line = line

    def peek(self, offset: int = 0) -> str:
        """
        Look at a character without consuming it.

        Args:
            offset: Distance from the cursor

        Returns:
            The character, or an empty string past the end
        """
        index = self.pos + offset
        return self.text[index] if index < len(self.text) else ""

    def advance(self, count: int = 1) -> str:
        """
        Consume characters.

        Args:
            count: Number of characters to consume

        Returns:
            The consumed characters
        """
        chunk = self.text[self.pos:self.pos + count]
        self.pos += len(chunk)
        return chunk

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def skip_whitespace(self) -> None:
        while not self.at_end() and self.peek().isspace():
            self.pos += 1

    def expect(self, symbol: str) -> None:
        """
        Consume a fixed symbol.

        Args:
            symbol: The expected symbol

        Raises:
            Malformed: If the text does not continue with the symbol
        """
        if not self.text.startswith(symbol, self.pos):
            found = self.peek() or "end of text"
            raise self.fail(f"expected {symbol!r}, found {found!r}")
        self.pos += len(symbol)

    def fail(self, message: str) -> Malformed:
        """
        Build a Malformed error pointing at the cursor.

        Args:
            message: What went wrong

        Returns:
            The error, for the caller to raise
        """
        return Malformed(f"{message} at column {self.pos + 1} of {self.text!r}", self.line)

    def ensure_consumed(self) -> None:
        """
        Check that nothing but whitespace is left.

        Raises:
            Malformed: If symbols remain after a complete expression
        """
        self.skip_whitespace()
        if not self.at_end():
            raise self.fail(f"trailing symbols {self.text[self.pos:]!r}")

    @abstractmethod
    def parse(self, text: str) -> Any:
        """Read one complete object from text."""

    @abstractmethod
    def format(self, obj: Any) -> str:
        """Write an object in this notation."""

    def read(self, path: Union[str, Path]) -> Any:
        """
        Parse the content of a UTF-8 file.

        Args:
            path: File to read

        Returns:
            The parsed object
        """
        return self.parse(Path(path).read_text(encoding="utf-8"))

    def write(self, obj: Any, path: Union[str, Path]) -> Path:
        """
        Write an object to a UTF-8 file.

        Args:
            obj: Object to print
            path: Destination file

        Returns:
            Path to the written file
        """
        path = Path(path)
        path.write_text(self.format(obj), encoding="utf-8")
        return path
