"""Exception types shared across the engine.

Everything raised on purpose derives from MulticatError so callers (CLI,
service, REPL) can catch one base class and turn it into a diagnostic.
Law *violations* are not exceptions: the law checkers return reports.
"""

from __future__ import annotations


class MulticatError(Exception):
    """Base class for all errors raised by multicat."""


class TypeMismatch(MulticatError):
    """Morphisms cannot be composed: codomain of the inner != domain of the outer."""

    def __init__(self, msg: str, pair_index: int | None = None):
        super().__init__(msg)
        self.pair_index = pair_index


class MissingComposite(MulticatError):
    """A composable pair has no entry in the composition table."""


class MissingFile(MulticatError):
    """A dataset package names a file that does not exist."""


class DataParseError(MulticatError):
    """A data file is malformed; carries file and line when known."""

    def __init__(self, msg: str, file: str, line: int | None = None):
        where = f"{file}:{line}" if line is not None else file
        super().__init__(f"{where}: {msg}")
        self.file = file
        self.line = line


class SchemaViolation(MulticatError):
    """A datum or manifest entry does not fit the schema."""


class DanglingReference(MulticatError):
    """A reference points at an entity id that does not exist."""


class UnknownMorphism(MulticatError):
    def __init__(self, name: str, hint: str | None = None, loc: tuple[int, int] | None = None):
        msg = f"unknown morphism or name {name!r}"
        if hint:
            msg += f" (did you mean {hint!r}?)"
        super().__init__(msg)
        self.name = name
        self.hint = hint
        self.loc = loc


class UnknownEntity(MulticatError):
    pass


class UnknownCollection(MulticatError):
    def __init__(self, name: str, loc: tuple[int, int] | None = None):
        super().__init__(f"unknown collection {name!r}")
        self.name = name
        self.loc = loc


class UnknownDataset(MulticatError):
    pass


class QuerySyntaxError(MulticatError):
    """Parse failure with position and the token set that would have been accepted."""

    def __init__(self, msg: str, line: int, column: int, expected: frozenset[str] = frozenset()):
        super().__init__(f"{line}:{column}: {msg}")
        self.msg = msg
        self.line = line
        self.column = column
        self.expected = expected


class QueryTypeError(MulticatError):
    """Typechecking failure; expected/found are rendered type names."""

    def __init__(self, msg: str, expected: str = "", found: str = "",
                 loc: tuple[int, int] | None = None):
        super().__init__(msg)
        self.msg = msg
        self.expected = expected
        self.found = found
        self.loc = loc


class Unrenderable(MulticatError):
    """The value shape cannot be rendered in the requested output model."""

    def __init__(self, model: str, reason: str):
        super().__init__(f"cannot render as {model}: {reason}")
        self.model = model
        self.reason = reason


class EvalRuntimeError(MulticatError):
    """Runtime failure during fold execution (division by zero)."""
