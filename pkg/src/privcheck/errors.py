"""Exception hierarchy shared by every privcheck module."""


class PrivcheckError(Exception):
    """Base class for all errors raised by this package."""


class ModelError(PrivcheckError):
    """A network, automaton or expression is malformed or misused."""


class BoundsError(ModelError):
    """An update drove a variable outside its declared range.

    ``step`` is filled in by the semantics layer when the violation
    happens while expanding a transition.
    """

    def __init__(self, var, value, lo, hi, step=None):
        self.var = var
        self.value = value
        self.lo = lo
        self.hi = hi
        self.step = step
        super().__init__(f"variable {var!r} := {value} outside declared range [{lo}, {hi}]")


class SynthesisError(PrivcheckError):
    pass


class QuerySyntaxError(PrivcheckError):
    """Raised by the expression/query parser; ``position`` is a 0-based offset."""

    def __init__(self, message, text="", position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class BindError(PrivcheckError):
    def __init__(self, message, candidates=()):
        self.candidates = tuple(candidates)
        if self.candidates:
            message = f"{message} (candidates: {', '.join(self.candidates)})"
        super().__init__(message)


class RecordError(PrivcheckError):
    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class ModelFileError(ModelError):
    pass


class TraceError(PrivcheckError):
    """A trace does not replay against its network."""
