"""Exception hierarchy shared by all modules."""


class WeakSpeError(Exception):
    """Base class for every error raised by the package."""


class GameValidationError(WeakSpeError):
    """A game description violates a structural invariant."""


class DanglingEdge(GameValidationError):
    pass


class SinkVertex(GameValidationError):
    pass


class LeafWithExtraEdge(GameValidationError):
    pass


class MissingLeafOutcome(GameValidationError):
    pass


class NonPermutationPreference(GameValidationError):
    pass


class KindMismatch(WeakSpeError):
    """Two outcomes of different kinds were compared."""


class UndefinedOutcome(WeakSpeError):
    """The outcome function has no value on the given play."""

    def __init__(self, message, lasso=None):
        super().__init__(message)
        self.lasso = lasso


class UnreachableLeaf(WeakSpeError):
    """Some vertex cannot reach any leaf."""

    def __init__(self, vertex, name=None):
        super().__init__(f"vertex {name if name is not None else vertex} reaches no leaf")
        self.vertex = vertex


class InvariantViolation(WeakSpeError):
    def __init__(self, step, which, detail=""):
        super().__init__(f"{which} violated after step {step}" + (f": {detail}" if detail else ""))
        self.step = step
        self.which = which


class NoCycle(WeakSpeError):
    pass


class OutcomeMismatch(WeakSpeError):
    pass


class NotLayered(WeakSpeError):
    def __init__(self, witness):
        super().__init__(f"outcomes are not layered: {witness}")
        self.witness = witness


class TooManyProfiles(WeakSpeError):
    pass


class NotATree(WeakSpeError):
    pass


class InvalidProfile(WeakSpeError):
    pass


class GameSyntaxError(WeakSpeError):
    """Parse failure with a 1-based source position."""

    def __init__(self, line, col, expected, got=""):
        msg = f"line {line}, col {col}: expected {expected}"
        if got:
            msg += f", got {got!r}"
        super().__init__(msg)
        self.line = line
        self.col = col
        self.expected = expected


class GameSemanticError(WeakSpeError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line
