"""Exception hierarchy shared by the parser, compiler, composer and front-ends."""


class FspError(Exception):
    """Base class for every error raised by the toolchain."""


class FspSyntaxError(FspError):
    def __init__(self, message, line=None, column=None, expected=None):
        self.message = message
        self.line = line
        self.column = column
        self.expected = expected
        where = f"{line}:{column}: " if line is not None else ""
        hint = f" (expected {expected})" if expected else ""
        super().__init__(f"{where}{message}{hint}")


class DuplicateDefinition(FspError):
    pass


class UnknownName(FspError):
    pass


class EmptyRange(FspError):
    pass


class UnboundName(UnknownName):
    pass


class DivisionByZero(FspError):
    pass


class IndexOutOfRange(FspError):
    pass


class UnboundLocal(FspError):
    pass


class StateLimitExceeded(FspError):
    """Raised when exploration discovers more states than the configured cap.

    ``partial`` holds the explored prefix of the state space when the raiser
    could build one; analyses of it are not exhaustive.
    """

    def __init__(self, message, limit, frontier=0, partial=None):
        super().__init__(message)
        self.limit = limit
        self.frontier = frontier
        self.partial = partial


class NondeterministicProperty(FspError):
    pass


class ConflictingRelabel(FspError):
    pass


class UnknownTarget(FspError):
    pass


class GaiaSyntaxError(FspSyntaxError):
    pass


class InterleaveNotTopLevel(FspError):
    pass


class RecursiveLivenessDefinition(FspError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("recursive liveness definition: " + " -> ".join(self.cycle))
