"""Exception hierarchy shared by all modules."""


class PBPairError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PBPairError, ValueError):
    pass


class ParseError(PBPairError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConstraintError(PBPairError, ValueError):
    pass


class GraphError(PBPairError, ValueError):
    pass


class InvalidEmbedding(PBPairError, ValueError):
    pass


class SizeError(PBPairError, ValueError):
    pass


class OrderError(PBPairError, ValueError):
    pass


class ModeError(PBPairError, ValueError):
    pass


class DimensionError(PBPairError, ValueError):
    pass


class NotStochastic(PBPairError, ValueError):
    def __init__(self, row_sums):
        self.row_sums = list(row_sums)
        super().__init__(f"row sums of M(1) differ: {self.row_sums}")


class EmptyDistribution(PBPairError, ValueError):
    pass


class ModelViolation(PBPairError, ValueError):
    pass


class Degenerate(PBPairError, ValueError):
    pass
