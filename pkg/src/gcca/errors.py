"""Exception hierarchy.

``DataError`` subclasses describe bad inputs (the CLI maps them to exit code 2),
``ModelError`` subclasses describe a fit that cannot be produced (exit code 3).
"""


class GccaError(Exception):
    pass


class DataError(GccaError):
    pass


class ModelError(GccaError):
    pass


class ConstantColumn(DataError):
    def __init__(self, name):
        super().__init__(f"column {name!r} has zero variance")
        self.name = name


class TooFewRows(DataError):
    pass


class NonFinite(DataError):
    pass


class RowCountMismatch(DataError):
    pass


class UniverseMismatch(DataError):
    pass


class EpsilonOutOfRange(ValueError, GccaError):
    pass


class EmptyIndexSet(ValueError, GccaError):
    pass


class InstanceTooLarge(ValueError, GccaError):
    pass


class DegenerateReference(ModelError):
    pass


class NoValidCandidate(ModelError):
    pass


class SvdFailure(ModelError):
    pass


class ZeroDenominator(ModelError):
    pass
