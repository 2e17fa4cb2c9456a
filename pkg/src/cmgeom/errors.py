import numpy as np


class DimensionError(ValueError):
    """Operands live in spaces of different dimension."""


class WeightError(ValueError):
    """A coordinate column does not sum to 1 (or to 0 for hollow vectors)."""


class ColumnSumError(WeightError):
    def __init__(self, column, total):
        self.column = column
        self.total = total
        super().__init__(f"column {column} sums to {total!r}, expected 1")


class SymmetryError(ValueError):
    def __init__(self, message, index=None):
        self.index = index
        super().__init__(message)


class NotClosedError(ValueError):
    """Covector field is not the gradient of any quadratic function."""


class SingularCMError(np.linalg.LinAlgError):
    """Cayley-Menger matrix is numerically singular (degenerate metric)."""
