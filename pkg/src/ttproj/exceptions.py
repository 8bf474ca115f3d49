"""Exception hierarchy for ttproj."""


class TTProjError(Exception):
    """Base class for all errors raised by ttproj."""


class DimensionError(TTProjError, ValueError):
    """Shapes of the operands do not agree."""


class RankError(TTProjError, ValueError):
    """A requested or supplied rank is not admissible."""


class RankDeficientError(RankError):
    """A TT core has numerical rank below its nominal rank.

    The nominal ranks overstate the TT-rank of the represented tensor.
    Recompute the decomposition at ``true_ranks`` and try again.
    """

    def __init__(self, message, true_ranks=None):
        super().__init__(message)
        self.true_ranks = true_ranks


class InadmissibleFrameError(TTProjError, ValueError):
    """A frame (U1 or V3) is not orthonormal or not orthogonal to the base point."""


class ZeroTensorError(TTProjError, ValueError):
    """An operation is undefined because one of its inputs is zero."""


class NumericalError(TTProjError, ArithmeticError):
    """A numerical kernel failed (e.g. SVD did not converge)."""


class T3DFormatError(TTProjError, ValueError):
    """A ``t3d`` tensor file is malformed."""

    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)
        self.path = path
        self.line = line


class ConfigError(TTProjError, ValueError):
    """An experiment or command-line configuration is invalid."""
