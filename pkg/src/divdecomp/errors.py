"""Exception hierarchy shared by every module."""


class DivergenceError(Exception):
    """Base class for all errors raised by divdecomp."""


class DomainError(DivergenceError, ValueError):
    """A point lies outside (or on the boundary of) an open domain."""


class ShapeError(DivergenceError, ValueError):
    """Vector lengths are incompatible."""


class ParameterError(DivergenceError, ValueError):
    """A scalar parameter such as alpha or a weight vector is invalid."""


class ConvergenceError(DivergenceError, ArithmeticError):
    """Numeric inversion of a derivative failed to bracket or converge."""


class NumericalError(DivergenceError, ArithmeticError):
    """A mathematically non-negative quantity came out clearly negative."""


class MassMismatchError(DivergenceError, ValueError):
    """Two vectors that must carry equal total mass do not."""


class UnknownNameError(DivergenceError, KeyError):
    """A generator, divergence or theorem name is not registered."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ParseError(DivergenceError, ValueError):
    """An input file could not be parsed."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column

    def __str__(self):
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.column is not None:
            where.append(f"column {self.column}")
        msg = self.args[0]
        return f"{msg} ({', '.join(where)})" if where else msg


class IoError(DivergenceError, OSError):
    """An input file could not be read."""
