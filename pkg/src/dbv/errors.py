"""Exception types shared across the package."""


class DbvError(Exception):
    """Base class for errors raised by this package."""


class BasisMismatchError(DbvError):
    """Two values over different algebras (or variable sets) were combined."""


class PreconditionError(DbvError):
    """An operation was called on input violating its stated precondition."""


class HbarDivisionError(DbvError):
    """Division by a power of hbar hit a term with too small an exponent."""


class DegenerationRefusedError(DbvError):
    """A splitting was requested but the spectral sequence does not degenerate."""


class SolverInvariantError(DbvError):
    """An identity the solver relies on failed at runtime (internal bug or
    a splitting certified to insufficient hbar order)."""


class AlgebraSpecError(DbvError):
    """An algebra description file is malformed or fails validation."""
