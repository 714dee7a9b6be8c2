"""Exception types shared across the package.

Validation problems raise the builtin ``ValueError``/``TypeError``; the
classes here mark numeric failures so the CLI can map them to exit code 3.
"""


class NumericError(ArithmeticError):
    """A computation could not be carried out numerically."""


class SingularError(NumericError):
    """A required inverse does not exist (condition estimate too large)."""


class DegenerateWaveError(NumericError):
    """The plane-wave problem has no unique field two-form."""


class DispersionError(NumericError):
    """The wave one-form does not satisfy the dispersion relation."""


class InconsistencyError(NumericError):
    """An identity that must hold by construction was violated."""


class ClassificationError(NumericError):
    """The quadratic-medium classifier could not assign a case."""
