"""Exception hierarchy for structure validation and identity checking."""

from __future__ import annotations


class NordenError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(NordenError):
    """Malformed input file.  Carries the offending line number(s)."""

    def __init__(self, message: str, lines: tuple[int, ...] = ()):
        self.lines = lines
        if lines:
            where = ", ".join(f"line {n}" for n in lines)
            message = f"{message} ({where})"
        super().__init__(message)


class ValidationError(NordenError):
    """A structure invariant is violated.

    ``code`` names the first violated invariant; ``witness`` holds the
    1-based indices at which it fails (empty when not index-local).
    """

    code = "ValidationError"

    def __init__(self, message: str, witness: tuple[int, ...] = ()):
        self.witness = witness
        if witness:
            message = f"{message} at indices {witness}"
        super().__init__(f"{self.code}: {message}")


class OddDimension(ValidationError):
    code = "OddDimension"


class BrokenAntisymmetry(ValidationError):
    code = "BrokenAntisymmetry"


class JacobiViolation(ValidationError):
    code = "JacobiViolation"


class NotAlmostComplex(ValidationError):
    code = "NotAlmostComplex"


class NotNorden(ValidationError):
    code = "NotNorden"


class DegenerateMetric(ValidationError):
    code = "DegenerateMetric"


class WrongSignature(ValidationError):
    code = "WrongSignature"


class NaturalityViolation(NordenError):
    """The canonical connection failed to preserve g or J (internal bug)."""


class BiconditionalViolation(NordenError):
    """Two residuals that must vanish together did not (internal bug)."""


class NotKahlerTensor(NordenError):
    """A tensor handed to the 4-dim decomposition is not a Kähler tensor."""


class DimensionNotFour(NordenError):
    """The 4-dimensional decomposition was requested in another dimension."""


class NotApplicable(NordenError):
    """A gated check was invoked on a structure that fails its gate."""

    def __init__(self, gate: str):
        self.gate = gate
        super().__init__(f"check not applicable: gate '{gate}' is false")
