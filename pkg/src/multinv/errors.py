"""Exception types shared across the package."""


class CapExceeded(RuntimeError):
    """Group closure passed the element cap (group too large, or not finite)."""

    def __init__(self, cap):
        super().__init__(f"group closure exceeded the cap of {cap} elements")
        self.cap = cap


class TheoremViolation(AssertionError):
    """A provably true fact failed to verify; this always indicates a bug."""


class NotIsotropy(ValueError):
    """Subgroup is not the exact pointwise stabilizer of its fixed lattice."""


class GeneratorMismatch(ValueError):
    """Paired generator lists do not close to compatible groups."""


class NotInvariant(ValueError):
    """Element of the Laurent algebra is not fixed by the group action."""


class ParityViolation(ArithmeticError):
    """An odd coefficient appeared where evenness is forced."""


class InvalidGenerator(ValueError):
    """Generator matrix is not square of the declared rank, or not unimodular."""


class UnknownBuiltin(KeyError):
    """No builtin group with the requested name."""

    def __str__(self):
        return f"unknown builtin: {self.args[0]}" if self.args else "unknown builtin"


class UnknownPreset(KeyError):
    """No orbit-verification preset with the requested name."""

    def __str__(self):
        return f"unknown preset: {self.args[0]}" if self.args else "unknown preset"


class ParseError(ValueError):
    """Group definition file is not well-formed."""


class ValidationError(ValueError):
    """Group definition file parsed but failed semantic validation."""
