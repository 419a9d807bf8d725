"""Exception types shared across the package."""


class GqcError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(GqcError):
    """Operands have incompatible shapes or factor dimensions."""


class ValidationError(GqcError):
    """An input failed a structural invariant (hermiticity, trace, positivity, ...)."""


class ProblemFormatError(GqcError):
    """A problem document failed schema validation.

    The message always starts with the dotted path of the offending field.
    """


class InfeasibleError(GqcError):
    """No admissible candidate satisfies the requested constraint set."""


class IntegrationError(GqcError):
    """A grid or step budget is too coarse for the requested tolerance."""
