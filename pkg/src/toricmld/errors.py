"""Exception types shared across the library.

Every error raised by library code derives from ToricError so callers (and the
CLI) can distinguish domain failures from genuine bugs.
"""


class ToricError(Exception):
    """Base class for all library errors."""


class ZeroVector(ToricError):
    """An operation that needs a nonzero vector received the zero vector."""


class NotPrimitive(ToricError):
    """A vector required to be primitive has a coordinate gcd > 1."""


class MalformedProgram(ToricError):
    """Linear program data with inconsistent dimensions."""


class ValidationError(ToricError):
    """Structured input failed validation; carries the violation list."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(f"{code}: {detail}" for code, detail in self.violations))


class ParseError(ToricError):
    """A JSON document could not be parsed into a model object."""


class OutsideSupport(ToricError):
    """A point lies outside the support of the fan at hand."""


class NonSimplicialCone(ToricError):
    """An operation requiring a simplicial cone met a non-simplicial one."""


class NotACone(ToricError):
    """The given ray index set is not a cone of the fan."""


class NotARay(ToricError):
    """The given vector is not a ray generator of the fan."""


class QuotientNotAFan(ToricError):
    """The image cones under a quotient projection violate the fan axioms."""


class NotQCartier(ToricError):
    """No piecewise-linear functional interpolates the requested ray values."""


class NotRelTrivial(ToricError):
    """The pair is not relatively numerically trivial over the base."""


class NotLogCanonicalOverBase(ToricError):
    """Log discrepancies are unbounded below over the base point."""


class NoCone(ToricError):
    """No maximal cone satisfies the required image condition."""


class WrongRayCount(ToricError):
    """A fiber fan does not have exactly rank+1 rays."""


class NotComplete(ToricError):
    """The fan is not complete."""


class NoPositiveRelation(ToricError):
    """The rays admit no strictly positive integer relation."""


class RelativeDimensionTooSmall(ToricError):
    """Factorization requires relative dimension at least two."""


class NotMfsShape(ToricError):
    """The morphism is not a Mori-fiber-space shaped contraction."""


class NotRelativelyAmple(ToricError):
    """The anticanonical divisor is not ample over the base."""


class DomainError(ToricError):
    """A numeric argument is outside its documented domain."""


class ConstructionInvariantFailure(ToricError):
    """A constructed object failed one of its postcondition checks."""
