"""Exception hierarchy.

Every check that can fail carries a machine-readable ``witness`` so callers
(and the CLI report) can show exactly which element, point or pair broke the
condition.
"""


class OrbicatError(Exception):
    """Base class; ``witness`` is a small tuple/dict describing the failure."""

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness

    @property
    def kind(self):
        return type(self).__name__


class InputError(OrbicatError):
    """Malformed input: bad table, bad indices, unsatisfied preconditions."""


class InvariantViolation(OrbicatError):
    """An internal guarantee failed; indicates a bug rather than bad input."""


# --- groups -----------------------------------------------------------------

class IndexOutOfRange(InputError):
    pass


class NonAssociative(InputError):
    pass


class NoIdentity(InputError):
    pass


class NoInverse(InputError):
    pass


class NotHomomorphism(InputError):
    pass


class NotInjective(InputError):
    pass


class NotSubgroup(InputError):
    pass


# --- posets and actions -----------------------------------------------------

class NotPartialOrder(InputError):
    pass


class NotAction(InputError):
    pass


class NotOrderAutomorphism(InputError):
    pass


class AntisymmetryViolation(InvariantViolation):
    pass


# --- equivariant maps and Morita --------------------------------------------

class NotOrderPreserving(InputError):
    pass


class NotEquivariant(InputError):
    pass


class ArrowMismatch(InputError):
    pass


class NaturalityFailure(InputError):
    pass


class NotLocallyConstant(InputError):
    pass


class NotEssentiallySurjective(InputError):
    pass


class NotFullyFaithful(InputError):
    pass


class NotOpen(InputError):
    pass


class NotNormal(InputError):
    pass


class NotFree(InputError):
    pass


class NotCovering(InputError):
    """Free quotient whose projection is not a local homeomorphism."""


class KernelNotFree(InputError):
    pass


class NoIsomorphismFound(InvariantViolation):
    pass


class LeftLegFails(InputError):
    pass


class RightLegFails(InputError):
    pass


class BudgetExceeded(InputError):
    pass


# --- bibundles --------------------------------------------------------------

class NotBibundle(InputError):
    pass


class NotPrincipal(InputError):
    pass


class NotEssentialEquivalence(InputError):
    pass


class MiddleMismatch(InputError):
    pass


class PrincipalityLost(InvariantViolation):
    pass


class InconsistentChoices(InvariantViolation):
    pass


# --- paths ------------------------------------------------------------------

class BrokenFence(InputError):
    pass


class BrokenJump(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class EndpointMismatch(InputError):
    pass


# --- workspace --------------------------------------------------------------

class WorkspaceSyntaxError(InputError):
    def __init__(self, message, line, col):
        super().__init__(f"line {line}, col {col}: {message}", (line, col))
        self.line = line
        self.col = col


class UnknownReference(InputError):
    pass


class ValidationError(InputError):
    pass


class UnknownCommand(InputError):
    pass


class UnknownObject(InputError):
    pass
