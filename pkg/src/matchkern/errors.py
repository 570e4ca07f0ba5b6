"""Exception types shared across the package."""


class MatchkernError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MatchkernError):
    """An element or point lies outside the declared ground set or universe."""


class ContractViolationError(MatchkernError):
    """An operation was called on inputs that violate its stated contract."""


class MatroidAxiomError(MatchkernError):
    """A declared independence family fails a matroid axiom (loops included)."""


class ParameterError(MatchkernError):
    """A parameter is out of range or an infeasible combination was requested."""


class StreamError(MatchkernError):
    """Invalid stream usage, e.g. pushing the same element twice."""


class SizeGuardError(MatchkernError):
    """An exhaustive oracle was asked to enumerate past its hard size guard."""


class SchemaError(MatchkernError):
    """An instance file does not conform to the documented schema."""


class FamilyError(MatchkernError):
    """Perfect hash family construction failed to cover every target subset."""
