"""Exception hierarchy shared by every module.

The CLI maps these onto its exit codes: parse errors (1), validation
failures (2), size-guard trips (3). Law violations (4) are signalled by
failed reports, not exceptions.
"""


class PolycatError(Exception):
    """Base class for all package-specific errors."""


class ParseError(PolycatError):
    """A document could not be parsed or a reference did not resolve."""


class ValidationError(PolycatError):
    """Well-formedness of some object failed (totality, endpoint or
    equation conditions)."""


class ShapeMismatch(ValidationError):
    """Domains, codomains or bases do not line up for an operation."""


class SizeGuardExceeded(PolycatError):
    """An enumeration would exceed the configured size bound."""


class OracleNotNatural(PolycatError):
    """A user-supplied transformation failed its naturality verification
    sweep."""
