"""Shared exception types with stable machine-readable codes for the CLI."""


class HeegnerConeError(Exception):
    code = "error"


class BudgetExceeded(HeegnerConeError):
    """An enumeration kernel would exceed its evaluation cap."""
    code = "budget-exceeded"


class ParityUnsupported(HeegnerConeError):
    """Exact L-value requested at an argument of the wrong parity."""
    code = "parity-unsupported"


class LatticeError(HeegnerConeError):
    code = "bad-lattice"


class InvalidIndex(HeegnerConeError):
    """A divisor index (m, mu) violating m > 0 or m - Q(mu) integral."""
    code = "bad-index"


class CoverageError(HeegnerConeError):
    """A cusp basis or stored expansion does not cover a requested index."""
    code = "basis-coverage"


class CongruenceError(HeegnerConeError):
    """Weight incompatible with the signature congruences."""
    code = "congruence"


class RelationError(HeegnerConeError):
    """A residue relation or interior certificate failed to verify."""
    code = "relation-failed"


class ConfigError(HeegnerConeError):
    code = "bad-config"
