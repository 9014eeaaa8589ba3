"""Exception hierarchy shared by the engines, services and the CLI."""


class ChainforgeError(Exception):
    """Base class for every error raised by chainforge."""
    exit_code = 1


class GroupIdSyntaxError(ChainforgeError, ValueError):
    """Group-id text does not match the grammar."""


class GroupIdValidityError(ChainforgeError, ValueError):
    """Group-id parses but its parameters violate the family constraints."""


class ArithmeticDomainError(ChainforgeError, ValueError):
    """Integer argument outside the domain of an arithmetic function (e.g. omega(0))."""


class UnsupportedFamilyError(ChainforgeError, ValueError):
    """The operation has no rule for this family (e.g. borel_order of a sporadic group)."""


class NotCoveredError(ChainforgeError):
    """No formula, bound or printed value pins the requested invariant."""
    exit_code = 2


class NotSimpleError(ChainforgeError, ValueError):
    """A predicate for simple groups was called with a non-simple id."""


class NotCentralExtensionError(ChainforgeError, ValueError):
    """A quasisimple predicate was called with an id that is not a central extension."""


class InternalInconsistencyError(ChainforgeError):
    """Two independent rules disagree about the same invariant."""
    exit_code = 4


class OracleCapError(ChainforgeError):
    """Group order or permutation degree exceeds the oracle cap."""
    exit_code = 3


class LatticeBudgetError(OracleCapError):
    """Subgroup lattice enumeration ran out of its join budget."""


class UnconstructibleError(OracleCapError):
    """The oracle has no permutation construction for this id."""


class NotNormalError(ChainforgeError, ValueError):
    """Quotient requested by a subgroup that is not normal."""
