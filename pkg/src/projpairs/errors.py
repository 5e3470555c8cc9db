"""Exception hierarchy shared by all modules."""


class ProjPairsError(Exception):
    pass


class DomainError(ProjPairsError, ValueError):
    """An argument lies outside the domain of the operation."""


class RegionError(DomainError):
    """A point does not belong to the attainable region A."""


class MembershipError(RegionError):
    """A point built by the decomposer fell outside A (an internal bug)."""

    def __init__(self, group, label, residue, point):
        self.group = group
        self.label = label
        self.residue = residue
        self.point = point
        super().__init__(
            f"constructed point {point} outside A "
            f"(group {group}, label {label}, residue {residue})"
        )


class FeasibilityError(DomainError):
    """The spectrum is outside the range the construction can handle."""

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class DimensionMismatchError(DomainError):
    pass


class NumericError(ProjPairsError, ArithmeticError):
    """An iterative numeric routine failed to converge."""


class MalformedOperatorError(ProjPairsError):
    """A rule operator covers some basis index more than once."""
