"""Exception hierarchy. Every error carries the offending object(s) as attributes."""


class PdcgError(ValueError):
    pass


class DimensionMismatch(PdcgError):
    pass


class SizeLimitExceeded(PdcgError):
    pass


class NotSymmetric(PdcgError):
    def __init__(self, first, second, message=None):
        self.first = first
        self.second = second
        super().__init__(message or f"coalitions {first} and {second} have equal size but different values")


class NotPartiallySymmetric(NotSymmetric):
    pass


class NotAChain(PdcgError):
    def __init__(self, first, second):
        self.first = first
        self.second = second
        super().__init__(f"coalitions {first} and {second} are incomparable")


class CrossedBounds(PdcgError):
    def __init__(self, coalition, lower, upper):
        self.coalition = coalition
        self.lower = lower
        self.upper = upper
        super().__init__(f"lower bound {lower} exceeds upper bound {upper} at coalition {coalition}")


class PreconditionFailed(PdcgError):
    pass


class NotAMember(PreconditionFailed):
    pass


class Unbounded(PreconditionFailed):
    pass


class SizeBoundViolated(PdcgError):
    def __init__(self, coalition, bound):
        self.coalition = coalition
        self.bound = bound
        super().__init__(f"coalition {coalition} is larger than the size bound {bound}")


class StructureMismatch(PdcgError):
    pass


class NotExtendable(PdcgError):
    """Closed-form extendability test failed; ``reason`` names the violated inequality."""

    def __init__(self, reason, witness=None):
        self.reason = reason
        self.witness = witness
        super().__init__(reason)


class Infeasible(PdcgError):
    def __init__(self, message, certificate=None):
        self.certificate = certificate
        super().__init__(message)


class UnboundedPolytope(PdcgError):
    pass


class OutsideExtremeHull(PdcgError):
    """A member of the extension set that no convex combination of the listed extreme games reaches."""

    def __init__(self, message, upper_weight=None):
        self.upper_weight = upper_weight
        super().__init__(message)
