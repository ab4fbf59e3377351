"""Exception hierarchy."""


class BispectralError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(BispectralError, ValueError):
    pass


class QuadraticRelationViolated(BispectralError, ValueError):
    """The residue does not satisfy R(R + 2I) = 0."""


class KNotInvertible(BispectralError, ValueError):
    pass


class SeedInconsistent(BispectralError, ValueError):
    pass


class NotNilpotent(BispectralError, ValueError):
    pass


class HypothesisViolated(BispectralError, ValueError):
    def __init__(self, failures):
        if isinstance(failures, str):
            failures = [failures]
        self.failures = list(failures)
        super().__init__("; ".join(self.failures))


class EvalAtPole(BispectralError, ZeroDivisionError):
    pass


class PotentialNotAutonomous(BispectralError, ValueError):
    def __init__(self, order):
        self.order = order
        super().__init__(f"V'' = V'V fails at order {order}")


class NotAMember(BispectralError, ValueError):
    def __init__(self, certificate):
        self.certificate = certificate
        super().__init__(f"theta is not in the bispectral algebra ({certificate.failed_condition})")


class SignConventionFailure(BispectralError, RuntimeError):
    pass
