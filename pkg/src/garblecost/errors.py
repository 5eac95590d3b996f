"""Exception hierarchy shared by every garblecost module."""


class GarbleCostError(Exception):
    """Base class for all library errors."""


class NotCoprime(GarbleCostError, ValueError):
    pass


class NotPrime(GarbleCostError, ValueError):
    pass


class LengthMismatch(GarbleCostError, ValueError):
    pass


class OutOfRange(GarbleCostError, ValueError):
    pass


class ModulusMismatch(GarbleCostError, ValueError):
    pass


class PublicOperand(GarbleCostError, ValueError):
    pass


class UnassignedInput(GarbleCostError, KeyError):
    pass


class ResidueOutOfRange(GarbleCostError, ValueError):
    pass


class Infeasible(GarbleCostError):
    """No parameter set satisfies the constraints."""


class BasisMismatch(GarbleCostError, ValueError):
    pass


class BoundExceeded(GarbleCostError, ValueError):
    """A declared value bound would overflow what the construction can absorb."""


class EmptyInput(GarbleCostError, ValueError):
    pass


class ParamViolation(GarbleCostError, ValueError):
    pass


class TooManyOperands(GarbleCostError, ValueError):
    pass


class BaseMismatch(GarbleCostError, ValueError):
    pass


class ContextViolation(GarbleCostError, ValueError):
    pass
