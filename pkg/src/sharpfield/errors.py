"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line tool:
2 for invalid input, 3 for infeasible problems, 4 for numerical failures.
"""


class SharpfieldError(ValueError):
    exit_code = 2


class InfeasibleError(SharpfieldError):
    exit_code = 3


class NumericalError(SharpfieldError):
    exit_code = 4


# geom
class NonFrontFacingNormal(SharpfieldError):
    pass


class DegenerateSystem(NumericalError):
    pass


class ParallelPlanes(DegenerateSystem):
    pass


class NoFrontFacingSolution(InfeasibleError):
    pass


# optics
class OnFocalPlane(SharpfieldError):
    pass


class OnRearFocalPlane(SharpfieldError):
    pass


class CollinearPoints(SharpfieldError):
    pass


# focus
class ParallelFocusPlane(SharpfieldError):
    pass


class HingeTooClose(InfeasibleError):
    pass


class SensorNormalDegenerate(SharpfieldError):
    pass


class NoConvergence(NumericalError):
    pass


# dof
class BadOrdering(SharpfieldError):
    pass


class DegenerateMidplane(NumericalError):
    pass


class ZeroTilt(SharpfieldError):
    pass


class SingularDenominator(NumericalError):
    pass


class BehindFocal(InfeasibleError):
    pass


# optimize
class BehindFocalPlane(InfeasibleError):
    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = tuple(indices)


class DegenerateObject(SharpfieldError):
    pass


class CoplanarPoints(DegenerateObject):
    pass


class AllInfeasible(InfeasibleError):
    pass


class ZeroAngles(SharpfieldError):
    pass


class EmptyFeasibleSet(InfeasibleError):
    pass
