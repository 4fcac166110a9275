"""Exception types shared across the workbench."""


class GLTiltError(Exception):
    """Base class for all workbench errors."""


class InvariantViolation(GLTiltError):
    """An identity the theory guarantees failed to hold in the engine."""


class NotFinite(GLTiltError):
    """A quotient group order was requested but the quotient is infinite."""


class DegreeMismatch(GLTiltError):
    """A polynomial is not homogeneous of the required group degree."""


class CalibrationFailed(GLTiltError):
    """No twist of the tensor factorization matches the calibration targets."""


class NotComposable(GLTiltError):
    """Morphisms with incompatible endpoints were composed."""


class NotAnUpset(GLTiltError):
    """The given subset of the slice interval is not closed under going up."""


class UnsupportedWeightType(GLTiltError):
    """The operation needs a Cohen-Macaulay finite weight type (2,2,2,q) or (2,2,3,3)."""


class TypeMismatch(GLTiltError):
    """Dynkin objects from different models were combined."""


class NotAdmissible(GLTiltError):
    """APR mutation requested at a part with obstructing morphisms."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CyclicQuiver(GLTiltError):
    """Mutation walk requires an acyclic endomorphism quiver."""


class NotSameOrbitStructure(GLTiltError):
    """Walk endpoints do not share the same summands up to twist."""


class NotBasic(GLTiltError):
    """An endomorphism ring is not basic (a local piece exceeds dimension one)."""


class InconsistentSequence(GLTiltError):
    """The four-term sequence dimension identity failed (mis-calibrated bundle)."""
