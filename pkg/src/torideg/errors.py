"""Exception hierarchy.

Every error raised on purpose by the package derives from ``ToridegError`` so
the CLI can map it to a structured message and exit code 1.
"""


class ToridegError(Exception):
    """Base class for all validation and computation errors."""


class SingularBasis(ToridegError):
    pass


class NotInAffineSpan(ToridegError):
    pass


class DegenerateSimplex(ToridegError):
    pass


class NotFullDimensional(ToridegError):
    pass


class InvalidPolytope(ToridegError):
    pass


class NonNormalPolytope(ToridegError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class MissingFace(ToridegError):
    def __init__(self, face_id):
        super().__init__(f"marking has no point for face {face_id!r}")
        self.face_id = face_id


class PointNotInteriorToFace(ToridegError):
    def __init__(self, face_id, point=None):
        super().__init__(
            f"marking point {point!r} is not in the relative interior of face {face_id!r}"
        )
        self.face_id = face_id
        self.point = point


class InvalidMarking(ToridegError):
    """Aggregate of marking problems; ``errors`` holds the individual ones."""

    def __init__(self, errors):
        super().__init__("; ".join(str(e) for e in errors))
        self.errors = list(errors)


class InapplicableMarking(ToridegError):
    pass


class CoverageFailure(ToridegError):
    pass


class OverlapFailure(ToridegError):
    pass


class PointOutsidePolytope(ToridegError):
    pass


class InvalidGradedPoint(ToridegError):
    pass


class FanConditionViolation(ToridegError):
    pass


class DecompositionFailure(ToridegError):
    pass


class ZeroPolynomial(ToridegError):
    pass


class UnsupportedDimension(ToridegError):
    pass
