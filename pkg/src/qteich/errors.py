"""Exception hierarchy for qteich.

Every error raised by the library derives from :class:`QTeichError`, so callers
can catch one type at an API boundary.  Subclasses carry enough structured
state (offending index, distance, depth) to make the failure actionable.
"""

from __future__ import annotations


class QTeichError(Exception):
    """Base class for all qteich errors."""


class ParameterError(QTeichError):
    """A modular parameter violates its normalization constraints."""


class StripViolation(QTeichError):
    """Evaluation point lies outside the analyticity strip of the contour integral."""


class QuadratureDivergence(QTeichError):
    """The contour quadrature cannot meet its error target within the node budget."""


class RegimeViolation(QTeichError):
    """An evaluation strategy was requested outside its regime of validity."""


class PoleHit(QTeichError):
    """A factor of the infinite-product representation vanished exactly."""


class PoleProximity(QTeichError):
    """Evaluation point is within tolerance of a pole or zero of the function.

    Attributes:
        index: the lattice index of the offending pole/zero.
        distance: distance from the evaluation point to that lattice point.
    """

    def __init__(self, message: str, index=None, distance: float | None = None):
        super().__init__(message)
        self.index = index
        self.distance = distance


class ContinuationDepthExceeded(QTeichError):
    """Functional-equation continuation needed more shift steps than allowed."""


class HalfPlaneViolation(QTeichError):
    """Theta-series nome parameter does not lie in the upper half plane."""


class SectorBoundary(QTeichError):
    """Argument lies on (or too close to) a boundary ray between asymptotic sectors."""


class DomainViolation(QTeichError):
    """Integral-identity parameters violate the convergence/pole-separation domain."""


class NonDecayingTail(QTeichError):
    """The integrand fails to decay along the chosen contour ends."""


class BoundaryClipping(QTeichError):
    """A wave packet carries non-negligible mass at the grid boundary."""


class AxisOutOfRange(QTeichError):
    """Operator primitive addresses a tensor axis the state does not have."""


class SpecMismatch(QTeichError):
    """State and operator were built against different lattice descriptors."""


class IdenticalAxes(QTeichError):
    """A two-factor operator was asked to couple an axis with itself."""


class BoundaryMass(QTeichError):
    """A function handed to a grid integral does not vanish at the window edge."""


class TailTooLarge(QTeichError):
    """Spectral reconstruction truncated at s_max leaves too much weight outside."""


class DiagonalizationFailure(QTeichError):
    """Dense spectral check could not produce a reliable eigendecomposition."""


class FlipInapplicable(QTeichError):
    """Diagonal-exchange move requested on a pair of triangles that do not admit it."""


class IndexOutOfRange(QTeichError):
    """A move names a triangle index absent from the triangulation."""


class InvalidWord(QTeichError):
    """A move word fails to parse or compile."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class DegenerateQ(QTeichError):
    """Deformation parameter q is too close to ±1 for the requested construction."""
