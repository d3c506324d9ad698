"""Exception hierarchy shared across the package."""


class ErgospectraError(Exception):
    """Base class for all package-specific errors."""


class InvalidInput(ErgospectraError):
    """Non-finite entries, malformed shapes, or violated preconditions."""


class SingularMatrix(ErgospectraError):
    """A matrix required to be invertible is (numerically) singular."""


class DegenerateFrame(ErgospectraError):
    """Lagrangian frame with X - iY numerically singular."""


class DegenerateAction(ErgospectraError):
    """Moebius action denominator singular; signals input drift."""


class UnsupportedDirection(ErgospectraError):
    """Backward orbit requested on a non-invertible base."""


class UnsupportedBase(ErgospectraError):
    """Operation requires a torus-rotation (or connected) base."""


class RefinementExhausted(ErgospectraError):
    """Adaptive subdivision hit its cap without resolving phases."""


class RefineGrid(ErgospectraError):
    """A closed-loop grid is too coarse for winding extraction."""


class EmptySet(ErgospectraError):
    """Set operation on an empty spectral set."""


class InvalidLaw(ErgospectraError):
    """Random diagonal law with fewer than two support points."""


class DegreeZeroLeading(ErgospectraError):
    """Trigonometric polynomial with vanishing leading coefficient."""
