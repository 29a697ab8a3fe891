"""Exception and warning types shared across the library."""


class RotorlabError(Exception):
    """Base class for library errors."""


class BasisTooSmall(RotorlabError):
    """Momentum window holds fewer than 3 classes."""


class NotHermitian(RotorlabError):
    """Matrix violates the Hermiticity tolerance."""


class NotUnitary(RotorlabError):
    """Matrix violates the unitarity tolerance."""


class DiagonalizationFailed(RotorlabError):
    """Dense eigensolver did not converge."""


class GapClosed(RotorlabError):
    """Bloch-vector norm fell below the gap floor; winding undefined there."""

    def __init__(self, theta: float, norm: float = 0.0):
        self.theta = theta
        self.norm = norm
        super().__init__(f"quasienergy gap closed at theta={theta:.12g} (|d|={norm:.3e})")


class RefinementExhausted(RotorlabError):
    """Angle increments stayed too coarse at the theta-grid cap."""


class BoundaryContact(RotorlabError):
    """Wave packet reached the edge of a basis meant to be effectively infinite."""


class IllConditionedWarning(UserWarning):
    """Eigenpair residual above tolerance; results are reported anyway."""
