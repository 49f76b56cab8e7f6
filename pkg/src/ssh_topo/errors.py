"""Exception types raised by the chain-model routines."""


class SSHTopoError(Exception):
    """Base class for all package errors."""


class ZeroCoupling(SSHTopoError):
    """The intercell hopping v came out zero; it sets the unit of the model."""


class GaplessModel(SSHTopoError):
    """The spectrum touches zero, so the requested invariant is undefined."""


class NoCriticalPhase(SSHTopoError):
    """No phase closes the gap: the model is gapped (or gapless) for every phase."""


class InvalidSize(SSHTopoError):
    """Chain size incompatible with the requested boundary condition."""


class ConvergenceFailure(SSHTopoError):
    """A numerical routine did not reach its accuracy target."""


class DimensionMismatch(SSHTopoError):
    """State vector and Hamiltonian dimensions disagree."""


class StepTooLarge(SSHTopoError):
    """Halving the integrator step changed the result beyond tolerance."""
