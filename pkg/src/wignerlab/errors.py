"""Exception hierarchy shared by all modules.

Exit-code mapping used by the CLI:
    ConfigError                      -> 2
    physics preconditions (Grid/State/Normalization/Purity/Tomography) -> 3
    numerical monitor hard failures (Monitor/Convergence)              -> 4
"""


class WignerlabError(Exception):
    """Base class for every error raised by this package."""


class GridError(WignerlabError):
    """Invalid lattice parameters (bounds, sample count, hbar, mass)."""


class StateError(WignerlabError):
    """A state cannot be represented on the requested grid."""


class NormalizationError(WignerlabError):
    """Input field violates its normalization invariant."""


class PurityError(WignerlabError):
    """Pure-state gate failed (mixed or corrupted Wigner function)."""


class ConvergenceError(WignerlabError):
    """Iterative solver exceeded its iteration cap."""


class PropagationError(WignerlabError):
    """Propagator precondition violated (step size, bandwidth, ...)."""


class MonitorError(PropagationError):
    """A runtime numerical monitor tripped its hard threshold."""


class TomographyError(WignerlabError):
    """Invalid tomogram request (angles, frame count, grid shape)."""


class ConfigError(WignerlabError):
    """Scenario configuration could not be parsed or validated."""
