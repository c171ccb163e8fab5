"""Exception hierarchy shared by all mvlab modules."""


class MvlabError(Exception):
    """Base class for all package errors."""


class GridMismatch(MvlabError):
    """Operands live on different grids."""


class PositivityFloor(MvlabError):
    """A density has cells below the strict-positivity floor needed for log()."""


class OverflowGuard(MvlabError):
    """Exponent range in the Gibbs map exceeds the safe float64 budget."""


class NonConvergence(MvlabError):
    """Fixed-point iteration ran out of iterations.

    Attributes:
        residual: sup-norm residual at the last iterate.
        iterations: number of iterations performed.
    """

    def __init__(self, msg, residual=None, iterations=None):
        super().__init__(msg)
        self.residual = residual
        self.iterations = iterations


class NoNegativeMode(MvlabError):
    """The interaction potential has no attractive Fourier mode."""


class NonRealCoefficients(MvlabError):
    """Fourier coefficients carry an imaginary part beyond tolerance."""


class DimensionUnsupported(MvlabError):
    """Operation is only available in one dimension."""


class NonZeroMean(MvlabError):
    """A field that must integrate to zero does not."""


class SizeLimit(MvlabError):
    """Problem size exceeds the limit of a brute-force oracle."""


class StepRejected(MvlabError):
    """A flow step violated positivity or increased the energy."""


class DtUnderflow(MvlabError):
    """Adaptive step size shrank below the hard floor."""


class SteadyStateTimeout(MvlabError):
    """Steady-state driver hit its budget; carries the best iterate.

    Attributes:
        best: the density with the smallest dissipation reached.
        dissipation: its dissipation value.
    """

    def __init__(self, msg, best=None, dissipation=None):
        super().__init__(msg)
        self.best = best
        self.dissipation = dissipation


class InsufficientHits(MvlabError):
    """Fewer than three uncensored Monte Carlo points; carries the partial study.

    Attributes:
        study: the bound-only ScalingStudy.
    """

    def __init__(self, msg, study=None):
        super().__init__(msg)
        self.study = study


class ConfigError(MvlabError):
    """Invalid or incomplete run configuration."""
