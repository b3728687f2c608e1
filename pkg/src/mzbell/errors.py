"""Exception types shared across the package."""


class MzBellError(Exception):
    """Base class for all package-specific errors."""


class DegenerateStateError(MzBellError, ValueError):
    """A channel has (numerically) zero mean photon number, so normalized
    coherence functions are undefined."""


class DegenerateDenominatorError(MzBellError, ValueError):
    """The sum-correlation denominator of the modulation depth vanished:
    there is no signal, which is distinct from zero correlation."""


class TruncationLeakageError(MzBellError, RuntimeError):
    """A transform pushed probability above the retained Fock cutoffs."""

    def __init__(self, leakage: float, threshold: float):
        super().__init__(
            f"truncation leakage {leakage:.3e} exceeds threshold {threshold:.3e}"
        )
        self.leakage = leakage
        self.threshold = threshold


class DimensionLimitError(MzBellError, ValueError):
    """A constructed state would exceed the configured basis-size limit."""
