"""Exception types shared across the toolkit."""


class TomographyError(Exception):
    """Base class for contract violations raised by this package."""


class DimensionMismatch(TomographyError):
    pass


class SingularDirection(TomographyError):
    """mu = 0: the tomogram degenerates to a pure mass distribution."""


class OutOfSupport(TomographyError):
    """Evaluation needs tomogram data outside the stored offset window."""


class InsufficientSupport(TomographyError):
    """Offset window too small to cover the reconstruction grid."""


class Unsupported(TomographyError):
    """Configuration outside the implemented capability envelope."""


class FormatError(TomographyError):
    """Malformed phantom/field/sinogram file."""
