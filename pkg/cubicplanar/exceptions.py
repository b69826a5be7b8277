"""Custom exceptions for the cubicplanar package."""


class SeriesError(ValueError):
    """Exception raised for invalid power series operations."""


class GrammarBudgetError(ValueError):
    """Exception raised when exact grammar coefficients are requested beyond the rational budget."""


class GrammarConvergenceError(ValueError):
    """Exception raised when a grammar coefficient does not stabilise."""


class ConstantsError(ValueError):
    """Exception raised when the singular constants cannot be solved to the requested precision."""


class AiryRangeError(ValueError):
    """Exception raised when the map-Airy series is evaluated outside its supported range."""


class AiryConvergenceError(ValueError):
    """Exception raised when the map-Airy series does not converge within the term budget."""


class InvalidGraphError(ValueError):
    """Exception raised for graphs that violate cubic, simple, connected or planar requirements."""


class InvalidNetworkError(InvalidGraphError):
    """Exception raised for rooted multigraphs that are not networks."""


class InvalidMapError(ValueError):
    """Exception raised for inconsistent half-edge maps."""


class RadiusGuardError(ValueError):
    """Exception raised when a neighbourhood radius exceeds the supported bound."""


class DecompositionError(ValueError):
    """Exception raised when a network cannot be decomposed or recomposed."""


class SamplerBudgetError(ValueError):
    """Exception raised when a sampler exceeds its size or rejection budget."""


class EnumerationRangeError(ValueError):
    """Exception raised when exhaustive enumeration is requested for an unsupported size."""
