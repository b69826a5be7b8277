"""cubicplanar: counting, singular constants and random sampling of cubic planar graphs."""

from cubicplanar import airy, graph, harness, sampling, series, sweep
from cubicplanar._version import __version__
from cubicplanar.airy import AiryEval, airy_cdf, airy_density
from cubicplanar.graph import CubicGraph, Network, decompose, neighborhood_key, three_connected_components
from cubicplanar.sampling import SamplerConfig, SamplerContext, sample_connected_cubic
from cubicplanar.series import solve_grammar, solve_singular_constants

__all__ = [
    "AiryEval",
    "CubicGraph",
    "Network",
    "SamplerConfig",
    "SamplerContext",
    "__version__",
    "airy",
    "airy_cdf",
    "airy_density",
    "decompose",
    "graph",
    "harness",
    "neighborhood_key",
    "sample_connected_cubic",
    "sampling",
    "series",
    "solve_grammar",
    "solve_singular_constants",
    "sweep",
]
