"""Random generation: Boltzmann and exact-size samplers, triangulations and the graph models."""

from cubicplanar.sampling._boltzmann import BoltzmannSampler
from cubicplanar.sampling._context import (
    BRANCHES,
    CONSTRUCTORS,
    SAMPLEABLE_CLASSES,
    PowerTail,
    SamplerConfig,
    SamplerContext,
    make_rng,
)
from cubicplanar.sampling._exact import ExactSampler
from cubicplanar.sampling._models import (
    SampleRecord,
    draw_size_biased_w,
    sample_boltzmann_network,
    sample_connected_cubic,
    sample_disconnected,
    sample_network,
    sample_O_model,
    sample_size_biased,
    sample_Y,
    stream_id,
)
from cubicplanar.sampling._tree import TreeBuilder
from cubicplanar.sampling._triangulation import sample_triangulation, sample_uniform_3connected

__all__ = [
    "BRANCHES",
    "CONSTRUCTORS",
    "SAMPLEABLE_CLASSES",
    "BoltzmannSampler",
    "ExactSampler",
    "PowerTail",
    "SampleRecord",
    "SamplerConfig",
    "SamplerContext",
    "TreeBuilder",
    "draw_size_biased_w",
    "make_rng",
    "sample_O_model",
    "sample_Y",
    "sample_boltzmann_network",
    "sample_connected_cubic",
    "sample_disconnected",
    "sample_network",
    "sample_size_biased",
    "sample_triangulation",
    "sample_uniform_3connected",
    "stream_id",
]
