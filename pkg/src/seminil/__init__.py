"""Exact computation with seminilpotent representations of quivers with loops."""

__version__ = "0.1.0"

from .quiver import DimVector, Quiver, arrow_form, load_quiver, vertex_form
from .rep import GradedSubspace, Rep, moment_map, symplectic_form, zero_rep
from .flags import canonical_chain, ideal_codim, ideal_subspace, is_seminilpotent
from .sampler import SamplerConfig, SamplingFailed, sample_component
from .components import enumerate_components, one_vertex_labels
from .convolution import ConvFunction, distinguished_functions, flag_fiber_euler, one_vertex_basis
from .verify import run_suite

__all__ = [
    "ConvFunction",
    "DimVector",
    "GradedSubspace",
    "Quiver",
    "Rep",
    "SamplerConfig",
    "SamplingFailed",
    "arrow_form",
    "canonical_chain",
    "distinguished_functions",
    "enumerate_components",
    "flag_fiber_euler",
    "ideal_codim",
    "ideal_subspace",
    "is_seminilpotent",
    "load_quiver",
    "moment_map",
    "one_vertex_basis",
    "one_vertex_labels",
    "run_suite",
    "sample_component",
    "symplectic_form",
    "vertex_form",
    "zero_rep",
]
