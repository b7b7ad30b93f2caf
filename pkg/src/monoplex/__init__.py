"""Monochromatic subgraph counts in randomly colored multiplex networks.

Exact counting and standardized statistics (:mod:`monoplex.counting`),
step-graphon kernels (:mod:`monoplex.graphon`), spectra
(:mod:`monoplex.spectral`), limit-law samplers (:mod:`monoplex.limitlaw`)
and Monte Carlo experiments (:mod:`monoplex.experiments`).
"""
from .errors import BudgetError, InconsistentSigmaError, InputError
from .graphs import Coloring, Graph, Multiplex, automorphism_count, complement, graph_join, pattern
from .counting import count_copies, count_monochromatic, expected_count, gamma, gamma_vector
from .graphon import StepGraphon, StepKernel, empirical_graphon, hom_density, two_point_kernel
from .spectral import Spectrum, spectrum
from .limitlaw import LimitSpec, limit_sample, sigma_matrix

__version__ = "0.1.0"
