"""Divergence, coset projections and random walks on free groups and right-angled Artin groups."""

__version__ = "0.1.0"

from .groups import (GroupSpec, MalformedWordError, UnsupportedVariantError, analyze_graph,
                     format_word, inverse, multiply, normal_form, parse_word, word_length)
from .cayley import ball, distance, geodesic
from .stochastic import Kernel, StepLaw, lazy, parity, sample_path, srw, validate_kernel
from .projections import CosetId, FProfile, ConstantsProfile, coset_of, enumerate_HT, project
from .divergence import DivergenceQuery, DivergenceResult, divergence
from .projcomplex import YGraph, bbf_bound_check, build_ygraph, y_distance
