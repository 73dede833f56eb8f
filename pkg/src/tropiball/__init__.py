"""Tropical polytopes in R^e/R1: balls, Hit-and-Run sampling and volume estimation."""

from .balls import (
    TropBall,
    ball_generators,
    ball_volume,
    max_inscribed,
    max_inscribed_simplex,
    min_enclosing,
    min_enclosing_lower_bound,
)
from .complex import SimplexCover, enumerate_simplices, identify_cover, uniform_sample
from .core import (
    TropDet,
    TropPolytope,
    TropSegment,
    contains,
    contains_many,
    normalize,
    project,
    trop_det,
    trop_dist,
    trop_segment,
)
from .errors import TropicalError
from .hull import HRep, KleeneStar, h_rep, kleene_star
from .sampler import HarChain, run_chain
from .volume import (
    PseudoVertexSet,
    VolumeEstimate,
    acceptance_rate_bound,
    enumerate_pseudo_vertices,
    estimate_volume,
    round_polytope,
    volume_bounds,
)

__version__ = "0.1.0"
