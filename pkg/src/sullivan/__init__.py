"""Truncated Sullivan minimal models, the elliptic/hyperbolic dichotomy and
rank bounds from long exact sequences of dual rational homotopy groups."""

from .dga import FiniteDGA, FreeDGA, cohomology, induced_map_on_cohomology, validate_dga
from .dichotomy import CatBound, classify, euler_characteristic, growth_report
from .graded_algebra import Element, FreeGradedAlgebra, Generator, monomial_basis, multiply
from .les_solver import (
    GottliebBudget,
    LESInstance,
    blowup_scenario,
    isotropy_lower_bounds,
    solve_les,
)
from .linalg import SparseMatrix, solve_linear
from .minimal_model import MinimalModel, RankSequence, build_minimal_model, pi_ranks, verify_model
from .spaces import (
    BettiData,
    IntersectionForm,
    connected_sum_4d,
    four_manifold,
    preset,
    product,
    projective,
    sphere,
)

__version__ = "0.1.0"
