"""mcmkit: exact computation with maximal Cohen-Macaulay modules.

Resolutions, syzygies, duals, transpose and horizontal linkage, MCM
approximations, matrix factorizations, cohomology operators over
complete intersections, and Auslander-Reiten quivers for finite-type
catalogs -- all over GF(p) or the rationals, degreewise and exact.
"""

from .errors import DegreeBoundExceeded, Inconclusive, MCMError, UsageError
from .linalg import GF, QQ, DenseMatrix
from .rings import QuotientRing, WeightedPolyRing
from .modules import (
    GradedModule,
    free_module,
    invariants,
    maximal_ideal_module,
    residue_field_module,
)
from .homs import decompose, hom_space, is_isomorphic
from .resolution import detect_period, growth_report, mcm_test, resolve, syzygy, ulrich_test
from .mf import MatrixFactorization, coker_module, from_resolution_tail, mf_shift, mf_transpose
from .catalog import catalog_names, load_catalog
from .functors import cosyzygy, dual, link, mcm_approx, stable_part, tau, transpose
from .quiver import build_quiver, component_classify, middle_term, reverse_iso_check
from .cisupport import CIPresentation, eisenbud_operators, support_annihilator_window

__version__ = "0.1.0"

__all__ = [
    "GF",
    "QQ",
    "DenseMatrix",
    "MCMError",
    "UsageError",
    "Inconclusive",
    "DegreeBoundExceeded",
    "WeightedPolyRing",
    "QuotientRing",
    "GradedModule",
    "free_module",
    "residue_field_module",
    "maximal_ideal_module",
    "invariants",
    "hom_space",
    "is_isomorphic",
    "decompose",
    "resolve",
    "syzygy",
    "detect_period",
    "growth_report",
    "mcm_test",
    "ulrich_test",
    "MatrixFactorization",
    "coker_module",
    "mf_shift",
    "mf_transpose",
    "from_resolution_tail",
    "load_catalog",
    "catalog_names",
    "dual",
    "transpose",
    "link",
    "cosyzygy",
    "tau",
    "mcm_approx",
    "stable_part",
    "build_quiver",
    "middle_term",
    "reverse_iso_check",
    "component_classify",
    "CIPresentation",
    "eisenbud_operators",
    "support_annihilator_window",
    "__version__",
]
