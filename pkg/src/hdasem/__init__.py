"""Higher-dimensional automata semantics for process terms.

A process term is interpreted as a labelled precubical set: one vertex per
state, one edge per transition and one n-cube for every n actions that may
run concurrently.  The package also provides the operational semantics to
check it against, the synchronized tensor product used for parallel
composition, path categories, and the homology computations that witness
the shape of path spaces.
"""

from ._kernels import BACKEND
from .errors import AlgebraError, CycleError, HDAError, PCSetError, ResourceLimitError
from .flows import PathCategory, bad_realization, path_class_counts, trace_normal_form
from .homology import integer_homology, open_interval_poset, order_complex
from .pcset import PCSet, boundary, isomorphic, iso_check, skeleton, standard_cube, validate
from .proc import format_term, parse
from .semantics import Interpretation, interp, verify_paradigm, verify_restrict1
from .sos import build_lts, step
from .syncalg import SyncAlgebra, builtin, validate_algebra
from .tensor import cosk_dir, cube_tensor, product1, tensor

__version__ = "0.1.0"

__all__ = [
    "AlgebraError", "BACKEND", "CycleError", "HDAError", "Interpretation", "PCSet", "PCSetError",
    "PathCategory", "ResourceLimitError", "SyncAlgebra", "bad_realization", "boundary",
    "build_lts", "builtin", "cosk_dir", "cube_tensor", "format_term", "integer_homology",
    "interp", "iso_check", "isomorphic", "open_interval_poset", "order_complex", "parse",
    "path_class_counts", "product1", "skeleton", "standard_cube", "step", "tensor",
    "trace_normal_form", "validate", "validate_algebra", "verify_paradigm", "verify_restrict1",
]
