"""Certified norming meshes and sup-norm embedding bounds for polynomial spaces.

The package builds finite grids inside compact subsets of R^n, selects
determinant-maximizing node sets whose cardinal functions certify a
norming inequality over the grid, converts those into low-distortion
embeddings of polynomial spaces into l_inf over the nodes via the power
trick, and evaluates the companion closed-form constants (mesh sizes,
distortion bounds, covering and entropy budgets) in high precision.
"""

from .errors import (
    InputError,
    InvariantViolation,
    NonDeterminingError,
    NormMeshError,
    ValidationError,
)
from .sets import (
    CompactSetModel,
    affine_image,
    ball,
    box,
    from_points,
    grid,
    load_point_cloud,
    product,
    sphere,
    union,
)
from .polyspace import (
    CoefVector,
    PolySpace,
    coef_power,
    dim_full,
    evaluate,
    is_determining,
    multiply,
    poly_space,
    sup_norm,
    trace_dimension,
    vandermonde,
)
from .meshgen import (
    LagrangeSystem,
    NodeSet,
    grid_norming_constant,
    lagrange,
    make_node_set,
    norming_certificate,
    select_nodes,
)
from .landau import (
    EmbeddingCertificate,
    embed,
    estimate_distortion,
    power_schedule,
)
from .bounds import (
    BoundReport,
    entropy_chain,
    log_distortion,
    log_distortion_inverse,
    net_cardinality_log,
    poly_bound_report,
    poly_distortion_bound,
    poly_embedding_size,
    schedule_bound_report,
    schedule_distortion_bound,
    scheduled_embedding_size,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CoefVector",
    "CompactSetModel",
    "EmbeddingCertificate",
    "InputError",
    "InvariantViolation",
    "LagrangeSystem",
    "NodeSet",
    "NonDeterminingError",
    "NormMeshError",
    "PolySpace",
    "ValidationError",
    "affine_image",
    "ball",
    "box",
    "coef_power",
    "dim_full",
    "embed",
    "entropy_chain",
    "estimate_distortion",
    "evaluate",
    "from_points",
    "grid",
    "grid_norming_constant",
    "is_determining",
    "lagrange",
    "load_point_cloud",
    "log_distortion",
    "log_distortion_inverse",
    "make_node_set",
    "multiply",
    "net_cardinality_log",
    "norming_certificate",
    "poly_bound_report",
    "poly_distortion_bound",
    "poly_embedding_size",
    "poly_space",
    "power_schedule",
    "product",
    "schedule_bound_report",
    "schedule_distortion_bound",
    "scheduled_embedding_size",
    "select_nodes",
    "sphere",
    "sup_norm",
    "trace_dimension",
    "union",
    "vandermonde",
    "__version__",
]
