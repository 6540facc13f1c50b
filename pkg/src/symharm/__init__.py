"""Real irreps of the rotational polyhedral groups and symmetry-adapted real spherical harmonics."""

__version__ = "0.1.0"

from .basis import (  # noqa: E402
    BasisSetL,
    CoefficientBlock,
    assemble_basis,
    evaluate_basis,
    get_context,
    gram_schmidt_blocks,
    normalize_block,
    projection_rows,
    verify_transformation,
)
from .groups import FiniteRotationGroup, GroupElement, axis_angle, build_group, euler_zyz, expand_generators  # noqa: E402
from .harmonics import (  # noqa: E402
    check_d,
    hat_d,
    real_sph_harm,
    sph_harm,
    ul_matrix,
    wigner_d_matrix,
)
from .irreps import (  # noqa: E402
    Irrep,
    IntertwinerResult,
    character,
    find_intertwiner,
    frobenius_schur,
    load_irreps,
    match_ordering,
    multiplicity_on_sphere,
)
from .realify import RealificationResult, compute_Z, jacobi_eigh, normalize_C, realify_irrep, takagi_factor  # noqa: E402

__all__ = [
    "BasisSetL",
    "CoefficientBlock",
    "FiniteRotationGroup",
    "GroupElement",
    "IntertwinerResult",
    "Irrep",
    "RealificationResult",
    "assemble_basis",
    "axis_angle",
    "build_group",
    "character",
    "check_d",
    "compute_Z",
    "euler_zyz",
    "evaluate_basis",
    "expand_generators",
    "find_intertwiner",
    "frobenius_schur",
    "get_context",
    "gram_schmidt_blocks",
    "hat_d",
    "jacobi_eigh",
    "load_irreps",
    "match_ordering",
    "multiplicity_on_sphere",
    "normalize_C",
    "normalize_block",
    "projection_rows",
    "realify_irrep",
    "real_sph_harm",
    "sph_harm",
    "takagi_factor",
    "ul_matrix",
    "verify_transformation",
    "wigner_d_matrix",
]
