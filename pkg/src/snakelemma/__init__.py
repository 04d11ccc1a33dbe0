"""Snake-lemma realizability of six-term exact sequences over F_p[x]/(x^n)."""

from .exactla import PrimeField, PrimeMatrix, Subspace, kernel_image, member, solve_affine, subspace_sum
from .modcat import (
    Algebra,
    HomSpace,
    ModuleMap,
    RModule,
    StableMap,
    cosyzygy,
    direct_sum,
    from_jordan,
    hom_basis,
    injective_hull,
    jordan_type,
    kernel_image_cokernel,
    omega_inv_map,
    phom_subspace,
    projective_cover,
    stable_equal,
    stable_reduce,
    sthom_dim,
    syzygy,
)
from .seqlab import (
    ExactSeq,
    ExtClass,
    RandomSuite,
    SesMorphism,
    ext1_class,
    images_KLM,
    long_class,
    ses_morphism_space,
    snake,
    splice,
    verify_exact,
    yoneda_compose,
)
from .toda import BracketVerdict, cone, toda_bracket
from .decider import (
    RealizabilityVerdict,
    neeman5,
    neeman_check,
    paper_example,
    resolution_example,
    snake_realizable,
)

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "BracketVerdict",
    "ExactSeq",
    "ExtClass",
    "HomSpace",
    "ModuleMap",
    "PrimeField",
    "PrimeMatrix",
    "RModule",
    "RandomSuite",
    "RealizabilityVerdict",
    "SesMorphism",
    "StableMap",
    "Subspace",
    "cone",
    "cosyzygy",
    "direct_sum",
    "ext1_class",
    "from_jordan",
    "hom_basis",
    "images_KLM",
    "injective_hull",
    "jordan_type",
    "kernel_image",
    "kernel_image_cokernel",
    "long_class",
    "member",
    "neeman5",
    "neeman_check",
    "omega_inv_map",
    "paper_example",
    "phom_subspace",
    "projective_cover",
    "resolution_example",
    "ses_morphism_space",
    "snake",
    "snake_realizable",
    "solve_affine",
    "splice",
    "stable_equal",
    "stable_reduce",
    "sthom_dim",
    "subspace_sum",
    "syzygy",
    "toda_bracket",
    "verify_exact",
    "yoneda_compose",
]
