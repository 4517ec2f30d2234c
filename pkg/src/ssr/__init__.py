"""Exact computation with special symplectic representations.

Subpackages cover exact scalar arithmetic, dense exact linear algebra,
the representation data model with its covariants, the example
constructions, Lagrangian decomposition, the associated graded Lie
algebras, and the chart maps onto zero sets of the quadratic covariant.
"""

from .charts import alpha, beta, hat_point, mu_hat, torus_act, z_gen_point
from .constructions import (
    CONSTRUCTION_NAMES,
    binary_cubics,
    construct,
    half_spinor12,
    hom_ef,
    j_commutant,
    primitive_three_forms6,
    tautological,
    three_forms6,
    zero_set_oracle,
)
from .core import (
    SSRData,
    bigQ,
    covariant_report,
    mu,
    mu_matrix,
    psi,
    verify_ssr,
)
from .decompose import (
    lagrangian_decompose,
    mu_eigendecomposition,
    mu_fiber,
    quad_ext_decompose,
)
from .faulkner import (
    build_lie_algebra,
    recover_ssr,
    simplicity_check,
    ternary_from_ssr,
    verify_jacobi,
)
from .fields import GF, QQ, FieldElement, parse_field, quadratic_algebra

__version__ = "0.1.0"

__all__ = [
    "CONSTRUCTION_NAMES",
    "FieldElement",
    "GF",
    "QQ",
    "SSRData",
    "alpha",
    "beta",
    "bigQ",
    "binary_cubics",
    "build_lie_algebra",
    "construct",
    "covariant_report",
    "half_spinor12",
    "hat_point",
    "hom_ef",
    "j_commutant",
    "lagrangian_decompose",
    "mu",
    "mu_eigendecomposition",
    "mu_fiber",
    "mu_hat",
    "mu_matrix",
    "parse_field",
    "primitive_three_forms6",
    "psi",
    "quad_ext_decompose",
    "quadratic_algebra",
    "recover_ssr",
    "simplicity_check",
    "tautological",
    "ternary_from_ssr",
    "three_forms6",
    "torus_act",
    "verify_jacobi",
    "verify_ssr",
    "z_gen_point",
    "zero_set_oracle",
]
