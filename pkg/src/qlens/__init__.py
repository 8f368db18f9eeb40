"""qlens: exact K-theory of quantum lens spaces.

K0 and K1 of the quantum lens space ``L(n, r)`` are the cokernel and kernel
of an integer matrix, the multiplication by the Euler class on
``Z[u]/u^(n+1)``.  qlens builds that matrix, reduces it to Smith normal form
with unimodular certificates and checks torsion generators exactly.  A
term-rewriting engine for the quantum-sphere algebra verifies the algebraic
identities behind the construction symbolically.

Quick start::

    from qlens import compute_ktheory

    result = compute_ktheory(3, 6)
    print(result.k0)        # Z ⊕ Z_3 ⊕ Z_72

Or from the command line::

    qlens ktheory --n 3 --r 6
"""

import importlib.metadata
import logging

from .config import QlensConfig, read_config
from .exceptions import (
    ClaimError,
    ConfigError,
    DimensionMismatchError,
    InvariantViolation,
    PreconditionError,
    QlensError,
    RewriteBudgetExceeded,
    UnsupportedIdentityError,
)
from .gysin import (
    auto_generators,
    compute_ktheory,
    euler_mult_matrix,
    expected_invariant_factors,
    known_generator_table,
    sweep_table,
    verify_generator_claims,
)
from .intlin import (
    IntMatrix,
    SNFResult,
    coker_order,
    image_membership,
    invariant_factors_by_minors,
    kernel_basis,
    rank,
    snf,
)
from .kring import (
    TruncPoly,
    basis_change_P_to_u,
    euler_class,
    line_bundle_class,
    pair_mu,
    projection_class,
    trunc_mul,
)
from .models import (
    AlgebraReport,
    CheckResult,
    ClaimReport,
    GeneratorCheck,
    GeneratorClaim,
    KTheoryResult,
    SweepRow,
    SweepTable,
    load_document,
)
from .ncalg import (
    Generator,
    NCMatrix,
    NCPoly,
    adjoint,
    build_partial_isometry,
    build_projection,
    build_psi,
    hopf_galois_witness,
    multiply,
    normal_form,
    u1_degree,
    verify_isometry,
    verify_partial_isometry,
    verify_projection,
    verify_qtrace,
    zr_invariant,
)
from .qcoeff import HalfLaurent, Rational, eval_at_one, qfact, qint, qmultinomial

logging.getLogger(__name__).addHandler(logging.NullHandler())

try:
    __version__ = importlib.metadata.version("qlens")
except importlib.metadata.PackageNotFoundError:
    __version__ = "0.0.0-dev"

__all__ = [
    "AlgebraReport",
    "CheckResult",
    "ClaimError",
    "ClaimReport",
    "ConfigError",
    "DimensionMismatchError",
    "Generator",
    "GeneratorCheck",
    "GeneratorClaim",
    "HalfLaurent",
    "IntMatrix",
    "InvariantViolation",
    "KTheoryResult",
    "NCMatrix",
    "NCPoly",
    "PreconditionError",
    "QlensConfig",
    "QlensError",
    "Rational",
    "RewriteBudgetExceeded",
    "SNFResult",
    "SweepRow",
    "SweepTable",
    "TruncPoly",
    "UnsupportedIdentityError",
    "adjoint",
    "auto_generators",
    "basis_change_P_to_u",
    "build_partial_isometry",
    "build_projection",
    "build_psi",
    "coker_order",
    "compute_ktheory",
    "euler_class",
    "euler_mult_matrix",
    "eval_at_one",
    "expected_invariant_factors",
    "hopf_galois_witness",
    "image_membership",
    "invariant_factors_by_minors",
    "kernel_basis",
    "known_generator_table",
    "line_bundle_class",
    "load_document",
    "multiply",
    "normal_form",
    "pair_mu",
    "projection_class",
    "qfact",
    "qint",
    "qmultinomial",
    "rank",
    "read_config",
    "snf",
    "sweep_table",
    "trunc_mul",
    "u1_degree",
    "verify_generator_claims",
    "verify_isometry",
    "verify_partial_isometry",
    "verify_projection",
    "verify_qtrace",
    "zr_invariant",
]
