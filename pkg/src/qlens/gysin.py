"""K-theory of quantum lens spaces from the Gysin sequence.

The lens space ``L(n, r)`` sits in a four-term exact sequence::

    0 -> K1(L) -> K0(CP^n) --A--> K0(CP^n) -> K0(L) -> 0

where ``A`` multiplies by the Euler class ``1 - (1 - u)^r`` on
``Z[u]/u^(n+1)``.  K1 is the kernel of ``A`` and K0 its cokernel, so both
are read off the Smith normal form of an integer matrix.

Torsion generators are written in powers of ``u~``, the pull-back of ``u``;
the pull-back is modelled as the quotient map ``Z^(n+1) -> coker(A)`` itself,
so a claim is just a coefficient vector in the cokernel.
"""

import logging
from math import comb

from .exceptions import DimensionMismatchError, InvariantViolation, PreconditionError
from .intlin import (
    IntMatrix,
    SNFResult,
    coker_order,
    image_membership,
    kernel_basis,
    rational_rank,
    snf,
)
from .kring import TruncPoly
from .models import (
    ClaimReport,
    GeneratorCheck,
    GeneratorClaim,
    KTheoryResult,
    SweepRow,
    SweepTable,
    order_matches,
)

logger = logging.getLogger(__name__)

MAX_KTHEORY_N = 8
CLAIM_TABLE_NS = (1, 2, 3)


# ---------------------------------------------------------------------------
# The Gysin matrix
# ---------------------------------------------------------------------------


def euler_mult_matrix(n: int, r: int) -> IntMatrix:
    """Matrix of multiplication by the Euler class in the basis ``1, u, .., u^n``.

    Column ``j`` holds the coefficients of ``euler_class(n, r) * u^j``: the
    ``k``-th subdiagonal is ``(-1)^(k+1) C(r, k)``, which vanishes for
    ``k > r``.  The last column is always zero.

    Raises:
        PreconditionError: If ``n < 1`` or ``r < 1``.
    """
    if n < 1:
        raise PreconditionError("euler_mult_matrix", f"n must be at least 1, got {n}")
    if r < 1:
        raise PreconditionError("euler_mult_matrix", f"r must be positive, got {r}")
    size = n + 1
    rows = [
        [(-1) ** (i - j + 1) * comb(r, i - j) if i > j else 0 for j in range(size)]
        for i in range(size)
    ]
    return IntMatrix.from_rows(rows)


# ---------------------------------------------------------------------------
# K-groups
# ---------------------------------------------------------------------------


def auto_generators(A: IntMatrix, result: SNFResult) -> list[GeneratorCheck]:
    """Torsion generators read off the Smith certificate.

    The ``i``-th column of ``P^-1`` maps to the ``i``-th Smith basis vector
    of the cokernel, so for every ``alpha_i > 1`` it generates a cyclic
    summand of that order.  Each order is recomputed with
    :func:`~qlens.intlin.coker_order`.
    """
    n = A.rows - 1
    out: list[GeneratorCheck] = []
    for i, alpha in enumerate(result.alphas):
        if alpha == 1:
            continue
        vector = result.P_inv.column(i)
        claim = GeneratorClaim(
            TruncPoly(n, vector), claimed_order=alpha, order_label=f"alpha_{i + 1}"
        )
        order = coker_order(A, vector, result)
        out.append(GeneratorCheck(claim, order, order_matches(order, alpha)))
    return out


def compute_ktheory(n: int, r: int) -> KTheoryResult:
    """Compute ``K0`` and ``K1`` of ``L(n, r)``.

    Args:
        n: Complex dimension of the projective base, in ``[1, 8]``.
        r: Order of the cyclic group, at least 1.

    Raises:
        PreconditionError: If ``n`` or ``r`` is out of range.
        InvariantViolation: If the elimination rank disagrees with the
            rational rank.
    """
    if not 1 <= n <= MAX_KTHEORY_N:
        raise PreconditionError(
            "compute_ktheory", f"n must lie in [1, {MAX_KTHEORY_N}], got {n}"
        )
    A = euler_mult_matrix(n, r)
    result = snf(A)
    if result.rank != rational_rank(A):
        raise InvariantViolation(
            f"SNF rank {result.rank} differs from rational rank for n={n}, r={r}"
        )
    free = A.rows - result.rank
    kernel = kernel_basis(A, result)
    generators = auto_generators(A, result)
    logger.debug(
        "K-theory n=%d r=%d: alphas=%s, %d generators",
        n,
        r,
        result.alphas,
        len(generators),
    )
    return KTheoryResult(
        n=n,
        r=r,
        k1=A.cols - result.rank,
        k0_free_rank=free,
        torsion=result.alphas,
        generators=generators,
        kernel_basis=kernel,
        snf_certificate=result,
    )


# ---------------------------------------------------------------------------
# Generator claims
# ---------------------------------------------------------------------------


def verify_generator_claims(
    n: int, r: int, claims: list[GeneratorClaim]
) -> ClaimReport:
    """Check orders and joint generation of a list of torsion claims.

    Each claim's order in ``coker(A)`` is compared with its claimed order.
    The claims generate the torsion subgroup when every Smith torsion basis
    vector lies in the lattice spanned by ``Im(A)`` and the claim vectors,
    which is an image-membership question for ``[A | claims]``.

    Raises:
        DimensionMismatchError: If a claim was built for another ``n``.
    """
    for claim in claims:
        if claim.expr.n != n:
            raise DimensionMismatchError(n, claim.expr.n, f"claim {claim.text}")
    A = euler_mult_matrix(n, r)
    result = snf(A)
    report = ClaimReport(n=n, r=r)
    for claim in claims:
        order = coker_order(A, claim.vector, result)
        verified = order_matches(order, claim.claimed_order)
        logger.debug(
            "claim %s at r=%d: order %s (claimed %d)",
            claim.text,
            r,
            order,
            claim.claimed_order,
        )
        report.checks.append(GeneratorCheck(claim, order, verified))

    extended = IntMatrix.from_rows(
        [list(row) + [c.vector[i] for c in claims] for i, row in enumerate(A)]
    )
    extended_snf = snf(extended)
    report.generates = all(
        image_membership(extended, result.P_inv.column(i), extended_snf)
        for i in range(result.rank)
    )
    return report


def _claim(n: int, coeffs: dict[int, int], order: int, label: str) -> GeneratorClaim:
    vector = [coeffs.get(k, 0) for k in range(n + 1)]
    return GeneratorClaim(TruncPoly(n, tuple(vector)), order, label)


def known_generator_table(n: int, r: int) -> list[GeneratorClaim]:
    """Closed-form torsion generators of ``K0(L(n, r))`` for ``n <= 3``.

    Keys of the coefficient maps below are powers of ``u~``.  For ``n = 3``
    the sign of the linear term in the middle generator depends on ``r``
    modulo 12 (``r = 0 mod 6``) or modulo 4 (``r = 2, 4 mod 6``).

    Raises:
        PreconditionError: If ``n`` is not 1, 2 or 3, or ``r < 1``.
    """
    if n not in CLAIM_TABLE_NS:
        raise PreconditionError(
            "known_generator_table",
            f"generator claims are tabulated for n in {CLAIM_TABLE_NS}, got {n}",
        )
    if r < 1:
        raise PreconditionError("known_generator_table", f"r must be positive, got {r}")

    if n == 1:
        return [_claim(1, {1: 1}, r, "r")]

    if n == 2:
        if r % 2 == 0:
            return [
                _claim(2, {1: 2, 2: 1}, r // 2, "r/2"),
                _claim(2, {1: 1}, 2 * r, "2r"),
            ]
        return [_claim(2, {2: 1}, r, "r"), _claim(2, {1: 1}, r, "r")]

    if r % 6 == 0:
        sign = 1 if r % 12 == 6 else -1
        return [
            _claim(3, {1: 12, 3: 1}, r // 6, "r/6"),
            _claim(3, {1: 6 * sign, 2: 1}, r // 2, "r/2"),
            _claim(3, {1: 1}, 12 * r, "12r"),
        ]
    if r % 3 == 0:
        return [
            _claim(3, {1: 3, 3: 1}, r // 3, "r/3"),
            _claim(3, {2: 1}, r, "r"),
            _claim(3, {1: 1}, 3 * r, "3r"),
        ]
    if r % 2 == 0:
        sign = 1 if r % 4 == 0 else -1
        return [
            _claim(3, {2: 2, 3: 1}, r // 2, "r/2"),
            _claim(3, {1: 2 * sign, 2: 1}, r // 2, "r/2"),
            _claim(3, {1: 1}, 4 * r, "4r"),
        ]
    return [
        _claim(3, {3: 1}, r, "r"),
        _claim(3, {2: 1}, r, "r"),
        _claim(3, {1: 1}, r, "r"),
    ]


def expected_invariant_factors(n: int, r: int) -> tuple[int, ...] | None:
    """Closed-form invariant factors for ``n <= 4``, ``None`` beyond.

    Raises:
        PreconditionError: If ``n < 1`` or ``r < 1``.
    """
    if n < 1 or r < 1:
        raise PreconditionError(
            "expected_invariant_factors", f"need n >= 1 and r >= 1, got n={n}, r={r}"
        )
    if n == 1:
        return (r,)
    if n == 2:
        return (r // 2, 2 * r) if r % 2 == 0 else (r, r)
    if n == 3:
        if r % 6 == 0:
            return (r // 6, r // 2, 12 * r)
        if r % 3 == 0:
            return (r // 3, r, 3 * r)
        if r % 2 == 0:
            return (r // 2, r // 2, 4 * r)
        return (r, r, r)
    if n == 4:
        if r % 12 == 0:
            return (r // 12, r // 6, 3 * r, 24 * r)
        if r % 6 == 0:
            return (r // 6, r // 6, 3 * r // 2, 24 * r)
        if r % 3 == 0:
            return (r // 3, r // 3, 3 * r, 3 * r)
        if r % 4 == 0:
            return (r // 4, r // 2, r, 8 * r)
        if r % 2 == 0:
            return (r // 2, r // 2, r // 2, 8 * r)
        return (r, r, r, r)
    return None


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


def sweep_row(n: int, r: int) -> SweepRow:
    """K-groups and generator checks for a single ``r``."""
    kt = compute_ktheory(n, r)
    if n in CLAIM_TABLE_NS:
        report = verify_generator_claims(n, r, known_generator_table(n, r))
        generators, generates = report.checks, report.generates
    else:
        generators, generates = kt.generators, None
    return SweepRow(
        r=r,
        alphas=kt.torsion,
        k0=kt.k0,
        k1=kt.k1_text,
        generators=generators,
        generates=generates,
        expected=expected_invariant_factors(n, r),
    )


def sweep_table(n: int, r_from: int, r_to: int) -> SweepTable:
    """Sweep ``r`` over ``[r_from, r_to]``; rows come out in increasing ``r``.

    Rows carry the tabulated generator checks for ``n <= 3`` and the
    automatic generators otherwise.

    Raises:
        PreconditionError: If the range is empty or starts below 1.
    """
    if not 1 <= r_from <= r_to:
        raise PreconditionError(
            "sweep_table", f"need 1 <= r_from <= r_to, got {r_from}..{r_to}"
        )
    table = SweepTable(n=n, rows=[sweep_row(n, r) for r in range(r_from, r_to + 1)])
    mismatched = [row.r for row in table.rows if row.matches_expected is False]
    if mismatched:
        logger.debug("n=%d: closed form disagrees at r=%s", n, mismatched)
    return table
