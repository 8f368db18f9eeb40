"""Exact integer matrix algebra.

Smith normal form with unimodular certificates, invariant factors from
gcd-of-minors (an independent oracle), rank, kernel lattice, image
membership and orders of elements in cokernels.

Matrices are carried as immutable :class:`IntMatrix` values; the elimination
itself runs on numpy arrays of ``dtype=object`` so every entry stays an
arbitrary-precision Python ``int``.  Determinants and the independent rank
come from sympy's ``DomainMatrix`` over ``ZZ``/``QQ``.
"""

import itertools
import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from math import gcd, lcm
from typing import Literal

import numpy as np
from sympy.polys.domains import QQ, ZZ
from sympy.polys.domains.domain import Domain
from sympy.polys.matrices import DomainMatrix

from .exceptions import DimensionMismatchError, InvariantViolation

logger = logging.getLogger(__name__)

INFINITE: Literal["infinite"] = "infinite"


# ---------------------------------------------------------------------------
# IntMatrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored row-major."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.entries or not self.entries[0]:
            raise DimensionMismatchError("at least 1x1", "empty", "IntMatrix")
        width = len(self.entries[0])
        for row in self.entries:
            if len(row) != width:
                raise DimensionMismatchError(width, len(row), "IntMatrix row length")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        """Build from nested sequences of integers."""
        return cls(tuple(tuple(int(x) for x in row) for row in rows))

    @classmethod
    def from_array(cls, array: np.ndarray) -> "IntMatrix":
        """Build from a 2-d numpy array of integers."""
        return cls.from_rows(array.tolist())

    @classmethod
    def identity(cls, size: int) -> "IntMatrix":
        """The ``size x size`` identity."""
        return cls(tuple(tuple(int(i == j) for j in range(size)) for i in range(size)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        """The zero matrix."""
        return cls(tuple((0,) * cols for _ in range(rows)))

    @property
    def rows(self) -> int:
        """Number of rows."""
        return len(self.entries)

    @property
    def cols(self) -> int:
        """Number of columns."""
        return len(self.entries[0])

    @property
    def shape(self) -> tuple[int, int]:
        """``(rows, cols)``."""
        return (self.rows, self.cols)

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        return self.entries[i][j]

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.entries)

    def to_array(self) -> np.ndarray:
        """Copy into a numpy array of Python ints."""
        return np.array([list(row) for row in self.entries], dtype=object)

    def to_rows(self) -> list[list[int]]:
        """Row-major nested lists (the JSON form)."""
        return [list(row) for row in self.entries]

    def column(self, j: int) -> tuple[int, ...]:
        """Column ``j`` as a tuple."""
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "IntMatrix":
        """The transposed matrix."""
        return IntMatrix(tuple(zip(*self.entries)))

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product ``A v``.

        Raises:
            DimensionMismatchError: If ``len(v) != cols``.
        """
        if len(v) != self.cols:
            raise DimensionMismatchError(self.cols, len(v), "vector length")
        return tuple(sum(a * x for a, x in zip(row, v)) for row in self.entries)

    def matmul(self, other: "IntMatrix") -> "IntMatrix":
        """Matrix product."""
        if self.cols != other.rows:
            raise DimensionMismatchError(self.cols, other.rows, "inner dimension")
        return IntMatrix.from_array(self.to_array() @ other.to_array())

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return self.matmul(other)

    def determinant(self) -> int:
        """Exact determinant of a square matrix."""
        if self.rows != self.cols:
            raise DimensionMismatchError("square matrix", self.shape, "determinant")
        return int(DomainMatrix(self._domain_rows(ZZ), self.shape, ZZ).det())

    def _domain_rows(self, domain: Domain) -> list[list[object]]:
        return [[domain.convert(x) for x in row] for row in self.entries]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SNFResult:
    """Smith normal form ``P A Q = D`` with unimodular certificates.

    Attributes:
        P: Unimodular row transform (``rows x rows``).
        Q: Unimodular column transform (``cols x cols``).
        D: Diagonal matrix with ``alphas`` then zeros on the diagonal.
        alphas: Positive invariant factors, each dividing the next.
        P_inv: Exact inverse of ``P``.
    """

    P: IntMatrix
    Q: IntMatrix
    D: IntMatrix
    alphas: tuple[int, ...]
    P_inv: IntMatrix

    @property
    def rank(self) -> int:
        """Number of nonzero invariant factors."""
        return len(self.alphas)


def exgcd(a: int, b: int) -> np.ndarray:
    """Extended gcd as a 2x2 integer matrix.

    Returns:
        ``M`` of determinant 1 with ``M @ [a, b] == [gcd(a, b), 0]``.  When
        ``a`` divides ``b`` (and ``a != 0``), ``M[0, 1] == 0``.
    """
    a_sign = -1 if a < 0 else 1
    b_sign = -1 if b < 0 else 1
    a, b = a * a_sign, b * b_sign
    # Euclid on the column [b, a] (swapped so that a | b keeps M[0, 1] == 0),
    # tracking the row operations in the augmented identity.
    work = np.array([[b, 0, 1], [a, 1, 0]], dtype=object)
    while work[1, 0] != 0:
        quotient = work[0, 0] // work[1, 0]
        work[0] -= quotient * work[1]
        work = work[::-1].copy()
    g = work[0, 0]
    M = work[:, 1:].copy()
    M *= np.array([a_sign, b_sign], dtype=object)
    if g != 0:
        M[1] = [-b_sign * b // g, a_sign * a // g]
    return M


def _inv_2x2_det1(M: np.ndarray) -> np.ndarray:
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]], dtype=object)


class _Elimination:
    """Working state of one Smith reduction: ``P A Q == D`` at all times."""

    def __init__(self, A: IntMatrix) -> None:
        self.D = A.to_array()
        m, k = self.D.shape
        self.P = np.eye(m, dtype=object)
        self.P_inv = np.eye(m, dtype=object)
        self.Q = np.eye(k, dtype=object)
        self.ops = 0

    def row_op(self, i: int, j: int, M: np.ndarray) -> None:
        """Left-multiply rows ``i, j`` by the unimodular 2x2 ``M``."""
        self.D[[i, j]] = M @ self.D[[i, j]]
        self.P[[i, j]] = M @ self.P[[i, j]]
        self.P_inv[:, [i, j]] = self.P_inv[:, [i, j]] @ _inv_2x2_det1(M)
        self.ops += 1

    def col_op(self, i: int, j: int, M: np.ndarray) -> None:
        """Right-multiply columns ``i, j`` by the unimodular 2x2 ``M``."""
        self.D[:, [i, j]] = self.D[:, [i, j]] @ M
        self.Q[:, [i, j]] = self.Q[:, [i, j]] @ M
        self.ops += 1

    def swap_rows(self, i: int, j: int) -> None:
        if i != j:
            self.D[[i, j]] = self.D[[j, i]]
            self.P[[i, j]] = self.P[[j, i]]
            self.P_inv[:, [i, j]] = self.P_inv[:, [j, i]]

    def swap_cols(self, i: int, j: int) -> None:
        if i != j:
            self.D[:, [i, j]] = self.D[:, [j, i]]
            self.Q[:, [i, j]] = self.Q[:, [j, i]]

    def negate_row(self, i: int) -> None:
        self.D[i] = -self.D[i]
        self.P[i] = -self.P[i]
        self.P_inv[:, i] = -self.P_inv[:, i]

    def pivot(self, t: int) -> bool:
        """Move the smallest nonzero ``|entry|`` of the trailing block to ``(t, t)``."""
        block = self.D[t:, t:]
        candidates = [
            (abs(block[i, j]), i, j)
            for i in range(block.shape[0])
            for j in range(block.shape[1])
            if block[i, j] != 0
        ]
        if not candidates:
            return False
        _, i, j = min(candidates)
        self.swap_rows(t, t + i)
        self.swap_cols(t, t + j)
        return True

    def clear(self, t: int) -> None:
        """Zero row ``t`` and column ``t`` outside the diagonal."""
        m, k = self.D.shape
        while True:
            for i in range(t + 1, m):
                if self.D[i, t] != 0:
                    self.row_op(t, i, exgcd(self.D[t, t], self.D[i, t]))
            if all(self.D[t, j] == 0 for j in range(t + 1, k)):
                break
            for j in range(t + 1, k):
                if self.D[t, j] != 0:
                    self.col_op(t, j, exgcd(self.D[t, t], self.D[t, j]).T)
            if all(self.D[i, t] == 0 for i in range(t + 1, m)):
                break
        if self.D[t, t] < 0:
            self.negate_row(t)

    def repair_chain(self, rank: int) -> None:
        """Enforce ``d_i | d_j`` for ``i < j`` by ``(a, b) -> (gcd, lcm)`` moves."""
        for i in range(rank):
            for j in range(i + 1, rank):
                a, b = self.D[i, i], self.D[j, j]
                if b % a == 0:
                    continue
                M = exgcd(a, b)
                x, y = M[0, 0], M[0, 1]
                g = x * a + y * b
                self.row_op(i, j, M)
                right = np.array([[1, -y * b // g], [1, x * a // g]], dtype=object)
                self.col_op(i, j, right)


def snf(A: IntMatrix) -> SNFResult:
    """Smith normal form with certificates, re-verified by multiplication.

    Raises:
        InvariantViolation: If a certificate check fails.
    """
    work = _Elimination(A)
    found = 0
    for t in range(min(A.shape)):
        if not work.pivot(t):
            break
        work.clear(t)
        found += 1
    work.repair_chain(found)

    result = SNFResult(
        P=IntMatrix.from_array(work.P),
        Q=IntMatrix.from_array(work.Q),
        D=IntMatrix.from_array(work.D),
        alphas=tuple(int(work.D[i, i]) for i in range(found)),
        P_inv=IntMatrix.from_array(work.P_inv),
    )
    _verify_certificate(A, result)
    logger.debug(
        "snf %dx%d: rank %d, alphas %s, %d row/column operations",
        A.rows,
        A.cols,
        found,
        result.alphas,
        work.ops,
    )
    return result


def _verify_certificate(A: IntMatrix, result: SNFResult) -> None:
    if result.P @ A @ result.Q != result.D:
        raise InvariantViolation("P A Q != D")
    if result.P @ result.P_inv != IntMatrix.identity(A.rows):
        raise InvariantViolation("P P_inv != I")
    for name, mat in (("P", result.P), ("Q", result.Q)):
        if abs(mat.determinant()) != 1:
            raise InvariantViolation(f"|det {name}| != 1")
    for i in range(A.rows):
        for j in range(A.cols):
            expected = result.alphas[i] if i == j and i < result.rank else 0
            if result.D[i, j] != expected:
                raise InvariantViolation(f"D is not diagonal at ({i}, {j})")
    if not smith_chain_ok(result.alphas):
        raise InvariantViolation(f"divisibility chain broken: {result.alphas}")


def smith_chain_ok(alphas: Sequence[int]) -> bool:
    """True iff all entries are positive and each divides the next."""
    if any(a < 1 for a in alphas):
        return False
    return all(b % a == 0 for a, b in itertools.pairwise(alphas))


# ---------------------------------------------------------------------------
# Oracles and derived quantities
# ---------------------------------------------------------------------------


def invariant_factors_by_minors(A: IntMatrix) -> list[int]:
    """Invariant factors from gcds of minors: ``alpha_i = d_i / d_(i-1)``.

    Exponential in the matrix size; intended only as an oracle against
    :func:`snf`.
    """
    divisors: list[int] = []
    for size in range(1, min(A.shape) + 1):
        d = 0
        for rows in itertools.combinations(range(A.rows), size):
            for cols in itertools.combinations(range(A.cols), size):
                minor = IntMatrix(tuple(tuple(A[i, j] for j in cols) for i in rows))
                d = gcd(d, minor.determinant())
                if d == 1:
                    break
            if d == 1:
                break
        if d == 0:
            break
        divisors.append(d)
    alphas: list[int] = []
    previous = 1
    for d in divisors:
        alphas.append(d // previous)
        previous = d
    return alphas


def rank(A: IntMatrix, snf_result: SNFResult | None = None) -> int:
    """Rank over the rationals, counted from the Smith invariant factors."""
    return (snf_result or snf(A)).rank


def rational_rank(A: IntMatrix) -> int:
    """Rank over ``QQ`` by sympy's fraction-free elimination (independent of SNF)."""
    return int(DomainMatrix(A._domain_rows(QQ), A.shape, QQ).rank())


def kernel_basis(
    A: IntMatrix, snf_result: SNFResult | None = None
) -> list[tuple[int, ...]]:
    """Basis of the integer kernel lattice: columns of ``Q`` past the rank.

    Raises:
        InvariantViolation: If a returned vector is not in the kernel.
    """
    result = snf_result or snf(A)
    basis = [result.Q.column(j) for j in range(result.rank, A.cols)]
    for v in basis:
        if any(A.apply(v)):
            raise InvariantViolation(f"kernel vector {v} not annihilated")
    return basis


@dataclass(frozen=True)
class Membership:
    """Answer of :func:`image_membership`; truthy when ``v`` is in the image."""

    member: bool
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.member


def _smith_coordinates(
    A: IntMatrix, v: Sequence[int], snf_result: SNFResult | None
) -> tuple[SNFResult, tuple[int, ...]]:
    if len(v) != A.rows:
        raise DimensionMismatchError(A.rows, len(v), "vector length")
    result = snf_result or snf(A)
    return result, result.P.apply(v)


def image_membership(
    A: IntMatrix, v: Sequence[int], snf_result: SNFResult | None = None
) -> Membership:
    """Decide whether ``A x = v`` has an integer solution.

    With ``w = P v``: solvable iff ``alpha_i | w_i`` on the diagonal support
    and ``w_i == 0`` past the rank.  The witness is ``x = Q y`` with
    ``y_i = w_i / alpha_i``.

    Raises:
        DimensionMismatchError: If ``len(v) != rows``.
    """
    result, w = _smith_coordinates(A, v, snf_result)
    r = result.rank
    if any(w[i] for i in range(r, A.rows)):
        return Membership(False)
    if any(w[i] % result.alphas[i] for i in range(r)):
        return Membership(False)
    y = [w[i] // result.alphas[i] for i in range(r)] + [0] * (A.cols - r)
    x = result.Q.apply(y)
    if A.apply(x) != tuple(v):
        raise InvariantViolation(f"membership witness {x} does not map to {tuple(v)}")
    return Membership(True, x)


def coker_order(
    A: IntMatrix, v: Sequence[int], snf_result: SNFResult | None = None
) -> int | Literal["infinite"]:
    """Order of ``v`` in ``Z^rows / Im(A)``.

    ``"infinite"`` when ``v`` has a nonzero free Smith coordinate, otherwise
    ``lcm_i alpha_i / gcd(alpha_i, w_i)`` with ``w = P v``.

    Raises:
        DimensionMismatchError: If ``len(v) != rows``.
    """
    result, w = _smith_coordinates(A, v, snf_result)
    r = result.rank
    if any(w[i] for i in range(r, A.rows)):
        return INFINITE
    order = 1
    for alpha, wi in zip(result.alphas, w):
        order = lcm(order, alpha // gcd(alpha, wi))
    return order
