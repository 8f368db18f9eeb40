"""The truncated polynomial ring ``Z[u]/u^(n+1)``.

This ring is the K_0 group of quantum projective space, with
``u = 1 - [L_-1]``.  The module models classes of line bundles and of the
projections ``P_N``, the Euler class of ``L_-r``, the pairings with the
Fredholm modules ``mu_k`` and the binomial change of basis between
``{[P_0], [P_-1], .., [P_-n]}`` and ``{1, u, .., u^n}``.

Only pairing values of the Fredholm modules are modelled; they are fixed by
``<mu_k, u^j> = (-1)^j`` when ``j == k`` and ``0`` otherwise.
"""

import logging
import re
from dataclasses import dataclass
from math import comb

from .exceptions import DimensionMismatchError, InvariantViolation, PreconditionError

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# TruncPoly
# ---------------------------------------------------------------------------

_TERM = re.compile(r"([+-]?)(\d*)\*?(?:(u~|ũ|u)(?:\^(\d+))?)?")


@dataclass(frozen=True)
class TruncPoly:
    """Integer polynomial ``sum c_k u^k`` with ``u^(n+1) = 0``.

    Attributes:
        n: Degree bound; ``coeffs`` always has ``n + 1`` entries.
        coeffs: ``(c_0, .., c_n)``.
    """

    n: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise PreconditionError(
                "TruncPoly", f"n must be non-negative, got {self.n}"
            )
        if len(self.coeffs) != self.n + 1:
            raise DimensionMismatchError(self.n + 1, len(self.coeffs), "coefficients")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_coeffs(cls, n: int, coeffs: list[int] | tuple[int, ...]) -> "TruncPoly":
        """Build from any number of coefficients, truncating or zero-padding."""
        padded = [int(c) for c in coeffs[: n + 1]]
        padded += [0] * (n + 1 - len(padded))
        return cls(n, tuple(padded))

    @classmethod
    def zero(cls, n: int) -> "TruncPoly":
        """The zero class."""
        return cls(n, (0,) * (n + 1))

    @classmethod
    def one(cls, n: int) -> "TruncPoly":
        """The unit ``1 = [L_0]``."""
        return cls.monomial(n, 0)

    @classmethod
    def monomial(cls, n: int, k: int, coeff: int = 1) -> "TruncPoly":
        """``coeff * u^k`` (zero when ``k > n``)."""
        if k < 0:
            raise PreconditionError(
                "TruncPoly.monomial", f"power must be >= 0, got {k}"
            )
        coeffs = [0] * (n + 1)
        if k <= n:
            coeffs[k] = coeff
        return cls(n, tuple(coeffs))

    @classmethod
    def u(cls, n: int) -> "TruncPoly":
        """The generator ``u``."""
        return cls.monomial(n, 1)

    @classmethod
    def parse(cls, text: str, n: int) -> "TruncPoly":
        """Parse ``"u^3 + 12u"``, ``"2u - u^2"`` or ``"u~^2+6u~"``.

        Powers above ``n`` vanish in the ring and are dropped.

        Raises:
            ValueError: If the text is not an integer polynomial in ``u``.
        """
        source = text.replace(" ", "").replace("−", "-")
        if not source:
            raise ValueError("empty polynomial")
        coeffs = [0] * (n + 1)
        pos = 0
        while pos < len(source):
            match = _TERM.match(source, pos)
            if match is None or match.end() == pos:
                raise ValueError(f"cannot parse {text!r} at position {pos}")
            sign, digits, var, power = match.groups()
            if pos > 0 and not sign:
                raise ValueError(f"missing operator in {text!r} at position {pos}")
            if not digits and not var:
                raise ValueError(f"dangling sign in {text!r} at position {pos}")
            value = int(digits) if digits else 1
            if sign == "-":
                value = -value
            degree = (int(power) if power else 1) if var else 0
            if degree <= n:
                coeffs[degree] += value
            else:
                logger.debug("Dropping u^%d from %r (n=%d)", degree, text, n)
            pos = match.end()
        return cls(n, tuple(coeffs))

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "TruncPoly") -> None:
        if self.n != other.n:
            raise DimensionMismatchError(self.n, other.n, "truncation degree")

    def __add__(self, other: "TruncPoly") -> "TruncPoly":
        self._check(other)
        summed = tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        return TruncPoly(self.n, summed)

    def __neg__(self) -> "TruncPoly":
        return TruncPoly(self.n, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "TruncPoly") -> "TruncPoly":
        return self + (-other)

    def __mul__(self, other: "TruncPoly | int") -> "TruncPoly":
        if isinstance(other, int):
            return TruncPoly(self.n, tuple(other * c for c in self.coeffs))
        return trunc_mul(self, other)

    def __rmul__(self, other: int) -> "TruncPoly":
        return TruncPoly(self.n, tuple(other * c for c in self.coeffs))

    def __pow__(self, power: int) -> "TruncPoly":
        if power < 0:
            return self.inverse() ** (-power)
        result = TruncPoly.one(self.n)
        base = self
        while power:
            if power & 1:
                result = trunc_mul(result, base)
            base = trunc_mul(base, base)
            power >>= 1
        return result

    def inverse(self) -> "TruncPoly":
        """Multiplicative inverse of a unit (constant term ``+-1``).

        Raises:
            PreconditionError: If the constant term is not a unit of ``Z``.
        """
        c0 = self.coeffs[0]
        if c0 not in (1, -1):
            raise PreconditionError(
                "TruncPoly.inverse", f"constant term must be +-1, got {c0}"
            )
        # x = c0 (1 - y) with y nilpotent, so x^-1 = c0 (1 + y + .. + y^n)
        y = TruncPoly.one(self.n) - self * c0
        total = TruncPoly.one(self.n)
        term = TruncPoly.one(self.n)
        for _ in range(self.n):
            term = trunc_mul(term, y)
            total = total + term
        return total * c0

    @property
    def is_zero(self) -> bool:
        """True for the zero class."""
        return not any(self.coeffs)

    @property
    def augmentation(self) -> int:
        """The constant coefficient (the rank of the class)."""
        return self.coeffs[0]

    # -- display ------------------------------------------------------------

    def format(self, var: str = "u") -> str:
        """Render as ``c0 + c1 u + c2 u^2`` with ``var`` for the variable."""
        pieces: list[str] = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                power = var if k == 1 else f"{var}^{k}"
                body = power if mag == 1 else f"{mag}{power}"
            pieces.append(("- " if c < 0 else "+ ") + body)
        if not pieces:
            return "0"
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __str__(self) -> str:
        return self.format()


def trunc_mul(a: TruncPoly, b: TruncPoly) -> TruncPoly:
    """Product truncated at degree ``n``.

    Raises:
        DimensionMismatchError: If the truncation degrees differ.
    """
    a._check(b)
    n = a.n
    out = [0] * (n + 1)
    for i, x in enumerate(a.coeffs):
        if not x:
            continue
        for j in range(n + 1 - i):
            out[i + j] += x * b.coeffs[j]
    return TruncPoly(n, tuple(out))


# ---------------------------------------------------------------------------
# Classes, Euler class and pairings
# ---------------------------------------------------------------------------


def line_bundle_class(n: int, N: int) -> TruncPoly:
    """Class of the line bundle ``L_N``.

    ``[L_-m] = (1 - u)^m`` for ``m >= 0``; for ``N > 0`` the class is the
    truncated inverse ``(1 - u)^-N``, whose coefficients are
    ``C(N + k - 1, k)``.
    """
    if N <= 0:
        m = -N
        return TruncPoly(n, tuple((-1) ** k * comb(m, k) for k in range(n + 1)))
    return TruncPoly(n, tuple(comb(N + k - 1, k) for k in range(n + 1)))


def projection_class(n: int, N: int) -> TruncPoly:
    """Class of the projection ``P_N``, which represents ``L_N``."""
    return line_bundle_class(n, N)


def euler_class(n: int, r: int) -> TruncPoly:
    """Euler class ``1 - [L_-r] = sum_{j=1}^{min(r,n)} (-1)^(j+1) C(r,j) u^j``.

    Raises:
        PreconditionError: If ``r < 1``.
    """
    if r < 1:
        raise PreconditionError("euler_class", f"r must be positive, got {r}")
    coeffs = [0] + [(-1) ** (j + 1) * comb(r, j) for j in range(1, n + 1)]
    return TruncPoly(n, tuple(coeffs))


def pair_mu(k: int, x: TruncPoly) -> int:
    """Pairing ``<mu_k, x> = (-1)^k c_k``.

    Raises:
        PreconditionError: If ``k`` is outside ``[0, n]``.
    """
    if not 0 <= k <= x.n:
        raise PreconditionError("pair_mu", f"k must lie in [0, {x.n}], got {k}")
    return (-1) ** k * x.coeffs[k]


def pairing_grid(n: int, n_max: int) -> list[list[int]]:
    """Rows ``k = 0..n`` of ``<mu_k, [P_-N]>`` for ``N = 0..n_max``."""
    return [
        [pair_mu(k, projection_class(n, -big_n)) for big_n in range(n_max + 1)]
        for k in range(n + 1)
    ]


def line_bundle_grid(n: int, lo: int, hi: int) -> list[list[int]]:
    """Rows ``k = 0..n`` of ``<mu_k, [L_N]>`` for ``N = lo..hi``."""
    return [
        [pair_mu(k, line_bundle_class(n, big_n)) for big_n in range(lo, hi + 1)]
        for k in range(n + 1)
    ]


def u_pairing_grid(n: int) -> list[list[int]]:
    """Rows ``k = 0..n`` of ``<mu_k, u^j>`` for ``j = 0..n``."""
    return [
        [pair_mu(k, TruncPoly.monomial(n, j)) for j in range(n + 1)]
        for k in range(n + 1)
    ]


# ---------------------------------------------------------------------------
# Basis change
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairingMatrix:
    """Binomial matrix ``M_ij = C(j, i)`` and its integral inverse.

    ``M`` sends coordinates in the basis ``{[P_-j]}`` to the pairing values
    ``<mu_i, .>``.
    """

    n: int
    matrix: tuple[tuple[int, ...], ...]
    inverse: tuple[tuple[int, ...], ...]

    def to_u_basis(self, p_coords: list[int] | tuple[int, ...]) -> TruncPoly:
        """Convert ``sum_j a_j [P_-j]`` to its ``u``-basis class.

        Uses ``c_k = (-1)^k (M a)_k``.
        """
        if len(p_coords) != self.n + 1:
            raise DimensionMismatchError(self.n + 1, len(p_coords), "P-coordinates")
        paired = [sum(m * a for m, a in zip(row, p_coords)) for row in self.matrix]
        return TruncPoly(self.n, tuple((-1) ** k * v for k, v in enumerate(paired)))

    def to_p_basis(self, x: TruncPoly) -> tuple[int, ...]:
        """Coordinates of ``x`` in the basis ``{[P_0], .., [P_-n]}``."""
        if x.n != self.n:
            raise DimensionMismatchError(self.n, x.n, "truncation degree")
        paired = [pair_mu(k, x) for k in range(self.n + 1)]
        return tuple(sum(m * v for m, v in zip(row, paired)) for row in self.inverse)


def basis_change_P_to_u(n: int) -> PairingMatrix:
    """Return the pairing matrix and its verified inverse.

    Raises:
        PreconditionError: If ``n < 1``.
        InvariantViolation: If the closed-form inverse does not invert.
    """
    if n < 1:
        raise PreconditionError("basis_change_P_to_u", f"n must be at least 1, got {n}")
    size = n + 1
    matrix = tuple(tuple(comb(j, i) for j in range(size)) for i in range(size))
    inverse = tuple(
        tuple((-1) ** (i + j) * comb(j, i) for j in range(size)) for i in range(size)
    )
    for i in range(size):
        for k in range(size):
            entry = sum(matrix[i][j] * inverse[j][k] for j in range(size))
            if entry != (i == k):
                raise InvariantViolation(f"binomial inverse fails at ({i}, {k})")
    return PairingMatrix(n=n, matrix=matrix, inverse=inverse)
