"""Exact scalar arithmetic for q-coefficients.

Coefficients of the quantum-sphere algebra live in the ring of Laurent
polynomials in a formal variable ``s`` with ``s**2 == q``.  Storing integer
powers of ``s`` makes half-integer powers of ``q`` exact, so nothing in the
package ever touches floating point.  ``q`` stays symbolic throughout.

Rationals are :class:`fractions.Fraction`, which already keeps numerator and
denominator coprime with a positive denominator.
"""

import functools
import logging
from collections.abc import Iterable, Iterator, Mapping
from fractions import Fraction
from typing import Union

from .exceptions import InvariantViolation, PreconditionError

logger = logging.getLogger(__name__)

Rational = Fraction
"""Arbitrary-precision rational number, always in lowest terms."""

Scalar = Union[int, Fraction]


class HalfLaurent:
    """Immutable Laurent polynomial in ``s`` (``s**2 == q``) over the rationals.

    ``terms`` maps an exponent ``e`` (meaning ``s**e == q**(e/2)``) to a
    nonzero rational coefficient.  Zero coefficients are never stored, so
    two values are equal exactly when their term maps are.

    Example::

        >>> qint(2)
        HalfLaurent('s^2 + s^-2')
        >>> (q_power(1) - 1) * (q_power(1) + 1)
        HalfLaurent('s^4 - 1')
    """

    __slots__ = ("_hash", "_terms")

    def __init__(self, terms: Mapping[int, Scalar] | None = None) -> None:
        clean: dict[int, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                value = Fraction(coeff)
                if value:
                    clean[int(exp)] = value
        self._terms = clean
        self._hash: int | None = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "HalfLaurent":
        """Return the additive identity."""
        return cls()

    @classmethod
    def one(cls) -> "HalfLaurent":
        """Return the multiplicative identity."""
        return cls({0: 1})

    @classmethod
    def monomial(cls, exp: int, coeff: Scalar = 1) -> "HalfLaurent":
        """Return ``coeff * s**exp``."""
        return cls({exp: coeff})

    @classmethod
    def _from_clean(cls, terms: dict[int, Fraction]) -> "HalfLaurent":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict[int, Fraction]:
        """A copy of the exponent-to-coefficient map."""
        return dict(self._terms)

    def items(self) -> Iterator[tuple[int, Fraction]]:
        """Iterate ``(exponent, coefficient)`` pairs by increasing exponent."""
        return iter(sorted(self._terms.items()))

    def coefficient(self, exp: int) -> Fraction:
        """Return the coefficient of ``s**exp`` (zero if absent)."""
        return self._terms.get(exp, Fraction(0))

    @property
    def is_zero(self) -> bool:
        """True for the zero polynomial."""
        return not self._terms

    @property
    def is_monomial(self) -> bool:
        """True when exactly one term is stored."""
        return len(self._terms) == 1

    @property
    def min_exp(self) -> int:
        """Lowest exponent present; raises on zero."""
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return min(self._terms)

    @property
    def max_exp(self) -> int:
        """Highest exponent present; raises on zero."""
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return max(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other: object) -> "HalfLaurent | None":
        if isinstance(other, HalfLaurent):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return HalfLaurent({0: other})
        return None

    def __add__(self, other: object) -> "HalfLaurent":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self._terms)
        for exp, coeff in rhs._terms.items():
            value = out.get(exp, 0) + coeff
            if value:
                out[exp] = value
            else:
                out.pop(exp, None)
        return HalfLaurent._from_clean(out)

    __radd__ = __add__

    def __neg__(self) -> "HalfLaurent":
        return HalfLaurent._from_clean({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: object) -> "HalfLaurent":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> "HalfLaurent":
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: object) -> "HalfLaurent":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in rhs._terms.items():
                exp = e1 + e2
                out[exp] = out.get(exp, 0) + c1 * c2
        return HalfLaurent._from_clean({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "HalfLaurent":
        if power < 0:
            if not self.is_monomial:
                raise PreconditionError(
                    "HalfLaurent.__pow__", "only monomials have Laurent inverses"
                )
            ((exp, coeff),) = self._terms.items()
            return HalfLaurent({exp * power: coeff**power})
        result = HalfLaurent.one()
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def scale_exp(self, shift: int) -> "HalfLaurent":
        """Return ``self * s**shift``."""
        return HalfLaurent._from_clean({e + shift: c for e, c in self._terms.items()})

    def bar(self) -> "HalfLaurent":
        """Substitute ``s -> 1/s`` (equivalently ``q -> 1/q``)."""
        return HalfLaurent._from_clean({-e: c for e, c in self._terms.items()})

    def exact_div(self, divisor: "HalfLaurent") -> "HalfLaurent":
        """Divide exactly by another Laurent polynomial.

        Runs long division from the top exponent down.  Over the rationals
        every leading coefficient is invertible, so the only failure mode is
        a nonzero remainder.

        Raises:
            ZeroDivisionError: If ``divisor`` is zero.
            InvariantViolation: If the division leaves a remainder.
        """
        if divisor.is_zero:
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if self.is_zero:
            return HalfLaurent()
        top, low = divisor.max_exp, divisor.min_exp
        lead = divisor._terms[top]
        floor = self.min_exp - low  # lowest exponent an exact quotient can have
        remainder = self
        quotient: dict[int, Fraction] = {}
        while remainder and remainder.max_exp - top >= floor:
            shift = remainder.max_exp - top
            coeff = remainder._terms[remainder.max_exp] / lead
            quotient[shift] = coeff
            remainder = remainder - divisor.scale_exp(shift) * coeff
        if remainder:
            raise InvariantViolation(
                f"inexact Laurent division ({self}) / ({divisor}), "
                f"remainder {remainder}"
            )
        return HalfLaurent(quotient)

    # -- comparison & hashing -----------------------------------------------

    def __eq__(self, other: object) -> bool:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self._terms == rhs._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- display ------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for exp, coeff in sorted(self._terms.items(), reverse=True):
            sign = "-" if coeff < 0 else "+"
            mag = abs(coeff)
            if exp == 0:
                body = str(mag)
            else:
                power = "s" if exp == 1 else f"s^{exp}"
                if mag == 1:
                    body = power
                elif mag.denominator == 1:
                    body = f"{mag}{power}"
                else:
                    body = f"({mag}){power}"
            pieces.append(f"{sign} {body}")
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self) -> str:
        return f"HalfLaurent('{self}')"


# ---------------------------------------------------------------------------
# Named constants and q-combinatorics
# ---------------------------------------------------------------------------


def q_power(k: int) -> HalfLaurent:
    """Return ``q**k`` (that is ``s**(2k)``)."""
    return HalfLaurent.monomial(2 * k)


def s_power(e: int) -> HalfLaurent:
    """Return ``s**e`` (that is ``q**(e/2)``)."""
    return HalfLaurent.monomial(e)


ONE = HalfLaurent.one()
ZERO = HalfLaurent.zero()
ONE_MINUS_Q2 = HalfLaurent({0: 1, 4: -1})
"""The recurring factor ``1 - q**2``."""


@functools.lru_cache(maxsize=256)
def qint(m: int) -> HalfLaurent:
    """Return the balanced q-integer ``(q**m - q**-m) / (q - q**-1)``.

    For ``m > 0`` this is ``q**(m-1) + q**(m-3) + ... + q**-(m-1)``;
    ``qint(-m) == -qint(m)`` and ``qint(0) == 0``.
    """
    if m == 0:
        return ZERO
    if m < 0:
        return -qint(-m)
    return HalfLaurent({2 * (m - 1 - 2 * k): 1 for k in range(m)})


@functools.lru_cache(maxsize=256)
def qfact(m: int) -> HalfLaurent:
    """Return the q-factorial ``[m][m-1]...[1]`` with ``[0]! == 1``.

    Raises:
        PreconditionError: If ``m`` is negative.
    """
    if m < 0:
        raise PreconditionError("qfact", f"argument must be non-negative, got {m}")
    if m == 0:
        return ONE
    return qfact(m - 1) * qint(m)


def qmultinomial(j: Iterable[int]) -> HalfLaurent:
    """Return ``[sum j]! / prod [j_i]!`` computed by exact Laurent division.

    Raises:
        PreconditionError: If any entry is negative.
        InvariantViolation: If the division is not exact.
    """
    parts = tuple(j)
    return _qmultinomial_sorted(tuple(sorted(parts)))


@functools.lru_cache(maxsize=1024)
def _qmultinomial_sorted(parts: tuple[int, ...]) -> HalfLaurent:
    if any(p < 0 for p in parts):
        raise PreconditionError(
            "qmultinomial", f"entries must be non-negative, got {list(parts)}"
        )
    denominator = ONE
    for p in parts:
        denominator = denominator * qfact(p)
    return qfact(sum(parts)).exact_div(denominator)


def eval_at_one(x: HalfLaurent) -> Fraction:
    """Substitute ``s = 1`` (the classical limit ``q = 1``)."""
    return sum(x.terms.values(), Fraction(0))
