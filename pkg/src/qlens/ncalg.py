"""Symbolic engine for the coordinate algebra of the quantum sphere.

The algebra is generated by ``z_0 .. z_n`` and their adjoints subject to::

    z_i z_j   = q^-1 z_j z_i                      (i < j)
    z_i* z_j  = q z_j z_i*                        (i != j)
    z_n* z_n  = z_n z_n*
    z_i* z_i  = z_i z_i* + (1 - q^2) sum_{j>i} z_j z_j*     (i < n)
    sum_j z_j z_j* = 1

Normal words
    A word is normal when it reads ``z_{a1} .. z_{ak} z_{b1}* .. z_{bm}*``
    with ``a1 >= .. >= ak`` and ``b1 <= .. <= bm``, and does not contain both
    ``z_n`` and ``z_n*``.  Words holding both are rewritten with the sphere
    relation at the junction of the unstarred and starred blocks.  ``z_n``
    is normal and q-commutes with every generator, which makes that move an
    exact reformulation of ``z_n z_n* = 1 - sum_{j<n} z_j z_j*``.

Reduction works by insertion: a word is folded right to left, each letter
being pushed into an already-normal word.  Results of ``insert(letter,
word)`` are memoized per ambient ``n``; a memo entry is stored only once it
is complete, so an aborted reduction never leaves partial state behind.
The memo is the only module-level state.  It caches a pure function, so
results never depend on it; only the rewrite-budget count does, since
memoized sub-results cost nothing.  Rewriter creation and
:func:`clear_rewrite_cache` take a lock, and concurrent writers of one
entry keep the first stored value, so verifications may run in parallel
threads.

Square roots
    Components of ``Psi_N`` carry ``sqrt([j]!)``-type coefficients which the
    coefficient ring cannot hold.  Every :class:`NCPoly` therefore carries a
    ``radical``: a sorted tuple of canonical multi-indices whose square roots
    multiply the element.  Equal tags pair up in products into the exact
    q-multinomial; adding nonzero elements with different tags raises
    :class:`~qlens.exceptions.UnsupportedIdentityError`.
"""

import itertools
import logging
import random
import threading
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Literal, NamedTuple

from .config import DEFAULT_REWRITE_BUDGET
from .exceptions import (
    DimensionMismatchError,
    PreconditionError,
    RewriteBudgetExceeded,
    UnsupportedIdentityError,
)
from .qcoeff import ONE, ONE_MINUS_Q2, HalfLaurent, q_power, qmultinomial, s_power

logger = logging.getLogger(__name__)

INHOMOGENEOUS: Literal["inhomogeneous"] = "inhomogeneous"

_Q = q_power(1)
_Q_INV = q_power(-1)


# ---------------------------------------------------------------------------
# Letters and words
# ---------------------------------------------------------------------------


class Generator(NamedTuple):
    """One of the letters ``z_i`` (``starred=False``) or ``z_i*``."""

    index: int
    starred: bool = False

    def adjoint(self) -> "Generator":
        """Toggle the star."""
        return Generator(self.index, not self.starred)

    def __str__(self) -> str:
        return f"z{self.index}'" if self.starred else f"z{self.index}"


Word = tuple[Generator, ...]
Radical = tuple[tuple[int, ...], ...]


def format_word(word: Word) -> str:
    """Render a word as ``z1 z0'``; the empty word is ``1``."""
    return " ".join(str(g) for g in word) if word else "1"


def parse_word(text: str) -> Word:
    """Parse ``"z1 z0' z2'"`` (whitespace separated, ``1`` for empty).

    Raises:
        ValueError: On an unrecognised token.
    """
    letters: list[Generator] = []
    for token in text.split():
        if token == "1":
            continue
        starred = token.endswith(("'", "*"))
        body = token[:-1] if starred else token
        if not body.startswith("z") or not body[1:].isdigit():
            raise ValueError(f"cannot parse generator {token!r}")
        letters.append(Generator(int(body[1:]), starred))
    return tuple(letters)


def is_normal_word(word: Word, n: int) -> bool:
    """Check whether ``word`` is a normal word of the algebra on ``n + 1`` letters."""
    last_plain: int | None = None
    last_star: int | None = None
    has_top = has_top_star = False
    for g in word:
        if not 0 <= g.index <= n:
            return False
        if g.starred:
            if last_star is not None and g.index < last_star:
                return False
            last_star = g.index
            has_top_star = has_top_star or g.index == n
        else:
            if last_star is not None:
                return False
            if last_plain is not None and g.index > last_plain:
                return False
            last_plain = g.index
            has_top = has_top or g.index == n
    return not (has_top and has_top_star)


def word_degree(word: Word) -> int:
    """U(1) weight of a word: unstarred letters minus starred letters."""
    return sum(-1 if g.starred else 1 for g in word)


def _word_sort_key(word: Word) -> tuple[int, Word]:
    return (len(word), word)


# ---------------------------------------------------------------------------
# Rewriting
# ---------------------------------------------------------------------------

_Expansion = dict[Word, HalfLaurent]


def _check_ambient(n: int) -> None:
    if n < 1:
        raise PreconditionError("NCPoly", f"ambient n must be at least 1, got {n}")


def _accumulate(out: _Expansion, word: Word, coeff: HalfLaurent) -> None:
    current = out.get(word)
    value = coeff if current is None else current + coeff
    if value:
        out[word] = value
    else:
        out.pop(word, None)


def _scaled(expansion: Mapping[Word, HalfLaurent], factor: HalfLaurent) -> _Expansion:
    return {w: c * factor for w, c in expansion.items()}


class _StepCounter:
    """Counts rule applications for one top-level reduction."""

    __slots__ = ("budget", "steps")

    def __init__(self, budget: int) -> None:
        if budget <= 0:
            raise PreconditionError(
                "normal_form", f"budget must be positive, got {budget}"
            )
        self.budget = budget
        self.steps = 0

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.budget:
            raise RewriteBudgetExceeded(self.budget, self.steps)


class _Rewriter:
    """Memoized insertion rewriter for a fixed ambient ``n``."""

    def __init__(self, n: int) -> None:
        self.n = n
        self.top_star = Generator(n, True)
        self._memo: dict[tuple[Generator, Word], _Expansion] = {}

    def __len__(self) -> int:
        return len(self._memo)

    def reduce(self, word: Word, counter: _StepCounter) -> _Expansion:
        """Normal form of an arbitrary word."""
        acc: _Expansion = {(): ONE}
        for letter in reversed(word):
            acc = self.left_mul(letter, acc, counter)
        return acc

    def left_mul(
        self,
        letter: Generator,
        expansion: Mapping[Word, HalfLaurent],
        counter: _StepCounter,
    ) -> _Expansion:
        """Multiply a normal expansion on the left by one letter."""
        out: _Expansion = {}
        for word, coeff in expansion.items():
            for new_word, factor in self._insert(letter, word, counter).items():
                _accumulate(out, new_word, coeff * factor)
        return out

    def _insert(self, x: Generator, word: Word, counter: _StepCounter) -> _Expansion:
        key = (x, word)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        result = self._insert_uncached(x, word, counter)
        return self._memo.setdefault(key, result)

    def _insert_uncached(
        self, x: Generator, word: Word, counter: _StepCounter
    ) -> _Expansion:
        if not word:
            return {(x,): ONE}
        head, tail = word[0], word[1:]

        if not x.starred:
            if head.starred or x.index >= head.index:
                if x.index == self.n and word[-1] == self.top_star:
                    counter.tick()
                    return self._absorb(word, counter)
                return {(x, *word): ONE}
            # z_x z_h with x < h
            counter.tick()
            moved = self.left_mul(head, self._insert(x, tail, counter), counter)
            return _scaled(moved, _Q_INV)

        if not head.starred:
            counter.tick()
            moved = self.left_mul(head, self._insert(x, tail, counter), counter)
            if x.index != head.index:
                return _scaled(moved, _Q)
            if x.index == self.n:
                return moved
            out = dict(moved)
            for j in range(x.index + 1, self.n + 1):
                pair = (Generator(j), Generator(j, True))
                for w, c in self.reduce(pair + tail, counter).items():
                    _accumulate(out, w, c * ONE_MINUS_Q2)
            return out

        if x.index <= head.index:
            return {(x, *word): ONE}
        # z_x* z_h* with h < x
        counter.tick()
        moved = self.left_mul(head, self._insert(x, tail, counter), counter)
        return _scaled(moved, _Q_INV)

    def _absorb(self, word: Word, counter: _StepCounter) -> _Expansion:
        """Compute ``z_n * word`` where ``word`` is normal and ends in ``z_n*``."""
        n = self.n
        body = word[:-1]
        plain = tuple(g for g in body if not g.starred)
        low_stars = tuple(g for g in body if g.starred and g.index < n)
        top_stars = tuple(g for g in body if g.starred and g.index == n)
        factor = s_power(2 * (len(plain) + len(low_stars)))
        out: _Expansion = {body: factor}
        for j in range(n):
            pair = (Generator(j), Generator(j, True))
            shifted = plain + pair + low_stars + top_stars
            for w, c in self.reduce(shifted, counter).items():
                _accumulate(out, w, -(c * factor))
        return out


_REWRITERS: dict[int, _Rewriter] = {}
_REWRITERS_LOCK = threading.Lock()


def _rewriter(n: int) -> _Rewriter:
    if n < 1:
        raise PreconditionError("ncalg", f"ambient n must be at least 1, got {n}")
    rw = _REWRITERS.get(n)
    if rw is None:
        with _REWRITERS_LOCK:
            rw = _REWRITERS.setdefault(n, _Rewriter(n))
    return rw


def clear_rewrite_cache() -> None:
    """Drop all memoized insertion results.

    Reductions already running keep the rewriter they started with.
    """
    with _REWRITERS_LOCK:
        for n, rw in _REWRITERS.items():
            logger.debug("Dropping %d memo entries for n=%d", len(rw), n)
        _REWRITERS.clear()


# ---------------------------------------------------------------------------
# Radical tags
# ---------------------------------------------------------------------------


def radical_tag(j: Iterable[int]) -> tuple[int, ...] | None:
    """Canonical tag for ``sqrt(qmultinomial(j))``, or None when it equals 1."""
    parts = tuple(sorted(p for p in j if p))
    if len(parts) <= 1:
        return None
    return parts


def _merge_radicals(a: Radical, b: Radical) -> tuple[Radical, HalfLaurent]:
    counts = Counter(a) + Counter(b)
    factor = ONE
    rest: list[tuple[int, ...]] = []
    for tag, count in counts.items():
        pairs, odd = divmod(count, 2)
        if pairs:
            factor = factor * qmultinomial(tag) ** pairs
        if odd:
            rest.append(tag)
    return tuple(sorted(rest)), factor


def _format_radical(radical: Radical) -> str:
    return " ".join("sqrt[" + ",".join(map(str, tag)) + "]" for tag in radical)


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


class NCPoly:
    """Immutable element of the quantum-sphere algebra on ``n + 1`` generators.

    ``terms`` maps words to nonzero :class:`HalfLaurent` coefficients.  Every
    value returned by an algebra operation is in normal form; values built
    directly from arbitrary words are reduced by :func:`normal_form`.
    """

    __slots__ = ("_hash", "_normal", "n", "radical", "terms")

    def __init__(
        self,
        n: int,
        terms: Mapping[Word, HalfLaurent] | None = None,
        radical: Radical = (),
    ) -> None:
        _check_ambient(n)
        clean: dict[Word, HalfLaurent] = {}
        for word, coeff in (terms or {}).items():
            word = tuple(Generator(*g) for g in word)
            for g in word:
                if not 0 <= g.index <= n:
                    raise DimensionMismatchError(
                        f"index in [0, {n}]", g.index, "generator"
                    )
            if coeff:
                _accumulate(clean, word, coeff)
        self.n = n
        self.terms: dict[Word, HalfLaurent] = clean
        self.radical: Radical = radical if clean else ()
        self._normal = all(is_normal_word(w, n) for w in clean)
        self._hash: int | None = None

    @classmethod
    def _from_normal(cls, n: int, terms: _Expansion, radical: Radical = ()) -> "NCPoly":
        _check_ambient(n)
        obj = cls.__new__(cls)
        obj.n = n
        obj.terms = terms
        obj.radical = radical if terms else ()
        obj._normal = True
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "NCPoly":
        """Return the zero element."""
        return cls._from_normal(n, {})

    @classmethod
    def one(cls, n: int) -> "NCPoly":
        """Return the unit."""
        return cls._from_normal(n, {(): ONE})

    @classmethod
    def scalar(cls, n: int, coeff: HalfLaurent | int) -> "NCPoly":
        """Return ``coeff * 1``."""
        value = coeff if isinstance(coeff, HalfLaurent) else HalfLaurent({0: coeff})
        return cls._from_normal(n, {(): value} if value else {})

    @classmethod
    def generator(cls, n: int, index: int, starred: bool = False) -> "NCPoly":
        """Return the single letter ``z_index`` or its adjoint."""
        return cls(n, {(Generator(index, starred),): ONE})

    @classmethod
    def word(
        cls,
        n: int,
        word: Word | str,
        coeff: HalfLaurent | None = None,
        budget: int = DEFAULT_REWRITE_BUDGET,
    ) -> "NCPoly":
        """Return ``coeff * word`` reduced to normal form."""
        letters = parse_word(word) if isinstance(word, str) else tuple(word)
        return normal_form(cls(n, {letters: coeff or ONE}), budget)

    # -- inspection ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        """True for the zero element."""
        return not self.terms

    @property
    def is_normal(self) -> bool:
        """True when every stored word is a normal word."""
        return self._normal

    def coefficient(self, word: Word | str) -> HalfLaurent:
        """Coefficient of a word (zero if absent)."""
        key = parse_word(word) if isinstance(word, str) else tuple(word)
        return self.terms.get(key, HalfLaurent.zero())

    def __iter__(self) -> Iterator[tuple[Word, HalfLaurent]]:
        return iter(sorted(self.terms.items(), key=lambda kv: _word_sort_key(kv[0])))

    # -- arithmetic ---------------------------------------------------------

    def _check_same_space(self, other: "NCPoly") -> None:
        if self.n != other.n:
            raise DimensionMismatchError(self.n, other.n, "ambient n")

    def __add__(self, other: "NCPoly") -> "NCPoly":
        if not isinstance(other, NCPoly):
            return NotImplemented
        self._check_same_space(other)
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if self.radical != other.radical:
            raise UnsupportedIdentityError(
                f"cannot add terms carrying {_format_radical(self.radical) or '1'} "
                f"and {_format_radical(other.radical) or '1'}"
            )
        out = dict(self.terms)
        for w, c in other.terms.items():
            _accumulate(out, w, c)
        result = NCPoly._from_normal(self.n, out, self.radical)
        result._normal = self._normal and other._normal
        return result

    def __neg__(self) -> "NCPoly":
        result = NCPoly._from_normal(
            self.n, {w: -c for w, c in self.terms.items()}, self.radical
        )
        result._normal = self._normal
        return result

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, coeff: HalfLaurent) -> "NCPoly":
        """Multiply every coefficient by a scalar."""
        if not coeff:
            return NCPoly.zero(self.n)
        result = NCPoly._from_normal(self.n, _scaled(self.terms, coeff), self.radical)
        result._normal = self._normal
        return result

    def __mul__(self, other: "NCPoly") -> "NCPoly":
        if not isinstance(other, NCPoly):
            return NotImplemented
        return multiply(self, other)

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NCPoly):
            return NotImplemented
        return (
            self.n == other.n
            and self.terms == other.terms
            and self.radical == other.radical
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items()), self.radical))
        return self._hash

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"NCPoly(n={self.n}, '{self}')"


def format_poly(p: NCPoly) -> str:
    """Serialize as a sum of ``coeff * word`` terms.

    Starred letters print as ``z3'``; coefficients print in powers of ``s``
    where ``s^2 = q``.  A pending square-root factor prints as a
    ``sqrt[...]`` prefix.
    """
    if p.is_zero:
        return "0"
    pieces: list[str] = []
    for word, coeff in p:
        if not word:
            pieces.append(f"({coeff})" if len(coeff.terms) > 1 else str(coeff))
        elif coeff == 1:
            pieces.append(format_word(word))
        else:
            text = f"({coeff})" if len(coeff.terms) > 1 else str(coeff)
            pieces.append(f"{text} * {format_word(word)}")
    body = " + ".join(pieces)
    if p.radical:
        return f"{_format_radical(p.radical)} * ({body})"
    return body


# ---------------------------------------------------------------------------
# Core operations
# ---------------------------------------------------------------------------


def normal_form(p: NCPoly, budget: int = DEFAULT_REWRITE_BUDGET) -> NCPoly:
    """Reduce every word of ``p`` to the normal basis.

    Raises:
        RewriteBudgetExceeded: If more than ``budget`` rule applications are
            needed.
    """
    if p.is_normal:
        return p
    rw = _rewriter(p.n)
    counter = _StepCounter(budget)
    out: _Expansion = {}
    for word, coeff in p.terms.items():
        for w, c in rw.reduce(word, counter).items():
            _accumulate(out, w, c * coeff)
    logger.debug(
        "normal_form n=%d: %d -> %d terms, %d rule applications, %d memo entries",
        p.n,
        len(p.terms),
        len(out),
        counter.steps,
        len(rw),
    )
    return NCPoly._from_normal(p.n, out, p.radical)


def multiply(a: NCPoly, b: NCPoly, budget: int = DEFAULT_REWRITE_BUDGET) -> NCPoly:
    """Product ``a * b`` in normal form.

    Raises:
        DimensionMismatchError: If the ambient ``n`` differ.
        RewriteBudgetExceeded: If the reduction runs past ``budget``.
    """
    if a.n != b.n:
        raise DimensionMismatchError(a.n, b.n, "ambient n")
    radical, factor = _merge_radicals(a.radical, b.radical)
    if a.is_zero or b.is_zero:
        return NCPoly.zero(a.n)
    rw = _rewriter(a.n)
    counter = _StepCounter(budget)
    right = b.terms if b.is_normal else normal_form(b, budget).terms
    out: _Expansion = {}
    for left_word, left_coeff in a.terms.items():
        acc: Mapping[Word, HalfLaurent] = right
        for letter in reversed(left_word):
            acc = rw.left_mul(letter, acc, counter)
        coeff = left_coeff * factor
        for w, c in acc.items():
            _accumulate(out, w, c * coeff)
    return NCPoly._from_normal(a.n, out, radical)


def adjoint(p: NCPoly, budget: int = DEFAULT_REWRITE_BUDGET) -> NCPoly:
    """Involution: reverse each word, toggle stars, keep coefficients.

    Coefficients are real functions of ``q`` and square-root tags are
    self-adjoint, so both pass through unchanged.
    """
    flipped = {
        tuple(g.adjoint() for g in reversed(word)): coeff
        for word, coeff in p.terms.items()
    }
    return normal_form(NCPoly(p.n, flipped, p.radical), budget)


def u1_degree(p: NCPoly) -> int | Literal["inhomogeneous"]:
    """Common U(1) degree of all words, or ``"inhomogeneous"``.

    The zero element is reported as degree 0.
    """
    degrees = {word_degree(w) for w in p.terms}
    if not degrees:
        return 0
    if len(degrees) > 1:
        return INHOMOGENEOUS
    return degrees.pop()


def zr_invariant(p: NCPoly, r: int) -> bool:
    """True iff every word has U(1) degree divisible by ``r``.

    Raises:
        PreconditionError: If ``r < 1``.
    """
    if r < 1:
        raise PreconditionError("zr_invariant", f"r must be positive, got {r}")
    return all(word_degree(w) % r == 0 for w in p.terms)


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NCMatrix:
    """Dense matrix of algebra elements sharing one ambient ``n``."""

    n: int
    entries: tuple[tuple[NCPoly, ...], ...]

    def __post_init__(self) -> None:
        if not self.entries or not self.entries[0]:
            raise DimensionMismatchError("non-empty matrix", "empty", "NCMatrix")
        width = len(self.entries[0])
        for row in self.entries:
            if len(row) != width:
                raise DimensionMismatchError(width, len(row), "NCMatrix row length")
            for entry in row:
                if entry.n != self.n:
                    raise DimensionMismatchError(self.n, entry.n, "ambient n")

    @classmethod
    def column(cls, n: int, entries: Iterable[NCPoly]) -> "NCMatrix":
        """Build a column vector."""
        return cls(n, tuple((e,) for e in entries))

    @classmethod
    def identity(cls, n: int, size: int) -> "NCMatrix":
        """Identity matrix of the given size."""
        return cls(
            n,
            tuple(
                tuple(NCPoly.one(n) if i == j else NCPoly.zero(n) for j in range(size))
                for i in range(size)
            ),
        )

    @property
    def rows(self) -> int:
        """Number of rows."""
        return len(self.entries)

    @property
    def cols(self) -> int:
        """Number of columns."""
        return len(self.entries[0])

    def __getitem__(self, index: tuple[int, int]) -> NCPoly:
        i, j = index
        return self.entries[i][j]

    def __iter__(self) -> Iterator[NCPoly]:
        return itertools.chain.from_iterable(self.entries)

    def adjoint(self, budget: int = DEFAULT_REWRITE_BUDGET) -> "NCMatrix":
        """Conjugate transpose."""
        return NCMatrix(
            self.n,
            tuple(
                tuple(adjoint(self.entries[i][j], budget) for i in range(self.rows))
                for j in range(self.cols)
            ),
        )

    def matmul(
        self, other: "NCMatrix", budget: int = DEFAULT_REWRITE_BUDGET
    ) -> "NCMatrix":
        """Matrix product with normal-formed entries."""
        if self.n != other.n:
            raise DimensionMismatchError(self.n, other.n, "ambient n")
        if self.cols != other.rows:
            raise DimensionMismatchError(self.cols, other.rows, "inner dimension")
        out_rows: list[tuple[NCPoly, ...]] = []
        for i in range(self.rows):
            row: list[NCPoly] = []
            for k in range(other.cols):
                total = NCPoly.zero(self.n)
                for j in range(self.cols):
                    product = multiply(self.entries[i][j], other.entries[j][k], budget)
                    total = total + product
                row.append(total)
            out_rows.append(tuple(row))
        return NCMatrix(self.n, tuple(out_rows))

    def __matmul__(self, other: "NCMatrix") -> "NCMatrix":
        return self.matmul(other)

    def equals(self, other: "NCMatrix") -> bool:
        """Entrywise equality of normal forms.

        Raises:
            UnsupportedIdentityError: If a difference would mix unpaired
                square roots.
        """
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        return all((a - b).is_zero for a, b in zip(self, other))


# ---------------------------------------------------------------------------
# Psi_N and friends
# ---------------------------------------------------------------------------


def multi_indices(n: int, total: int) -> list[tuple[int, ...]]:
    """All ``(j_0, .., j_n)`` with non-negative entries summing to ``total``.

    Returned in colexicographic order (compare ``j_n`` first, then
    ``j_{n-1}``, ...).
    """
    found = [
        j
        for j in itertools.product(range(total + 1), repeat=n + 1)
        if sum(j) == total
    ]
    return sorted(found, key=lambda j: j[::-1])


def _cross_sum(j: tuple[int, ...]) -> int:
    return sum(j[a] * j[b] for a in range(len(j)) for b in range(a + 1, len(j)))


def psi_component(
    n: int, N: int, j: tuple[int, ...], budget: int = DEFAULT_REWRITE_BUDGET
) -> NCPoly:
    """Component ``j`` of ``Psi_N``, with its square-root tag.

    For ``N >= 0`` it is ``sqrt([j]!) q^(-1/2 sum_{r<s} j_r j_s)
    (z_0*)^{j_0} .. (z_n*)^{j_n}``; for ``N < 0`` it is
    ``sqrt([j]!) q^(1/2 sum_{r<s} j_r j_s + sum_r r j_r) z_0^{j_0} .. z_n^{j_n}``.
    """
    cross = _cross_sum(j)
    if N >= 0:
        exp = -cross
        letters = tuple(Generator(i, True) for i in range(n + 1) for _ in range(j[i]))
    else:
        exp = cross + 2 * sum(i * j[i] for i in range(n + 1))
        letters = tuple(Generator(i) for i in range(n + 1) for _ in range(j[i]))
    tag = radical_tag(j)
    poly = NCPoly.word(n, letters, s_power(exp), budget)
    return NCPoly._from_normal(n, dict(poly.terms), (tag,) if tag else ())


def build_psi(n: int, N: int, budget: int = DEFAULT_REWRITE_BUDGET) -> NCMatrix:
    """Column vector ``Psi_N`` of length ``C(|N| + n, n)``.

    Raises:
        PreconditionError: If ``n < 1``.
    """
    if n < 1:
        raise PreconditionError("build_psi", f"n must be at least 1, got {n}")
    return NCMatrix.column(
        n, (psi_component(n, N, j, budget) for j in multi_indices(n, abs(N)))
    )


def build_projection(n: int, N: int, budget: int = DEFAULT_REWRITE_BUDGET) -> NCMatrix:
    """Projection ``P_N = Psi_N Psi_N*``."""
    psi = build_psi(n, N, budget)
    return psi.matmul(psi.adjoint(budget), budget)


def build_partial_isometry(
    n: int, r: int, N: int, budget: int = DEFAULT_REWRITE_BUDGET
) -> NCMatrix:
    """``v_N = Psi_{r(N+1)} Psi_{rN}*``.

    Raises:
        PreconditionError: If ``r < 1``.
    """
    if r < 1:
        raise PreconditionError(
            "build_partial_isometry", f"r must be positive, got {r}"
        )
    upper = build_psi(n, r * (N + 1), budget)
    lower = build_psi(n, r * N, budget)
    return upper.matmul(lower.adjoint(budget), budget)


# ---------------------------------------------------------------------------
# Identity checks
# ---------------------------------------------------------------------------


def verify_isometry(n: int, N: int, budget: int = DEFAULT_REWRITE_BUDGET) -> bool:
    """Check ``Psi_N* Psi_N == 1``."""
    psi = build_psi(n, N, budget)
    gram = psi.adjoint(budget).matmul(psi, budget)
    ok = gram.equals(NCMatrix.identity(n, 1))
    logger.debug("isometry n=%d N=%d: %s", n, N, ok)
    return ok


def verify_projection(n: int, N: int, budget: int = DEFAULT_REWRITE_BUDGET) -> bool:
    """Check ``P_N^2 == P_N == P_N*`` and that every entry has degree 0."""
    proj = build_projection(n, N, budget)
    ok = (
        proj.matmul(proj, budget).equals(proj)
        and proj.adjoint(budget).equals(proj)
        and all(u1_degree(e) == 0 for e in proj)
    )
    logger.debug("projection n=%d N=%d: %s", n, N, ok)
    return ok


def verify_qtrace(n: int, budget: int = DEFAULT_REWRITE_BUDGET) -> bool:
    """Check ``sum_i q^(2i) z_i* z_i == 1``."""
    if n < 1:
        raise PreconditionError("verify_qtrace", f"n must be at least 1, got {n}")
    total = NCPoly.zero(n)
    for i in range(n + 1):
        diagonal = (Generator(i, True), Generator(i))
        total = total + NCPoly.word(n, diagonal, q_power(2 * i), budget)
    return total == NCPoly.one(n)


def verify_partial_isometry(
    n: int, r: int, N: int, budget: int = DEFAULT_REWRITE_BUDGET
) -> bool:
    """Check ``v* v == P_{rN}``, ``v v* == P_{r(N+1)}`` and entry degrees ``-r``."""
    v = build_partial_isometry(n, r, N, budget)
    v_star = v.adjoint(budget)
    ok = (
        all(u1_degree(e) == -r for e in v if not e.is_zero)
        and v_star.matmul(v, budget).equals(build_projection(n, r * N, budget))
        and v.matmul(v_star, budget).equals(build_projection(n, r * (N + 1), budget))
    )
    logger.debug("partial isometry n=%d r=%d N=%d: %s", n, r, N, ok)
    return ok


def hopf_galois_witness(
    n: int, r: int, N: int, budget: int = DEFAULT_REWRITE_BUDGET
) -> bool:
    """Check the principality witness of the lens-space bundle.

    Verifies ``sum_j [j]! q^(-sum_{r<s} j_r j_s) z_n^{j_n}..z_0^{j_0}
    (z_0*)^{j_0}..(z_n*)^{j_n} == 1`` and that every ``psi^N_j`` is
    invariant under the cyclic group of order ``r``.

    Raises:
        PreconditionError: If ``r < 1``, ``N < 0`` or ``r`` does not divide ``N``.
    """
    if r < 1:
        raise PreconditionError("hopf_galois_witness", f"r must be positive, got {r}")
    if N < 0 or N % r:
        raise PreconditionError(
            "hopf_galois_witness",
            f"N must be a non-negative multiple of r={r}, got {N}",
        )
    total = NCPoly.zero(n)
    for j in multi_indices(n, N):
        coeff = qmultinomial(j) * q_power(-_cross_sum(j))
        plain = tuple(Generator(i) for i in reversed(range(n + 1)) for _ in range(j[i]))
        stars = tuple(Generator(i, True) for i in range(n + 1) for _ in range(j[i]))
        total = total + NCPoly.word(n, plain + stars, coeff, budget)
    invariant = all(zr_invariant(e, r) for e in build_psi(n, N, budget))
    ok = invariant and total == NCPoly.one(n)
    logger.debug("witness n=%d r=%d N=%d: %s", n, r, N, ok)
    return ok


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


def verify_cpn_relations(
    n: int, N: int = 1, budget: int = DEFAULT_REWRITE_BUDGET
) -> bool:
    """Check the relations of the projective-space generators ``p_ij = z_i* z_j``.

    Three families are compared after normal form::

        p_ij p_kl = q^(sgn(k-i)+sgn(j-l)) p_kl p_ij                   (i!=l, j!=k)
        p_ij p_jk = q^(sgn(j-i)+sgn(j-k)+1) p_jk p_ij
                    - (1-q^2) sum_{l>j} p_il p_lk                     (i!=k)
        p_ij p_ji = q^(2 sgn(j-i)) p_ji p_ij
                    + (1-q^2) (q^(2 sgn(j-i)) sum_{l>i} p_jl p_lj - sum_{l>j} p_il p_li)

    Entries of ``P_N`` must have degree 0; for ``N == 1`` they must be the
    generators ``p_ij`` themselves.
    """
    idx = range(n + 1)
    p = {
        (i, j): NCPoly.word(n, (Generator(i, True), Generator(j)), budget=budget)
        for i in idx
        for j in idx
    }

    def mul(a: NCPoly, b: NCPoly) -> NCPoly:
        return multiply(a, b, budget)

    def chain(pairs: Iterable[tuple[tuple[int, int], tuple[int, int]]]) -> NCPoly:
        total = NCPoly.zero(n)
        for x, y in pairs:
            total = total + mul(p[x], p[y])
        return total

    for i, j, k, m in itertools.product(idx, repeat=4):
        if i != m and j != k:
            rhs = mul(p[k, m], p[i, j]).scale(q_power(_sgn(k - i) + _sgn(j - m)))
            if mul(p[i, j], p[k, m]) != rhs:
                logger.debug("commuting relation fails at %s", (i, j, k, m))
                return False

    for i, j, k in itertools.product(idx, repeat=3):
        if i != k:
            rhs = mul(p[j, k], p[i, j]).scale(q_power(_sgn(j - i) + _sgn(j - k) + 1))
            tail = chain(((i, t), (t, k)) for t in range(j + 1, n + 1))
            if mul(p[i, j], p[j, k]) != rhs - tail.scale(ONE_MINUS_Q2):
                logger.debug("chain relation fails at %s", (i, j, k))
                return False

    for i, j in itertools.product(idx, repeat=2):
        twist = q_power(2 * _sgn(j - i))
        inner = chain(((j, t), (t, j)) for t in range(i + 1, n + 1)).scale(twist)
        inner = inner - chain(((i, t), (t, i)) for t in range(j + 1, n + 1))
        rhs = mul(p[j, i], p[i, j]).scale(twist) + inner.scale(ONE_MINUS_Q2)
        if mul(p[i, j], p[j, i]) != rhs:
            logger.debug("commutator relation fails at %s", (i, j))
            return False

    proj = build_projection(n, N, budget)
    if any(u1_degree(e) != 0 for e in proj):
        return False
    if N == 1:
        return all(proj[i, j] == p[i, j] for i in idx for j in idx)
    return True


# ---------------------------------------------------------------------------
# Randomized property sampling
# ---------------------------------------------------------------------------


@dataclass
class PropertyReport:
    """Outcome of :func:`sample_properties`."""

    n: int
    samples: int
    checks: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """True when no sampled property failed."""
        return not self.failures


def random_word(rng: random.Random, n: int, max_len: int) -> Word:
    """Draw a uniformly random word of length 1..max_len."""
    return tuple(
        Generator(rng.randint(0, n), rng.random() < 0.5)
        for _ in range(rng.randint(1, max_len))
    )


def sample_properties(
    n: int,
    samples: int,
    seed: int = 0,
    max_len: int = 6,
    budget: int = DEFAULT_REWRITE_BUDGET,
) -> PropertyReport:
    """Sample structural properties of the rewrite system on random words.

    Per sample: associativity of the normal-form product, adjoint as an
    involutive anti-homomorphism, idempotence of :func:`normal_form`,
    additivity of the U(1) degree, and closure of degree 0 under product and
    adjoint.
    """
    rng = random.Random(seed)
    report = PropertyReport(n=n, samples=samples)

    def check(ok: bool, label: str, words: tuple[Word, ...]) -> None:
        report.checks += 1
        if not ok:
            report.failures.append(f"{label}: " + " | ".join(map(format_word, words)))

    def mul(x: NCPoly, y: NCPoly) -> NCPoly:
        return multiply(x, y, budget)

    def star(x: NCPoly) -> NCPoly:
        return adjoint(x, budget)

    for _ in range(samples):
        wa, wb, wc = (random_word(rng, n, max_len) for _ in range(3))
        a, b, c = (NCPoly.word(n, w, budget=budget) for w in (wa, wb, wc))
        ab = mul(a, b)
        words = (wa, wb, wc)
        check(mul(ab, c) == mul(a, mul(b, c)), "associativity", words)
        check(star(ab) == mul(star(b), star(a)), "anti-homomorphism", words)
        check(star(star(a)) == a, "involution", words)
        concatenated = normal_form(NCPoly(n, {wa + wb: ONE}), budget)
        check(concatenated == ab and normal_form(ab) is ab, "idempotence", words)
        if not ab.is_zero:
            degree = word_degree(wa) + word_degree(wb)
            check(u1_degree(ab) == degree, "degree additivity", words)
        if word_degree(wa) == 0 and word_degree(wb) == 0:
            closed = u1_degree(ab) == 0 and u1_degree(star(a)) == 0
            check(closed, "degree-0 closure", words)

    logger.debug(
        "sampled %d checks on n=%d, %d failures", report.checks, n, len(report.failures)
    )
    return report
