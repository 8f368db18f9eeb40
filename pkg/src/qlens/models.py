"""Data models for K-theory results, generator claims and verification reports."""

import re
from dataclasses import dataclass, field
from typing import Any, Literal

from .exceptions import ClaimError
from .intlin import INFINITE, IntMatrix, SNFResult
from .kring import TruncPoly

Order = int | Literal["infinite"]

_CLAIM = re.compile(r"^\s*(?P<expr>[^=]+?)\s*=\s*(?P<order>[+-]?\d+)\s*$")


def group_text(torsion: tuple[int, ...] | list[int], free_rank: int = 1) -> str:
    """Render ``Z^free ⊕ Z_a1 ⊕ ...`` omitting trivial factors.

    Example::

        >>> group_text((1, 3, 72))
        'Z ⊕ Z_3 ⊕ Z_72'
    """
    parts: list[str] = []
    if free_rank == 1:
        parts.append("Z")
    elif free_rank > 1:
        parts.append(f"Z^{free_rank}")
    parts.extend(f"Z_{a}" for a in torsion if a != 1)
    return " ⊕ ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Generator claims
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorClaim:
    """A torsion class written in powers of ``u~`` together with its order.

    ``expr`` lives in ``Z[u~]/(u~^(n+1))``; its coefficient vector is read in
    the ``{1, u~, .., u~^n}`` coordinates of the cokernel.  ``order_label``
    is an optional human form such as ``"r/6"``.
    """

    expr: TruncPoly
    claimed_order: int
    order_label: str = ""

    def __post_init__(self) -> None:
        if self.expr.augmentation != 0:
            raise ClaimError(
                self.text, "torsion classes must have zero constant term"
            )
        if isinstance(self.claimed_order, bool) or self.claimed_order < 1:
            raise ClaimError(
                self.text, f"claimed order must be positive, got {self.claimed_order}"
            )

    @property
    def text(self) -> str:
        """The expression written in ``u~``."""
        return self.expr.format("u~")

    @property
    def vector(self) -> tuple[int, ...]:
        """Coefficient vector of length ``n + 1``."""
        return self.expr.coeffs

    @classmethod
    def parse(cls, text: str, n: int) -> "GeneratorClaim":
        """Parse ``"EXPR=ORDER"``, e.g. ``"u~^2+6u~=6"``.

        Raises:
            ClaimError: If the text is not of that shape or violates the
                claim invariants.
        """
        match = _CLAIM.match(text)
        if match is None:
            raise ClaimError(text, "expected the form EXPR=ORDER")
        try:
            expr = TruncPoly.parse(match["expr"], n)
        except ValueError as exc:
            raise ClaimError(text, str(exc)) from exc
        return cls(expr, int(match["order"]))

    def to_dict(self) -> dict[str, Any]:
        """Serialize to JSON-compatible primitives."""
        return {
            "expr": self.text,
            "coeffs": list(self.vector),
            "claimed_order": self.claimed_order,
            "order_label": self.order_label,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "GeneratorClaim":
        """Reconstruct from :meth:`to_dict` output."""
        coeffs = list(data["coeffs"])
        return cls(
            expr=TruncPoly.from_coeffs(len(coeffs) - 1, coeffs),
            claimed_order=data["claimed_order"],
            order_label=data.get("order_label", ""),
        )


@dataclass
class GeneratorCheck:
    """Computed order of one claim and whether it matches."""

    claim: GeneratorClaim
    order: Order
    verified: bool

    def to_dict(self) -> dict[str, Any]:
        """Serialize; ``expr``, ``order`` and ``verified`` sit at the top level."""
        return {
            "expr": self.claim.text,
            "order": self.order,
            "verified": self.verified,
            "claim": self.claim.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "GeneratorCheck":
        """Reconstruct from :meth:`to_dict` output."""
        return cls(
            claim=GeneratorClaim.from_dict(data["claim"]),
            order=data["order"],
            verified=data["verified"],
        )


@dataclass
class ClaimReport:
    """Outcome of checking a set of generator claims against ``A(n, r)``."""

    n: int
    r: int
    checks: list[GeneratorCheck] = field(default_factory=list)
    generates: bool = False

    @property
    def passed(self) -> bool:
        """Every order matches and the claims generate the torsion subgroup."""
        return self.generates and all(c.verified for c in self.checks)

    def to_dict(self) -> dict[str, Any]:
        """Serialize to JSON-compatible primitives."""
        return {
            "n": self.n,
            "r": self.r,
            "checks": [c.to_dict() for c in self.checks],
            "generates": self.generates,
            "passed": self.passed,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ClaimReport":
        """Reconstruct from :meth:`to_dict` output."""
        return cls(
            n=data["n"],
            r=data["r"],
            checks=[GeneratorCheck.from_dict(c) for c in data.get("checks", [])],
            generates=data.get("generates", False),
        )


# ---------------------------------------------------------------------------
# K-theory results
# ---------------------------------------------------------------------------


def snf_to_dict(result: SNFResult) -> dict[str, Any]:
    """Serialize a Smith normal form certificate."""
    return {
        "alphas": list(result.alphas),
        "P": result.P.to_rows(),
        "Q": result.Q.to_rows(),
        "D": result.D.to_rows(),
        "P_inv": result.P_inv.to_rows(),
    }


def snf_from_dict(data: dict[str, Any]) -> SNFResult:
    """Reconstruct a certificate from :func:`snf_to_dict` output."""
    return SNFResult(
        P=IntMatrix.from_rows(data["P"]),
        Q=IntMatrix.from_rows(data["Q"]),
        D=IntMatrix.from_rows(data["D"]),
        alphas=tuple(data["alphas"]),
        P_inv=IntMatrix.from_rows(data["P_inv"]),
    )


@dataclass
class KTheoryResult:
    """K-groups of the lens space ``L(n, r)`` read off the Gysin matrix.

    ``torsion`` has length ``n`` and keeps trivial factors as 1, so it lines
    up with the Smith invariant factors.
    """

    n: int
    r: int
    k1: int
    k0_free_rank: int
    torsion: tuple[int, ...]
    generators: list[GeneratorCheck]
    kernel_basis: list[tuple[int, ...]]
    snf_certificate: SNFResult

    @property
    def k0(self) -> str:
        """K0 in group notation, e.g. ``Z ⊕ Z_3 ⊕ Z_72``."""
        return group_text(self.torsion, self.k0_free_rank)

    @property
    def k1_text(self) -> str:
        """K1 in group notation."""
        return group_text((), self.k1)

    def to_dict(self) -> dict[str, Any]:
        """Serialize to JSON-compatible primitives."""
        return {
            "n": self.n,
            "r": self.r,
            "k0": self.k0,
            "k1": self.k1_text,
            "k1_rank": self.k1,
            "k0_free_rank": self.k0_free_rank,
            "alphas": list(self.torsion),
            "generators": [g.to_dict() for g in self.generators],
            "kernel_basis": [list(v) for v in self.kernel_basis],
            "snf": snf_to_dict(self.snf_certificate),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "KTheoryResult":
        """Reconstruct from :meth:`to_dict` output."""
        return cls(
            n=data["n"],
            r=data["r"],
            k1=data["k1_rank"],
            k0_free_rank=data["k0_free_rank"],
            torsion=tuple(data["alphas"]),
            generators=[GeneratorCheck.from_dict(g) for g in data["generators"]],
            kernel_basis=[tuple(v) for v in data["kernel_basis"]],
            snf_certificate=snf_from_dict(data["snf"]),
        )


@dataclass
class SweepRow:
    """One value of ``r`` in a sweep."""

    r: int
    alphas: tuple[int, ...]
    k0: str
    k1: str
    generators: list[GeneratorCheck] = field(default_factory=list)
    generates: bool | None = None
    expected: tuple[int, ...] | None = None

    @property
    def matches_expected(self) -> bool | None:
        """Compare with the closed form; ``None`` when none is known."""
        if self.expected is None:
            return None
        return self.alphas == self.expected

    def to_dict(self) -> dict[str, Any]:
        """Serialize to JSON-compatible primitives."""
        return {
            "r": self.r,
            "alphas": list(self.alphas),
            "k0": self.k0,
            "k1": self.k1,
            "generators": [g.to_dict() for g in self.generators],
            "generates": self.generates,
            "expected": None if self.expected is None else list(self.expected),
            "matches_expected": self.matches_expected,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SweepRow":
        """Reconstruct from :meth:`to_dict` output."""
        expected = data.get("expected")
        return cls(
            r=data["r"],
            alphas=tuple(data["alphas"]),
            k0=data["k0"],
            k1=data["k1"],
            generators=[
                GeneratorCheck.from_dict(g) for g in data.get("generators", [])
            ],
            generates=data.get("generates"),
            expected=None if expected is None else tuple(expected),
        )


@dataclass
class SweepTable:
    """Rows of a sweep over ``r``, in increasing ``r``."""

    n: int
    rows: list[SweepRow] = field(default_factory=list)

    @property
    def all_match(self) -> bool:
        """No row contradicts its closed form or fails a generator check."""
        for row in self.rows:
            if row.matches_expected is False or row.generates is False:
                return False
            if not all(g.verified for g in row.generators):
                return False
        return True

    def to_dict(self) -> dict[str, Any]:
        """Serialize to JSON-compatible primitives."""
        return {"n": self.n, "rows": [row.to_dict() for row in self.rows]}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SweepTable":
        """Reconstruct from :meth:`to_dict` output."""
        return cls(n=data["n"], rows=[SweepRow.from_dict(r) for r in data["rows"]])


# ---------------------------------------------------------------------------
# Symbolic verification reports
# ---------------------------------------------------------------------------


@dataclass
class CheckResult:
    """A single symbolic identity check, e.g. ``isometry`` at ``N=2``."""

    name: str
    params: dict[str, int] = field(default_factory=dict)
    passed: bool = False
    detail: str = ""

    @property
    def label(self) -> str:
        """``name(k=v, ...)``."""
        args = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.name}({args})"

    def to_dict(self) -> dict[str, Any]:
        """Serialize to JSON-compatible primitives."""
        return {
            "name": self.name,
            "params": dict(self.params),
            "passed": self.passed,
            "detail": self.detail,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "CheckResult":
        """Reconstruct from :meth:`to_dict` output."""
        return cls(
            name=data["name"],
            params=dict(data.get("params", {})),
            passed=data.get("passed", False),
            detail=data.get("detail", ""),
        )


@dataclass
class AlgebraReport:
    """All checks of one ``verify-algebra`` run."""

    n: int
    max_N: int
    r: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """True when every check passed."""
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        """Checks that did not pass."""
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict[str, Any]:
        """Serialize to JSON-compatible primitives."""
        return {
            "n": self.n,
            "max_N": self.max_N,
            "r": self.r,
            "checks": [c.to_dict() for c in self.checks],
            "passed": self.passed,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "AlgebraReport":
        """Reconstruct from :meth:`to_dict` output."""
        return cls(
            n=data["n"],
            max_N=data["max_N"],
            r=data["r"],
            checks=[CheckResult.from_dict(c) for c in data.get("checks", [])],
        )


# ---------------------------------------------------------------------------
# Versioned JSON envelope
# ---------------------------------------------------------------------------

_SCHEMA_VERSION = 1


def _serialize_envelope(
    data: dict[str, Any],
    schema_version: int = _SCHEMA_VERSION,
) -> dict[str, Any]:
    """Wrap serialized data in a versioned envelope."""
    return {
        "schema_version": schema_version,
        "generator": "qlens",
        "data": data,
    }


def _deserialize_envelope(raw: dict[str, Any]) -> dict[str, Any]:
    """Unwrap and validate a versioned JSON envelope.

    Raises:
        ValueError: If the schema version is unsupported.
    """
    version = raw.get("schema_version")
    if version != _SCHEMA_VERSION:
        msg = (
            f"Unsupported schema version {version!r}. "
            f"Expected {_SCHEMA_VERSION}. Upgrade qlens."
        )
        raise ValueError(msg)
    data: dict[str, Any] = raw["data"]
    return data


Document = (
    KTheoryResult | SweepTable | AlgebraReport | list[ClaimReport] | dict[str, Any]
)


def load_document(raw: Any) -> Document:
    """Rebuild a result from a saved ``--format json`` envelope.

    The payload kind is recognized by its keys. Matrix and pairings payloads
    carry no model and come back as plain dicts.

    Raises:
        ValueError: If ``raw`` is not an envelope, its schema version is
            unsupported, or its payload is not a qlens result.
    """
    if not isinstance(raw, dict) or not isinstance(raw.get("data"), dict):
        raise ValueError("Not a qlens JSON envelope.")
    data = _deserialize_envelope(raw)
    try:
        if "rows" in data:
            return SweepTable.from_dict(data)
        if "max_N" in data:
            return AlgebraReport.from_dict(data)
        if "reports" in data:
            return [ClaimReport.from_dict(rep) for rep in data["reports"]]
        if "k0" in data:
            return KTheoryResult.from_dict(data)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"Malformed qlens document: {exc!r}") from exc
    if "matrix" in data or "grid" in data:
        return data
    raise ValueError(f"Unrecognized qlens document with keys {sorted(data)}.")


def order_matches(order: Order, claimed: int) -> bool:
    """True when a computed order equals a finite claimed one."""
    return order != INFINITE and order == claimed
