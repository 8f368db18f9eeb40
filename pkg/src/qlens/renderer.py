"""Text and JSON rendering of qlens results.

Text output is aligned plain text meant for a terminal; JSON output wraps
the ``to_dict()`` form of a result in the versioned envelope.  Both carry
the same numbers.
"""

import json
from collections.abc import Sequence
from typing import Any

from .intlin import IntMatrix, SNFResult
from .models import (
    AlgebraReport,
    ClaimReport,
    Document,
    GeneratorCheck,
    KTheoryResult,
    SweepTable,
    _serialize_envelope,
    snf_from_dict,
)

# ---------------------------------------------------------------------------
# Layout helpers
# ---------------------------------------------------------------------------


def _align(rows: Sequence[Sequence[object]], headers: Sequence[str] = ()) -> str:
    """Left-align a table; numeric-looking cells are right-aligned."""
    body = [[str(c) for c in row] for row in rows]
    if headers:
        body.insert(0, list(headers))
    if not body:
        return ""
    widths = [max(len(row[i]) for row in body) for i in range(len(body[0]))]

    def fmt(row: list[str]) -> str:
        cells = [
            cell.rjust(w) if cell.lstrip("-").isdigit() else cell.ljust(w)
            for cell, w in zip(row, widths)
        ]
        return "  ".join(cells).rstrip()

    lines = [fmt(row) for row in body]
    if headers:
        lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def render_matrix(m: IntMatrix | Sequence[Sequence[int]]) -> str:
    """Bracketed integer matrix with right-aligned columns."""
    rows = m.to_rows() if isinstance(m, IntMatrix) else [list(r) for r in m]
    if not rows or not rows[0]:
        return "[]"
    width = max(len(str(v)) for row in rows for v in row)
    return "\n".join(
        "[" + " ".join(str(v).rjust(width) for v in row) + "]" for row in rows
    )


def _order_text(order: object) -> str:
    return "inf" if order == "infinite" else str(order)


# ---------------------------------------------------------------------------
# K-theory
# ---------------------------------------------------------------------------


def render_snf(result: SNFResult) -> str:
    """Smith normal form certificate: ``D``, ``P``, ``Q`` and ``P^-1``."""
    lines = [f"invariant factors: {list(result.alphas)}", ""]
    for name, mat in (
        ("D", result.D),
        ("P", result.P),
        ("Q", result.Q),
        ("P^-1", result.P_inv),
    ):
        lines.append(f"{name} =")
        lines.append(render_matrix(mat))
        lines.append("")
    return "\n".join(lines).rstrip()


def _generator_rows(checks: Sequence[GeneratorCheck]) -> list[list[object]]:
    return [
        [
            c.claim.text,
            c.claim.order_label or c.claim.claimed_order,
            c.claim.claimed_order,
            _order_text(c.order),
            "ok" if c.verified else "FAIL",
        ]
        for c in checks
    ]


_GENERATOR_HEADERS = ("generator", "claimed", "value", "order", "status")


def render_ktheory(result: KTheoryResult, *, show_snf: bool = False) -> str:
    """K-theory report for one ``(n, r)``."""
    lines = [
        f"# K-theory of L({result.n}, {result.r})",
        "",
        f"K0 = {result.k0}",
        f"K1 = {result.k1_text}",
        f"invariant factors: {list(result.torsion)}",
        f"rank(A) = {result.snf_certificate.rank}",
    ]
    kernel = ", ".join(str(list(v)) for v in result.kernel_basis) or "0"
    lines.append(f"kernel basis: {kernel}")
    lines.append("")
    if result.generators:
        lines.append("## Torsion generators (from the Smith certificate)")
        lines.append("")
        lines.append(_align(_generator_rows(result.generators), _GENERATOR_HEADERS))
    else:
        lines.append("No torsion.")
    if show_snf:
        lines.append("")
        lines.append("## Smith normal form")
        lines.append("")
        lines.append(render_snf(result.snf_certificate))
    return "\n".join(lines)


def render_claim_report(report: ClaimReport) -> str:
    """Per-claim orders and the generation verdict."""
    lines = [f"## L({report.n}, {report.r})", ""]
    if report.checks:
        lines.append(_align(_generator_rows(report.checks), _GENERATOR_HEADERS))
    else:
        lines.append("(no claims)")
    verdict = "yes" if report.generates else "NO"
    lines.append(f"generates torsion: {verdict}")
    return "\n".join(lines)


def render_sweep(table: SweepTable) -> str:
    """One aligned row per ``r``."""

    def status(flag: bool | None) -> str:
        return "-" if flag is None else ("ok" if flag else "FAIL")

    rows = []
    for row in table.rows:
        gens = "-"
        if row.generators:
            verified = sum(g.verified for g in row.generators)
            gens = f"{verified}/{len(row.generators)}"
        rows.append(
            [
                row.r,
                " ".join(str(a) for a in row.alphas),
                row.k0,
                row.k1,
                gens,
                status(row.generates),
                status(row.matches_expected),
            ]
        )
    headers = ("r", "alphas", "K0", "K1", "orders", "generates", "closed form")
    return f"# n = {table.n}\n\n" + _align(rows, headers)


# ---------------------------------------------------------------------------
# Pairings and symbolic checks
# ---------------------------------------------------------------------------


def render_pairings(
    grid: Sequence[Sequence[int]],
    u_grid: Sequence[Sequence[int]],
    *,
    first_n: int = 0,
    line_grid: Sequence[Sequence[int]] | None = None,
    first_l: int = 0,
) -> str:
    """``<mu_k, [P_-N]>`` from ``N = first_n`` on, then the ``u``-basis grid.

    With ``line_grid`` a third block ``<mu_k, [L_N]>`` from ``N = first_l``
    follows.
    """
    columns = len(grid[0]) if grid else 0
    p_rows = [[f"k={k}", *row] for k, row in enumerate(grid)]
    u_rows = [[f"k={k}", *row] for k, row in enumerate(u_grid)]
    lines = [
        "<mu_k, [P_-N]>",
        _align(p_rows, ["", *(f"N={first_n + j}" for j in range(columns))]),
        "",
        "<mu_k, u^j>",
        _align(u_rows, ["", *(f"j={j}" for j in range(len(u_grid)))]),
    ]
    if line_grid:
        l_rows = [[f"k={k}", *row] for k, row in enumerate(line_grid)]
        headers = ["", *(f"N={first_l + j}" for j in range(len(line_grid[0])))]
        lines += ["", "<mu_k, [L_N]>", _align(l_rows, headers)]
    return "\n".join(lines)


def render_algebra_report(report: AlgebraReport) -> str:
    """One line per identity check plus a summary."""
    rows = [
        [c.label, "ok" if c.passed else "FAIL", c.detail] for c in report.checks
    ]
    failed = len(report.failures)
    summary = (
        f"{len(report.checks)} checks, {failed} failed"
        if report.checks
        else "no checks"
    )
    head = f"# Symbolic checks n={report.n} max_N={report.max_N} r={report.r}"
    table = _align(rows, ("check", "status", "detail"))
    return "\n".join([head, "", table, "", summary])


def render_document(doc: Document, *, show_snf: bool = False) -> str:
    """Text form of any result returned by :func:`~qlens.models.load_document`."""
    if isinstance(doc, KTheoryResult):
        return render_ktheory(doc, show_snf=show_snf)
    if isinstance(doc, SweepTable):
        return render_sweep(doc)
    if isinstance(doc, AlgebraReport):
        return render_algebra_report(doc)
    if isinstance(doc, list):
        return "\n\n".join(render_claim_report(rep) for rep in doc)
    if "matrix" in doc:
        body = f"A({doc['n']}, {doc['r']}) =\n{render_matrix(doc['matrix'])}"
        if show_snf and "snf" in doc:
            body += "\n\n" + render_snf(snf_from_dict(doc["snf"]))
        return body
    return render_pairings(
        doc["grid"],
        doc["u_grid"],
        first_n=doc["N_from"],
        line_grid=doc.get("line_bundle_grid"),
        first_l=doc.get("L_from", 0),
    )


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def render_json(data: dict[str, Any], *, indent: int | None = 2) -> str:
    """Envelope ``data`` and dump it with sorted keys."""
    return json.dumps(
        _serialize_envelope(data), indent=indent, sort_keys=True, ensure_ascii=False
    )
