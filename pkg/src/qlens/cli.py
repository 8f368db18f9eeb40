"""CLI entry point for qlens.

Provides the ``qlens`` command with subcommands:

``ktheory``
    K0 and K1 of one lens space, with torsion generators.

``matrix``
    The Gysin matrix ``A(n, r)`` and optionally its Smith certificate.

``table``
    Sweep ``r`` over a range and compare with the closed forms.

``verify-algebra``
    Symbolic identity checks in the quantum-sphere algebra.

``verify-generators``
    Orders and joint generation of torsion generator claims.

``pairings``
    Pairing grids of the Fredholm modules with projection classes.

``show``
    Re-render a saved JSON result as text.

Usage examples::

    qlens ktheory --n 3 --r 12
    qlens matrix --n 3 --r 4 --snf
    qlens table --n 4 --r 1..48 --format json
    qlens verify-algebra --n 1 --max-N 3 --r 2
    qlens verify-generators --n 3 --r 1..60
    qlens verify-generators --n 3 --r 12 --claim "u~^2-6u~=6"
    qlens pairings --n 2 --N-range 0..2
    qlens show result.json --snf

Exit codes: 0 success, 1 a verification failed, 2 usage or configuration
error, 3 rewrite budget exhausted.
"""

import functools
import json
import logging
import sys
from collections.abc import Callable, Iterator
from pathlib import Path
from typing import Any, TypeVar

import click

from .config import QlensConfig, read_config
from .exceptions import (
    ClaimError,
    ConfigError,
    PreconditionError,
    RewriteBudgetExceeded,
)
from .gysin import (
    compute_ktheory,
    euler_mult_matrix,
    known_generator_table,
    sweep_table,
    verify_generator_claims,
)
from .intlin import snf
from .kring import line_bundle_grid, pairing_grid, u_pairing_grid
from .models import (
    AlgebraReport,
    CheckResult,
    GeneratorClaim,
    load_document,
    snf_to_dict,
)
from .ncalg import (
    hopf_galois_witness,
    sample_properties,
    verify_cpn_relations,
    verify_isometry,
    verify_partial_isometry,
    verify_projection,
    verify_qtrace,
)
from .renderer import (
    render_algebra_report,
    render_claim_report,
    render_document,
    render_json,
    render_ktheory,
    render_matrix,
    render_pairings,
    render_snf,
    render_sweep,
)

logger = logging.getLogger(__name__)

EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

F = TypeVar("F", bound=Callable[..., Any])


@click.group()
@click.version_option(package_name="qlens")
def main() -> None:
    """Exact K-theory of quantum lens spaces."""


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


class RangeType(click.ParamType):
    """Inclusive integer range ``a..b``; a single ``a`` means ``a..a``."""

    name = "range"

    def __init__(self, minimum: int | None = 1) -> None:
        self.minimum = minimum

    def convert(
        self, value: Any, param: click.Parameter | None, ctx: click.Context | None
    ) -> tuple[int, int]:
        if isinstance(value, tuple):
            return value
        text = str(value).strip()
        lo_text, sep, hi_text = text.partition("..")
        try:
            lo = int(lo_text)
            hi = int(hi_text) if sep else lo
        except ValueError:
            self.fail(f"{value!r} is not a range of the form a..b", param, ctx)
        if self.minimum is not None and lo < self.minimum:
            self.fail(f"range must start at {self.minimum} or above", param, ctx)
        if hi < lo:
            self.fail(f"empty range {value!r}", param, ctx)
        return lo, hi


def _output_options(func: F) -> F:
    """Attach ``--format``, ``--out``, ``--config`` and ``--verbose``."""
    options = [
        click.option(
            "--format",
            "output_format",
            type=click.Choice(["text", "json"], case_sensitive=False),
            default=None,
            help="Output format (default: text, or output_format from --config).",
        ),
        click.option(
            "-o",
            "--out",
            "out",
            type=click.Path(dir_okay=False, path_type=Path),
            default=None,
            help="Write output to this file instead of stdout.",
        ),
        click.option(
            "--config",
            "config_path",
            type=click.Path(exists=True, dir_okay=False, path_type=Path),
            default=None,
            help="TOML file with a [tool.qlens] table.",
        ),
        click.option(
            "-v",
            "--verbose",
            is_flag=True,
            default=False,
            help="Enable debug logging.",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _setup(verbose: bool, config_path: Path | None) -> QlensConfig:
    """Configure logging and load the optional config file (exit 2 on errors)."""
    if verbose:
        logging.basicConfig(
            level=logging.DEBUG,
            format="%(name)s: %(message)s",
            stream=sys.stderr,
        )
    if config_path is None:
        return QlensConfig()
    try:
        return read_config(config_path)
    except ConfigError as exc:
        click.echo(f"Error in config: {exc}", err=True)
        sys.exit(EXIT_USAGE)


def _write_stdout(text: str) -> None:
    """Write UTF-8 text to stdout, handling Windows encoding."""
    if hasattr(sys.stdout, "buffer"):
        sys.stdout.buffer.write(text.encode("utf-8", errors="replace"))
        sys.stdout.buffer.write(b"\n")
        sys.stdout.buffer.flush()
    else:
        click.echo(text)


def _emit(
    config: QlensConfig,
    output_format: str | None,
    out: Path | None,
    text: Callable[[], str],
    data: Callable[[], dict[str, Any]],
) -> None:
    """Render in the chosen format and write to ``out`` or stdout."""
    fmt = (output_format or config.output_format).lower()
    rendered = render_json(data()) if fmt == "json" else text()
    if out is None:
        _write_stdout(rendered)
        return
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(rendered + "\n", encoding="utf-8")
    except OSError as exc:
        click.echo(f"Error: cannot write to {out}: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    click.echo(f"Output written to {out}", err=True)


_USAGE_ERRORS = (PreconditionError, ClaimError)

_n_option = click.option(
    "--n", "n", type=click.IntRange(min=1), required=True, help="Dimension n."
)


# ---------------------------------------------------------------------------
# ktheory / matrix
# ---------------------------------------------------------------------------


@main.command()
@_n_option
@click.option("--r", "r", type=click.IntRange(min=1), required=True, help="Order r.")
@click.option("--snf", "show_snf", is_flag=True, help="Include the Smith certificate.")
@_output_options
def ktheory(
    n: int,
    r: int,
    show_snf: bool,
    output_format: str | None,
    out: Path | None,
    config_path: Path | None,
    verbose: bool,
) -> None:
    r"""Compute K0 and K1 of the quantum lens space L(n, r).

    \b
    Examples:
      qlens ktheory --n 3 --r 12
      qlens ktheory --n 2 --r 2 --format json
    """
    config = _setup(verbose, config_path)
    try:
        result = compute_ktheory(n, r)
    except _USAGE_ERRORS as exc:
        click.echo(f"Error: {exc}", err=True)
        sys.exit(EXIT_USAGE)

    _emit(
        config,
        output_format,
        out,
        lambda: render_ktheory(result, show_snf=show_snf),
        result.to_dict,
    )
    if not all(g.verified for g in result.generators):
        sys.exit(EXIT_VERIFY_FAILED)


@main.command()
@_n_option
@click.option("--r", "r", type=click.IntRange(min=1), required=True, help="Order r.")
@click.option("--snf", "show_snf", is_flag=True, help="Also print P A Q = D.")
@_output_options
def matrix(
    n: int,
    r: int,
    show_snf: bool,
    output_format: str | None,
    out: Path | None,
    config_path: Path | None,
    verbose: bool,
) -> None:
    r"""Print the Euler-multiplication matrix A(n, r).

    \b
    Examples:
      qlens matrix --n 3 --r 4
      qlens matrix --n 3 --r 6 --snf
    """
    config = _setup(verbose, config_path)
    A = euler_mult_matrix(n, r)
    certificate = snf(A) if show_snf else None

    def text() -> str:
        body = f"A({n}, {r}) =\n{render_matrix(A)}"
        if certificate is not None:
            body += "\n\n" + render_snf(certificate)
        return body

    def data() -> dict[str, Any]:
        payload: dict[str, Any] = {"n": n, "r": r, "matrix": A.to_rows()}
        if certificate is not None:
            payload["snf"] = snf_to_dict(certificate)
        return payload

    _emit(config, output_format, out, text, data)


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------


@main.command()
@_n_option
@click.option(
    "--r",
    "r_range",
    type=RangeType(),
    required=True,
    help="Inclusive range a..b of r values.",
)
@_output_options
def table(
    n: int,
    r_range: tuple[int, int],
    output_format: str | None,
    out: Path | None,
    config_path: Path | None,
    verbose: bool,
) -> None:
    r"""Sweep r and tabulate the K-groups of L(n, r).

    Exits 1 when a row disagrees with its closed form or a tabulated
    generator fails.

    \b
    Examples:
      qlens table --n 3 --r 1..60
      qlens table --n 4 --r 1..48 --format json
    """
    config = _setup(verbose, config_path)
    try:
        result = sweep_table(n, *r_range)
    except _USAGE_ERRORS as exc:
        click.echo(f"Error: {exc}", err=True)
        sys.exit(EXIT_USAGE)

    _emit(config, output_format, out, lambda: render_sweep(result), result.to_dict)
    if not result.all_match:
        bad = [row.r for row in result.rows if row.matches_expected is False]
        if bad:
            click.echo(f"Mismatch with closed form at r = {bad}", err=True)
        sys.exit(EXIT_VERIFY_FAILED)


# ---------------------------------------------------------------------------
# verify-algebra
# ---------------------------------------------------------------------------

_Check = tuple[str, dict[str, int], Callable[[], tuple[bool, str]]]


def _algebra_checks(
    n: int, max_n: int, r: int, budget: int, samples: int, seed: int
) -> Iterator[_Check]:
    """The identity grid of one ``verify-algebra`` run, lazily."""

    def plain(check: Callable[[], bool]) -> Callable[[], tuple[bool, str]]:
        return lambda: (check(), "")

    for big_n in range(-max_n, max_n + 1):
        yield (
            "isometry",
            {"N": big_n},
            plain(functools.partial(verify_isometry, n, big_n, budget)),
        )
        yield (
            "projection",
            {"N": big_n},
            plain(functools.partial(verify_projection, n, big_n, budget)),
        )
    yield "qtrace", {}, plain(functools.partial(verify_qtrace, n, budget))
    yield (
        "cpn_relations",
        {},
        plain(functools.partial(verify_cpn_relations, n, 1, budget)),
    )
    for big_n in range(max_n):
        yield (
            "partial_isometry",
            {"r": r, "N": big_n},
            plain(functools.partial(verify_partial_isometry, n, r, big_n, budget)),
        )
    for k in range(max_n + 1):
        yield (
            "hopf_galois_witness",
            {"r": r, "N": r * k},
            plain(functools.partial(hopf_galois_witness, n, r, r * k, budget)),
        )
    if samples:

        def sampled() -> tuple[bool, str]:
            report = sample_properties(n, samples, seed, budget=budget)
            detail = f"{report.checks} sampled, {len(report.failures)} failed"
            if report.failures:
                detail += f"; first: {report.failures[0]}"
            return report.passed, detail

        yield "properties", {"samples": samples, "seed": seed}, sampled


@main.command("verify-algebra")
@click.option("--n", "n", type=click.IntRange(min=1), default=1, show_default=True)
@click.option(
    "--max-N",
    "max_n",
    type=click.IntRange(min=0),
    default=1,
    show_default=True,
    help="Check Psi_N and P_N for |N| <= max-N.",
)
@click.option("--r", "r", type=click.IntRange(min=1), default=1, show_default=True)
@click.option(
    "--rewrite-budget",
    "rewrite_budget",
    type=click.IntRange(min=1),
    default=None,
    help="Rule applications allowed per normal form.",
)
@click.option(
    "--samples",
    type=click.IntRange(min=0),
    default=None,
    help="Random samples for the property checks (0 disables them).",
)
@click.option("--seed", type=int, default=None, help="Seed for the property checks.")
@_output_options
def verify_algebra(
    n: int,
    max_n: int,
    r: int,
    rewrite_budget: int | None,
    samples: int | None,
    seed: int | None,
    output_format: str | None,
    out: Path | None,
    config_path: Path | None,
    verbose: bool,
) -> None:
    r"""Run the symbolic identity checks in the quantum-sphere algebra.

    Covers isometries Psi_N* Psi_N = 1, projections P_N, the q-trace, the
    relations of the projective-space generators, partial isometries
    between P_rN and P_r(N+1), the principality witness and randomized
    structural properties.

    \b
    Examples:
      qlens verify-algebra --n 1 --max-N 3 --r 2
      qlens verify-algebra --n 2 --max-N 2 --r 3 --samples 50
    """
    config = _setup(verbose, config_path)
    budget = rewrite_budget if rewrite_budget is not None else config.rewrite_budget
    n_samples = samples if samples is not None else config.samples
    n_seed = seed if seed is not None else config.seed
    if n > config.verify_max_n:
        logger.warning(
            "n=%d exceeds verify_max_n=%d; symbolic checks may be slow",
            n,
            config.verify_max_n,
        )
        click.echo(
            f"Warning: n={n} is above verify_max_n={config.verify_max_n}; "
            "this may take a long time.",
            err=True,
        )

    report = AlgebraReport(n=n, max_N=max_n, r=r)
    for name, params, run in _algebra_checks(
        n, max_n, r, budget, n_samples, n_seed
    ):
        check = CheckResult(name=name, params=params)
        try:
            check.passed, check.detail = run()
        except RewriteBudgetExceeded as exc:
            click.echo(f"Error: {check.label}: {exc}", err=True)
            sys.exit(EXIT_BUDGET)
        except _USAGE_ERRORS as exc:
            click.echo(f"Error: {check.label}: {exc}", err=True)
            sys.exit(EXIT_USAGE)
        logger.debug("%s: %s", check.label, "ok" if check.passed else "FAIL")
        report.checks.append(check)

    _emit(
        config,
        output_format,
        out,
        lambda: render_algebra_report(report),
        report.to_dict,
    )
    if not report.passed:
        sys.exit(EXIT_VERIFY_FAILED)


# ---------------------------------------------------------------------------
# verify-generators
# ---------------------------------------------------------------------------


@main.command("verify-generators")
@_n_option
@click.option(
    "--r",
    "r_range",
    type=RangeType(),
    required=True,
    help="Value or inclusive range a..b of r.",
)
@click.option(
    "--claim",
    "claim_texts",
    multiple=True,
    help='Claim "EXPR=ORDER" in u~, e.g. "u~^2+6u~=6". Repeatable.',
)
@_output_options
def verify_generators(
    n: int,
    r_range: tuple[int, int],
    claim_texts: tuple[str, ...],
    output_format: str | None,
    out: Path | None,
    config_path: Path | None,
    verbose: bool,
) -> None:
    r"""Check orders and generation of torsion generator claims.

    Without --claim the tabulated generators for n <= 3 are checked.

    \b
    Examples:
      qlens verify-generators --n 3 --r 1..60
      qlens verify-generators --n 2 --r 7 --claim "u~=7" --claim "u~^2=7"
    """
    config = _setup(verbose, config_path)
    try:
        claims = [GeneratorClaim.parse(text, n) for text in claim_texts]
        reports = [
            verify_generator_claims(
                n, r, claims if claim_texts else known_generator_table(n, r)
            )
            for r in range(r_range[0], r_range[1] + 1)
        ]
    except _USAGE_ERRORS as exc:
        click.echo(f"Error: {exc}", err=True)
        sys.exit(EXIT_USAGE)

    _emit(
        config,
        output_format,
        out,
        lambda: "\n\n".join(render_claim_report(rep) for rep in reports),
        lambda: {"n": n, "reports": [rep.to_dict() for rep in reports]},
    )
    if not all(rep.passed for rep in reports):
        sys.exit(EXIT_VERIFY_FAILED)


# ---------------------------------------------------------------------------
# pairings
# ---------------------------------------------------------------------------


@main.command()
@_n_option
@click.option(
    "--N-range",
    "n_range",
    type=RangeType(minimum=0),
    default=None,
    help="Inclusive range of N for <mu_k, [P_-N]> (default 0..n).",
)
@click.option(
    "--L-range",
    "l_range",
    type=RangeType(minimum=None),
    default=None,
    help="Signed range of N for <mu_k, [L_N]> (default -n..n).",
)
@_output_options
def pairings(
    n: int,
    n_range: tuple[int, int] | None,
    l_range: tuple[int, int] | None,
    output_format: str | None,
    out: Path | None,
    config_path: Path | None,
    verbose: bool,
) -> None:
    r"""Print the pairings of mu_k with [P_-N], with powers of u and with [L_N].

    \b
    Examples:
      qlens pairings --n 2 --N-range 0..2
      qlens pairings --n 1 --L-range -3..3
      qlens pairings --n 4 --N-range 0..6 --format json
    """
    config = _setup(verbose, config_path)
    lo, hi = n_range if n_range is not None else (0, n)
    l_lo, l_hi = l_range if l_range is not None else (-n, n)
    grid = [row[lo : hi + 1] for row in pairing_grid(n, hi)]
    u_grid = u_pairing_grid(n)
    line_grid = line_bundle_grid(n, l_lo, l_hi)

    _emit(
        config,
        output_format,
        out,
        lambda: render_pairings(
            grid, u_grid, first_n=lo, line_grid=line_grid, first_l=l_lo
        ),
        lambda: {
            "n": n,
            "N_from": lo,
            "N_to": hi,
            "grid": grid,
            "u_grid": u_grid,
            "L_from": l_lo,
            "L_to": l_hi,
            "line_bundle_grid": line_grid,
        },
    )


# ---------------------------------------------------------------------------
# show
# ---------------------------------------------------------------------------


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--snf", "show_snf", is_flag=True, help="Include the Smith certificate.")
@click.option(
    "--verbose", "-v", is_flag=True, default=False, help="Enable debug logging."
)
def show(file: Path, show_snf: bool, verbose: bool) -> None:
    r"""Re-render a result saved with --format json as text.

    \b
    Examples:
      qlens ktheory --n 3 --r 12 --format json -o k.json
      qlens show k.json --snf
    """
    _setup(verbose, None)
    try:
        raw = json.loads(file.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        click.echo(f"Error: invalid JSON in {file}: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    except OSError as exc:
        click.echo(f"Error: {exc}", err=True)
        sys.exit(EXIT_USAGE)

    try:
        doc = load_document(raw)
    except ValueError as exc:
        click.echo(f"Error: {exc}", err=True)
        sys.exit(EXIT_USAGE)

    logger.debug("Loaded %s from %s", type(doc).__name__, file)
    _write_stdout(render_document(doc, show_snf=show_snf))


if __name__ == "__main__":
    main()
