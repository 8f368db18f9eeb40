"""Tests for the gysin module."""

from math import prod

import pytest

from qlens.exceptions import DimensionMismatchError, PreconditionError
from qlens.gysin import (
    MAX_KTHEORY_N,
    compute_ktheory,
    euler_mult_matrix,
    expected_invariant_factors,
    known_generator_table,
    sweep_row,
    sweep_table,
    verify_generator_claims,
)
from qlens.intlin import invariant_factors_by_minors
from qlens.kring import TruncPoly, euler_class
from qlens.models import GeneratorClaim

# ---------------------------------------------------------------------------
# The Gysin matrix
# ---------------------------------------------------------------------------


class TestEulerMultMatrix:
    def test_small_example(self) -> None:
        assert euler_mult_matrix(2, 3).to_rows() == [[0, 0, 0], [3, 0, 0], [-3, 3, 0]]

    def test_n1(self) -> None:
        assert euler_mult_matrix(1, 5).to_rows() == [[0, 0], [5, 0]]

    def test_subdiagonals_vanish_past_r(self) -> None:
        A = euler_mult_matrix(4, 2)
        assert A.column(0) == (0, 2, -1, 0, 0)

    def test_columns_are_euler_class_products(self) -> None:
        for n in range(1, 7):
            for r in range(1, 61):
                A = euler_mult_matrix(n, r)
                e = euler_class(n, r)
                for j in range(n + 1):
                    assert A.column(j) == (e * TruncPoly.monomial(n, j)).coeffs

    def test_last_column_and_first_row_are_zero(self) -> None:
        A = euler_mult_matrix(3, 7)
        assert A.column(3) == (0, 0, 0, 0)
        assert A.to_rows()[0] == [0, 0, 0, 0]

    def test_preconditions(self) -> None:
        with pytest.raises(PreconditionError):
            euler_mult_matrix(0, 1)
        with pytest.raises(PreconditionError):
            euler_mult_matrix(2, 0)


# ---------------------------------------------------------------------------
# K-groups
# ---------------------------------------------------------------------------


class TestComputeKTheory:
    def test_sphere(self) -> None:
        result = compute_ktheory(1, 1)
        assert result.k0 == "Z"
        assert result.k1_text == "Z"

    def test_lens_3_6(self) -> None:
        result = compute_ktheory(3, 6)
        assert result.torsion == (1, 3, 72)
        assert result.k0 == "Z ⊕ Z_3 ⊕ Z_72"

    def test_lens_3_3(self) -> None:
        assert compute_ktheory(3, 3).k0 == "Z ⊕ Z_3 ⊕ Z_9"

    def test_lens_3_12(self) -> None:
        assert compute_ktheory(3, 12).k0 == "Z ⊕ Z_2 ⊕ Z_6 ⊕ Z_144"

    @pytest.mark.parametrize("n", range(1, MAX_KTHEORY_N + 1))
    def test_r2_is_cyclic_of_order_two_to_the_n(self, n: int) -> None:
        assert compute_ktheory(n, 2).k0 == f"Z ⊕ Z_{2**n}"

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_torsion_order_and_ranks(self, n: int) -> None:
        for r in range(1, 61):
            result = compute_ktheory(n, r)
            assert len(result.torsion) == n
            assert prod(result.torsion) == r**n
            assert list(result.torsion) == invariant_factors_by_minors(
                euler_mult_matrix(n, r)
            )
            assert result.k1 == 1
            assert result.k0_free_rank == 1

    def test_kernel_is_top_power(self) -> None:
        for n in (1, 3, 5):
            basis = compute_ktheory(n, 4).kernel_basis
            assert len(basis) == 1
            assert [abs(x) for x in basis[0]] == [0] * n + [1]

    def test_auto_generators(self) -> None:
        for n in range(1, 5):
            for r in range(1, 25):
                result = compute_ktheory(n, r)
                nontrivial = [a for a in result.torsion if a > 1]
                assert [g.claim.claimed_order for g in result.generators] == nontrivial
                assert all(g.verified for g in result.generators)
                claims = [g.claim for g in result.generators]
                assert verify_generator_claims(n, r, claims).generates

    def test_out_of_range(self) -> None:
        with pytest.raises(PreconditionError):
            compute_ktheory(0, 1)
        with pytest.raises(PreconditionError):
            compute_ktheory(MAX_KTHEORY_N + 1, 1)
        with pytest.raises(PreconditionError):
            compute_ktheory(2, 0)


# ---------------------------------------------------------------------------
# Closed forms and sweeps
# ---------------------------------------------------------------------------


class TestClosedForms:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_sweep_matches_closed_form(self, n: int) -> None:
        table = sweep_table(n, 1, 60)
        assert [row.r for row in table.rows] == list(range(1, 61))
        for row in table.rows:
            assert row.alphas == expected_invariant_factors(n, row.r), row.r
        assert table.all_match

    def test_n4_special_values(self) -> None:
        assert expected_invariant_factors(4, 12) == (1, 2, 36, 288)
        assert expected_invariant_factors(4, 6) == (1, 1, 9, 144)
        assert compute_ktheory(4, 12).torsion == (1, 2, 36, 288)

    def test_no_closed_form_past_n4(self) -> None:
        assert expected_invariant_factors(5, 3) is None

    def test_preconditions(self) -> None:
        with pytest.raises(PreconditionError):
            expected_invariant_factors(0, 1)
        with pytest.raises(PreconditionError):
            expected_invariant_factors(2, 0)
        with pytest.raises(PreconditionError):
            sweep_table(1, 0, 3)
        with pytest.raises(PreconditionError):
            sweep_table(1, 5, 4)

    def test_sweep_row_without_claim_table(self) -> None:
        row = sweep_row(5, 4)
        assert row.generates is None
        assert row.matches_expected is None
        assert all(g.verified for g in row.generators)


# ---------------------------------------------------------------------------
# Generator claims
# ---------------------------------------------------------------------------


class TestGeneratorClaims:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_known_table_passes(self, n: int) -> None:
        for r in range(1, 61):
            report = verify_generator_claims(n, r, known_generator_table(n, r))
            assert report.passed, (n, r, [c.to_dict() for c in report.checks])

    def test_orders_at_3_12(self) -> None:
        report = verify_generator_claims(3, 12, known_generator_table(3, 12))
        assert [c.claim.text for c in report.checks] == [
            "12u~ + u~^3",
            "-6u~ + u~^2",
            "u~",
        ]
        assert [c.order for c in report.checks] == [2, 6, 144]

    def test_sign_matters_at_3_12(self) -> None:
        plus = GeneratorClaim.parse("u~^2+6u~=12", 3)
        minus = GeneratorClaim.parse("u~^2-6u~=6", 3)
        report = verify_generator_claims(3, 12, [plus, minus])
        assert [c.order for c in report.checks] == [12, 6]
        assert all(c.verified for c in report.checks)

    def test_r6_first_generator_is_trivial(self) -> None:
        report = verify_generator_claims(3, 6, known_generator_table(3, 6))
        assert report.checks[0].order == 1
        assert report.passed

    def test_orders_at_2_7(self) -> None:
        report = verify_generator_claims(2, 7, known_generator_table(2, 7))
        assert [c.order for c in report.checks] == [7, 7]

    def test_order_at_1_5(self) -> None:
        report = verify_generator_claims(1, 5, known_generator_table(1, 5))
        assert report.checks[0].order == 5
        assert report.checks[0].claim.order_label == "r"

    def test_single_cyclic_claim_does_not_generate(self) -> None:
        report = verify_generator_claims(2, 4, [GeneratorClaim.parse("u~=8", 2)])
        assert report.checks[0].verified
        assert not report.generates
        assert not report.passed

    def test_wrong_order_fails(self) -> None:
        report = verify_generator_claims(1, 5, [GeneratorClaim.parse("u~=10", 1)])
        assert report.checks[0].order == 5
        assert not report.checks[0].verified
        assert report.generates

    def test_unit_multiple_still_generates(self) -> None:
        report = verify_generator_claims(1, 5, [GeneratorClaim.parse("2u~=5", 1)])
        assert report.passed

    def test_class_in_image_has_order_one(self) -> None:
        report = verify_generator_claims(2, 1, [GeneratorClaim.parse("u~^2=1", 2)])
        assert report.checks[0].order == 1
        assert report.passed

    def test_empty_claims_generate_trivial_torsion(self) -> None:
        assert verify_generator_claims(3, 1, []).generates
        assert not verify_generator_claims(3, 2, []).generates

    def test_dimension_mismatch(self) -> None:
        with pytest.raises(DimensionMismatchError):
            verify_generator_claims(2, 4, [GeneratorClaim.parse("u~=8", 3)])

    def test_table_preconditions(self) -> None:
        with pytest.raises(PreconditionError):
            known_generator_table(4, 1)
        with pytest.raises(PreconditionError):
            known_generator_table(2, 0)
