"""Tests for the kring module."""

import pytest

from qlens.exceptions import DimensionMismatchError, PreconditionError
from qlens.kring import (
    TruncPoly,
    basis_change_P_to_u,
    euler_class,
    line_bundle_class,
    line_bundle_grid,
    pair_mu,
    pairing_grid,
    projection_class,
    trunc_mul,
    u_pairing_grid,
)

# ---------------------------------------------------------------------------
# TruncPoly
# ---------------------------------------------------------------------------


class TestTruncPoly:
    def test_coefficient_count_checked(self) -> None:
        with pytest.raises(DimensionMismatchError):
            TruncPoly(2, (1, 2))

    def test_from_coeffs_pads_and_truncates(self) -> None:
        assert TruncPoly.from_coeffs(3, [1, 2]).coeffs == (1, 2, 0, 0)
        assert TruncPoly.from_coeffs(1, [1, 2, 3]).coeffs == (1, 2)

    def test_u_is_nilpotent(self) -> None:
        for n in range(1, 6):
            u = TruncPoly.u(n)
            assert not (u**n).is_zero
            assert (u ** (n + 1)).is_zero

    def test_mul_truncates(self) -> None:
        a = TruncPoly.from_coeffs(2, [1, 1, 1])
        assert trunc_mul(a, a).coeffs == (1, 2, 3)

    def test_int_scaling(self) -> None:
        a = TruncPoly.from_coeffs(2, [1, -2, 0])
        assert (3 * a).coeffs == (3, -6, 0)
        assert (a * 3) == 3 * a

    def test_degree_mismatch(self) -> None:
        with pytest.raises(DimensionMismatchError):
            trunc_mul(TruncPoly.one(2), TruncPoly.one(3))
        with pytest.raises(DimensionMismatchError):
            _ = TruncPoly.one(2) + TruncPoly.one(3)

    def test_inverse(self) -> None:
        x = TruncPoly.from_coeffs(4, [1, -3, 5, 0, 7])
        assert x * x.inverse() == TruncPoly.one(4)
        y = -TruncPoly.one(3) + TruncPoly.u(3)
        assert y * y.inverse() == TruncPoly.one(3)

    def test_non_unit_has_no_inverse(self) -> None:
        with pytest.raises(PreconditionError):
            TruncPoly.from_coeffs(2, [2, 1]).inverse()

    def test_augmentation(self) -> None:
        assert line_bundle_class(3, -5).augmentation == 1
        assert euler_class(3, 5).augmentation == 0

    def test_monomial_rejects_negative_power(self) -> None:
        with pytest.raises(PreconditionError):
            TruncPoly.monomial(2, -1)
        assert TruncPoly.monomial(2, 5).is_zero


class TestFormatAndParse:
    def test_format(self) -> None:
        assert TruncPoly.from_coeffs(2, [0, 2, -1]).format() == "2u - u^2"
        assert TruncPoly.from_coeffs(3, [0, 12, 0, 1]).format("u~") == "12u~ + u~^3"
        assert TruncPoly.from_coeffs(1, [0, -3]).format() == "-3u"
        assert TruncPoly.from_coeffs(2, [-1, 0, 0]).format() == "-1"
        assert TruncPoly.zero(2).format() == "0"
        assert str(TruncPoly.from_coeffs(1, [1, 1])) == "1 + u"

    def test_parse(self) -> None:
        assert TruncPoly.parse("u^3+12u", 3).coeffs == (0, 12, 0, 1)
        assert TruncPoly.parse("u~^2+6u~", 3).coeffs == (0, 6, 1, 0)
        assert TruncPoly.parse("2u - u^2", 2).coeffs == (0, 2, -1)
        assert TruncPoly.parse("ũ^2 − 6ũ", 2).coeffs == (0, -6, 1)
        assert TruncPoly.parse("3 + u + u", 1).coeffs == (3, 2)
        assert TruncPoly.parse("4*u^2", 2).coeffs == (0, 0, 4)

    def test_parse_drops_high_powers(self) -> None:
        assert TruncPoly.parse("u^3+12u", 2).coeffs == (0, 12, 0)

    @pytest.mark.parametrize("text", ["", "abc", "+", "2u u", "u^2 +"])
    def test_parse_rejects(self, text: str) -> None:
        with pytest.raises(ValueError):
            TruncPoly.parse(text, 3)

    def test_format_then_parse(self) -> None:
        for coeffs in ([0, 1, -2, 3], [5, 0, 0, -1], [0, 0, 0, 0]):
            x = TruncPoly.from_coeffs(3, coeffs)
            assert TruncPoly.parse(x.format(), 3) == x


# ---------------------------------------------------------------------------
# Line bundles and the Euler class
# ---------------------------------------------------------------------------


class TestLineBundles:
    def test_trivial_bundle(self) -> None:
        assert line_bundle_class(3, 0) == TruncPoly.one(3)

    def test_first_bundle(self) -> None:
        assert line_bundle_class(3, -1) == TruncPoly.one(3) - TruncPoly.u(3)
        assert line_bundle_class(3, 1).coeffs == (1, 1, 1, 1)

    def test_tensor_rule(self) -> None:
        for n in (1, 2, 3, 4):
            for big_n in range(-6, 7):
                for big_m in range(-6, 7):
                    product = line_bundle_class(n, big_n) * line_bundle_class(n, big_m)
                    assert product == line_bundle_class(n, big_n + big_m)

    def test_negative_power(self) -> None:
        assert line_bundle_class(3, -1) ** -2 == line_bundle_class(3, 2)

    def test_projection_represents_bundle(self) -> None:
        for big_n in range(-4, 5):
            assert projection_class(2, big_n) == line_bundle_class(2, big_n)

    def test_euler_class(self) -> None:
        assert euler_class(3, 4).coeffs == (0, 4, -6, 4)
        assert euler_class(3, 1).coeffs == (0, 1, 0, 0)
        assert euler_class(2, 7) == TruncPoly.one(2) - line_bundle_class(2, -7)

    def test_euler_class_requires_positive_r(self) -> None:
        with pytest.raises(PreconditionError):
            euler_class(2, 0)


# ---------------------------------------------------------------------------
# Pairings and basis change
# ---------------------------------------------------------------------------


class TestPairings:
    def test_first_pairing_is_minus_n(self) -> None:
        for big_n in range(-8, 9):
            assert pair_mu(1, line_bundle_class(3, big_n)) == -big_n

    def test_rank_pairing(self) -> None:
        for big_n in range(-5, 6):
            assert pair_mu(0, line_bundle_class(2, big_n)) == 1

    def test_pairing_grid(self) -> None:
        assert pairing_grid(2, 2) == [[1, 1, 1], [0, 1, 2], [0, 0, 1]]
        assert pairing_grid(1, 3) == [[1, 1, 1, 1], [0, 1, 2, 3]]

    def test_line_bundle_grid(self) -> None:
        grid = line_bundle_grid(2, -2, 3)
        assert grid[0] == [1] * 6
        assert grid[1] == [2, 1, 0, -1, -2, -3]
        # <mu_2, [L_N]> = C(N + 1, 2) for N > 0 and C(-N, 2) otherwise
        assert grid[2] == [1, 0, 0, 1, 3, 6]

    def test_u_pairing_grid(self) -> None:
        assert u_pairing_grid(2) == [[1, 0, 0], [0, -1, 0], [0, 0, 1]]

    def test_k_out_of_range(self) -> None:
        with pytest.raises(PreconditionError):
            pair_mu(3, TruncPoly.one(2))
        with pytest.raises(PreconditionError):
            pair_mu(-1, TruncPoly.one(2))


class TestBasisChange:
    def test_matrix_is_binomial(self) -> None:
        pm = basis_change_P_to_u(2)
        assert pm.matrix == ((1, 1, 1), (0, 1, 2), (0, 0, 1))
        assert pm.inverse == ((1, -1, 1), (0, 1, -2), (0, 0, 1))

    def test_projection_classes_map_to_unit_vectors(self) -> None:
        pm = basis_change_P_to_u(3)
        for big_n in range(4):
            expected = tuple(int(j == big_n) for j in range(4))
            assert pm.to_p_basis(projection_class(3, -big_n)) == expected
            assert pm.to_u_basis(expected) == projection_class(3, -big_n)

    def test_round_trip_through_u(self) -> None:
        pm = basis_change_P_to_u(4)
        for j in range(5):
            u_j = TruncPoly.monomial(4, j)
            assert pm.to_u_basis(pm.to_p_basis(u_j)) == u_j

    def test_u_in_p_basis(self) -> None:
        # u = [P_0] - [P_-1]
        assert basis_change_P_to_u(2).to_p_basis(TruncPoly.u(2)) == (1, -1, 0)

    def test_dimension_checks(self) -> None:
        pm = basis_change_P_to_u(2)
        with pytest.raises(DimensionMismatchError):
            pm.to_u_basis([1, 0])
        with pytest.raises(DimensionMismatchError):
            pm.to_p_basis(TruncPoly.one(3))

    def test_requires_positive_n(self) -> None:
        with pytest.raises(PreconditionError):
            basis_change_P_to_u(0)
