"""Tests for the ncalg module."""

from concurrent.futures import ThreadPoolExecutor

import pytest

from qlens.exceptions import (
    DimensionMismatchError,
    PreconditionError,
    RewriteBudgetExceeded,
    UnsupportedIdentityError,
)
from qlens.ncalg import (
    INHOMOGENEOUS,
    Generator,
    NCMatrix,
    NCPoly,
    adjoint,
    build_partial_isometry,
    build_projection,
    build_psi,
    clear_rewrite_cache,
    format_poly,
    format_word,
    hopf_galois_witness,
    is_normal_word,
    multi_indices,
    multiply,
    normal_form,
    parse_word,
    psi_component,
    radical_tag,
    sample_properties,
    u1_degree,
    verify_cpn_relations,
    verify_isometry,
    verify_partial_isometry,
    verify_projection,
    verify_qtrace,
    word_degree,
    zr_invariant,
)
from qlens.qcoeff import ONE, ONE_MINUS_Q2, q_power

# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------


class TestWords:
    def test_parse_and_format(self) -> None:
        word = parse_word("z1 z0' z2*")
        assert word == (Generator(1), Generator(0, True), Generator(2, True))
        assert format_word(word) == "z1 z0' z2'"
        assert format_word(()) == "1"
        assert parse_word("1") == ()

    def test_parse_rejects_garbage(self) -> None:
        with pytest.raises(ValueError):
            parse_word("x1")

    def test_normal_words(self) -> None:
        assert is_normal_word(parse_word("z1 z0 z0' z1'"), 2)
        assert not is_normal_word(parse_word("z0 z1"), 2)
        assert not is_normal_word(parse_word("z1' z0'"), 2)
        assert not is_normal_word(parse_word("z0' z0"), 2)
        # both z_n and z_n* in one word
        assert not is_normal_word(parse_word("z1 z0 z0' z1'"), 1)

    def test_word_degree(self) -> None:
        assert word_degree(parse_word("z0 z1 z2'")) == 1
        assert word_degree(()) == 0

    def test_multi_indices_colex(self) -> None:
        assert multi_indices(1, 2) == [(2, 0), (1, 1), (0, 2)]
        assert len(multi_indices(2, 3)) == 10

    def test_radical_tag(self) -> None:
        assert radical_tag((2, 0)) is None
        assert radical_tag((0, 1, 1)) == (1, 1)
        assert radical_tag((2, 1, 0)) == (1, 2)


# ---------------------------------------------------------------------------
# Defining relations
# ---------------------------------------------------------------------------


class TestRelations:
    def test_unstarred_commutation(self) -> None:
        assert NCPoly.word(1, "z0 z1") == NCPoly.word(1, "z1 z0", q_power(-1))

    def test_mixed_commutation(self) -> None:
        assert NCPoly.word(2, "z0' z2") == NCPoly.word(2, "z2 z0'", q_power(1))

    def test_starred_commutation(self) -> None:
        assert NCPoly.word(1, "z1' z0'") == NCPoly.word(1, "z0' z1'", q_power(-1))

    def test_top_generator_is_normal(self) -> None:
        assert NCPoly.word(2, "z2' z2") == NCPoly.word(2, "z2 z2'")

    def test_sphere_relation(self) -> None:
        expected = NCPoly.one(1) - NCPoly.word(1, "z0 z0'")
        assert NCPoly.word(1, "z1 z1'") == expected

    def test_star_commutator(self) -> None:
        lhs = NCPoly.word(1, "z0' z0")
        rhs = NCPoly.word(1, "z0 z0'", q_power(2)) + NCPoly.scalar(1, ONE_MINUS_Q2)
        assert lhs == rhs

    def test_sum_of_squares_is_one(self) -> None:
        for n in (1, 2, 3):
            total = NCPoly.zero(n)
            for i in range(n + 1):
                total = total + NCPoly.word(n, (Generator(i), Generator(i, True)))
            assert total == NCPoly.one(n)

    def test_results_are_normal(self) -> None:
        p = NCPoly.word(2, "z0' z1 z2' z0 z2")
        assert p.is_normal
        assert all(is_normal_word(w, 2) for w, _ in p)


# ---------------------------------------------------------------------------
# NCPoly
# ---------------------------------------------------------------------------


class TestNCPoly:
    def test_generator_index_checked(self) -> None:
        with pytest.raises(DimensionMismatchError):
            NCPoly(1, {(Generator(2),): ONE})

    def test_ambient_n_checked(self) -> None:
        with pytest.raises(PreconditionError):
            NCPoly.one(0)
        with pytest.raises(PreconditionError):
            NCPoly(0)
        with pytest.raises(DimensionMismatchError):
            multiply(NCPoly.one(1), NCPoly.one(2))

    def test_format(self) -> None:
        assert str(NCPoly.word(1, "z0 z1")) == "s^-2 * z1 z0"
        assert format_poly(NCPoly.word(1, "z0' z0")) == "(-s^4 + 1) + s^4 * z0 z0'"
        assert str(NCPoly.zero(1)) == "0"

    def test_coefficient(self) -> None:
        p = NCPoly.word(1, "z0 z1")
        assert p.coefficient("z1 z0") == q_power(-1)
        assert p.coefficient("z0 z1").is_zero

    def test_adjoint_reverses_words(self) -> None:
        assert adjoint(NCPoly.word(1, "z0 z1")) == NCPoly.word(1, "z1' z0'")
        p = NCPoly.word(2, "z0' z1 z2")
        assert adjoint(adjoint(p)) == p

    def test_multiply_matches_concatenation(self) -> None:
        a = NCPoly.word(2, "z1' z0")
        b = NCPoly.word(2, "z0' z2")
        assert multiply(a, b) == NCPoly.word(2, "z1' z0 z0' z2")
        assert a * b == multiply(a, b)

    def test_u1_degree(self) -> None:
        assert u1_degree(NCPoly.word(1, "z0 z1'")) == 0
        assert u1_degree(NCPoly.word(1, "z0 z1")) == 2
        assert u1_degree(NCPoly.zero(1)) == 0
        mixed = NCPoly.word(1, "z0") + NCPoly.word(1, "z0'")
        assert u1_degree(mixed) == INHOMOGENEOUS

    def test_zr_invariant(self) -> None:
        p = NCPoly.word(1, "z0 z0 z1")
        assert zr_invariant(p, 3)
        assert not zr_invariant(p, 2)
        with pytest.raises(PreconditionError):
            zr_invariant(p, 0)

    def test_budget_exhaustion(self) -> None:
        clear_rewrite_cache()
        with pytest.raises(RewriteBudgetExceeded) as info:
            NCPoly.word(2, "z0 z1 z2 z0' z1'", budget=1)
        assert info.value.budget == 1

    def test_budget_must_be_positive(self) -> None:
        raw = NCPoly(1, {parse_word("z0 z1"): ONE})
        with pytest.raises(PreconditionError):
            normal_form(raw, budget=0)

    def test_cache_clear_keeps_results(self) -> None:
        before = NCPoly.word(2, "z2' z1 z0' z0")
        clear_rewrite_cache()
        assert NCPoly.word(2, "z2' z1 z0' z0") == before


# ---------------------------------------------------------------------------
# Square roots
# ---------------------------------------------------------------------------


class TestRadicals:
    def test_component_carries_tag(self) -> None:
        assert psi_component(1, 2, (1, 1)).radical == ((1, 1),)
        assert psi_component(1, 2, (2, 0)).radical == ()

    def test_pairing_removes_tag(self) -> None:
        c = psi_component(1, 2, (1, 1))
        assert multiply(adjoint(c), c).radical == ()

    def test_mixed_tags_cannot_be_added(self) -> None:
        a = psi_component(1, 2, (1, 1))
        b = psi_component(1, 2, (2, 0))
        with pytest.raises(UnsupportedIdentityError):
            _ = a + b


# ---------------------------------------------------------------------------
# Matrices and identities
# ---------------------------------------------------------------------------


class TestMatrices:
    def test_psi_lengths(self) -> None:
        assert build_psi(1, 2).rows == 3
        assert build_psi(2, 2).rows == 6
        assert build_psi(2, -3).rows == 10
        assert build_psi(1, 0).rows == 1

    def test_inner_dimension_checked(self) -> None:
        psi = build_psi(1, 1)
        with pytest.raises(DimensionMismatchError):
            psi.matmul(psi)

    def test_ragged_rows_rejected(self) -> None:
        one, zero = NCPoly.one(1), NCPoly.zero(1)
        with pytest.raises(DimensionMismatchError):
            NCMatrix(1, ((one, zero), (one,)))

    def test_projection_shape(self) -> None:
        proj = build_projection(1, 2)
        assert (proj.rows, proj.cols) == (3, 3)

    def test_partial_isometry_degree(self) -> None:
        v = build_partial_isometry(1, 2, 0)
        assert all(u1_degree(e) == -2 for e in v if not e.is_zero)


@pytest.mark.parametrize(
    ("n", "big_n"),
    [(1, 0), (1, 1), (1, -1), (1, 2), (1, -2), (1, 3), (1, -3), (2, 1), (2, -1)],
)
def test_isometry_and_projection(n: int, big_n: int) -> None:
    assert verify_isometry(n, big_n)
    assert verify_projection(n, big_n)


@pytest.mark.parametrize("big_n", [2, -2])
def test_isometry_and_projection_n2(big_n: int) -> None:
    assert verify_isometry(2, big_n)
    assert verify_projection(2, big_n)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_qtrace(n: int) -> None:
    assert verify_qtrace(n)


@pytest.mark.parametrize(("r", "big_n"), [(2, 0), (1, 0), (1, 1)])
def test_partial_isometry(r: int, big_n: int) -> None:
    assert verify_partial_isometry(1, r, big_n)


@pytest.mark.parametrize(("r", "big_n"), [(1, 0), (1, 1), (1, 2), (2, 2), (2, 4)])
def test_hopf_galois_witness(r: int, big_n: int) -> None:
    assert hopf_galois_witness(1, r, big_n)


def test_hopf_galois_witness_n2() -> None:
    assert hopf_galois_witness(2, 1, 2)


def test_hopf_galois_witness_preconditions() -> None:
    with pytest.raises(PreconditionError):
        hopf_galois_witness(1, 2, 3)
    with pytest.raises(PreconditionError):
        hopf_galois_witness(1, 0, 0)
    with pytest.raises(PreconditionError):
        hopf_galois_witness(1, 2, -2)


@pytest.mark.parametrize("n", [1, 2])
def test_cpn_relations(n: int) -> None:
    assert verify_cpn_relations(n)


def test_cpn_relations_higher_projection() -> None:
    assert verify_cpn_relations(1, N=2)


# ---------------------------------------------------------------------------
# Randomized properties
# ---------------------------------------------------------------------------


class TestSampleProperties:
    @pytest.mark.parametrize(("n", "seed"), [(1, 0), (2, 1)])
    def test_five_hundred_samples(self, n: int, seed: int) -> None:
        report = sample_properties(n, 500, seed=seed, max_len=6)
        assert report.passed, report.failures[:5]
        assert report.checks >= 500 * 4

    def test_deterministic(self) -> None:
        a = sample_properties(1, 5, seed=11)
        b = sample_properties(1, 5, seed=11)
        assert (a.checks, a.failures) == (b.checks, b.failures)


# ---------------------------------------------------------------------------
# Concurrency
# ---------------------------------------------------------------------------


def test_parallel_verifications_agree_with_serial() -> None:
    clear_rewrite_cache()
    jobs = [(n, big_n) for n in (1, 2) for big_n in (-2, -1, 0, 1, 2)]
    with ThreadPoolExecutor(max_workers=4) as pool:
        parallel = list(pool.map(lambda job: verify_projection(*job), jobs))
    assert all(parallel)


def test_parallel_normal_forms_share_one_result() -> None:
    word = "z2' z1 z0' z0 z2 z1'"
    expected = NCPoly.word(2, word)
    clear_rewrite_cache()
    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(lambda _: NCPoly.word(2, word), range(16)))
    assert all(r == expected for r in results)


def test_clear_during_parallel_reduction() -> None:
    word = "z1' z0 z1 z0'"
    expected = NCPoly.word(1, word)

    def reduce_then_clear(i: int) -> NCPoly:
        if i % 3 == 0:
            clear_rewrite_cache()
        return NCPoly.word(1, word)

    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(reduce_then_clear, range(12)))
    assert all(r == expected for r in results)
