import random

import pytest

from latred.core import (
    Basis,
    GramMatrix,
    INT128_MAX,
    MatFormatError,
    NormSummary,
    TransformRecord,
    apply_column_op,
    apply_transform,
    det_sign_small,
    det_small,
    gram_compute,
    is_unimodular,
    nint_float,
    nint_ratio,
    norm_summary,
    read_mat,
    write_mat,
)

from oracles import det_cofactor, gram_oracle


def random_basis(rng, max_dim=8, max_entry=50):
    m = rng.randint(1, max_dim)
    n = rng.randint(1, max_dim)
    return Basis([[rng.randint(-max_entry, max_entry) for _ in range(m)]
                  for _ in range(n)])


class TestGramCompute:
    def test_two_columns(self):
        g = gram_compute(Basis([[1, 2], [3, 4]]))
        assert g.g == [[5, 11], [11, 25]]

    def test_identity(self):
        g = gram_compute(Basis.identity(3))
        assert g.g == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]

    def test_skewed_pair(self):
        g = gram_compute(Basis([[1, 0], [10, 1]]))
        assert g.g == [[1, 10], [10, 101]]

    def test_matches_direct_inner_products(self):
        rng = random.Random(101)
        for _ in range(50):
            basis = random_basis(rng)
            assert gram_compute(basis).g == gram_oracle(basis.cols)

    def test_overflow_names_pair(self):
        big = 1 << 80
        basis = Basis([[big, big], [big, big]])
        with pytest.raises(OverflowError, match=r"\(0,0\)"):
            gram_compute(basis)


class TestNintRatio:
    def test_small_ratio_rounds_to_zero(self):
        assert nint_ratio(10, 101) == 0

    def test_exact_ratio(self):
        assert nint_ratio(10, 1) == 10

    def test_halves_away_from_zero(self):
        assert nint_ratio(7, 2) == 4
        assert nint_ratio(-7, 2) == -4
        assert nint_ratio(1, 2) == 1
        assert nint_ratio(-1, 2) == -1

    def test_rejects_nonpositive_denominator(self):
        with pytest.raises(ValueError):
            nint_ratio(3, 0)
        with pytest.raises(ValueError):
            nint_ratio(3, -2)

    def test_within_half_of_true_ratio(self):
        # |num/den - result| <= 1/2, checked as |2*(num - r*den)| <= den.
        rng = random.Random(7)
        for _ in range(20000):
            num = rng.randint(-10**9, 10**9)
            den = rng.randint(1, 10**9)
            r = nint_ratio(num, den)
            assert abs(2 * (num - r * den)) <= den

    def test_descent_inequality(self):
        # r*r*den^2 - 2*r*num*den <= 0 is what makes projection monotone.
        rng = random.Random(8)
        for _ in range(20000):
            num = rng.randint(-10**6, 10**6)
            den = rng.randint(1, 10**6)
            r = nint_ratio(num, den)
            assert r * r * den * den - 2 * r * num * den <= 0


class TestNintFloat:
    def test_matches_ratio_convention(self):
        assert nint_float(0.5) == 1
        assert nint_float(-0.5) == -1
        assert nint_float(2.5) == 3
        assert nint_float(0.49999) == 0
        assert nint_float(-10.0) == -10


class TestNormSummary:
    def test_identity(self):
        g = gram_compute(Basis.identity(4))
        assert norm_summary(g) == NormSummary(4, 1)

    def test_trace_and_min(self):
        g = GramMatrix([[1, 10], [10, 101]])
        assert norm_summary(g) == NormSummary(102, 1)

    def test_zero_column_excluded_from_min(self):
        g = GramMatrix([[0, 0], [0, 9]])
        assert norm_summary(g) == NormSummary(9, 9)

    def test_all_zero(self):
        g = GramMatrix([[0, 0], [0, 0]])
        assert norm_summary(g) == NormSummary(0, 0)


class TestApplyColumnOp:
    def test_clears_skewed_column(self):
        basis = Basis([[1, 0], [10, 1]])
        gram = gram_compute(basis)
        u = TransformRecord.identity(2)
        apply_column_op(basis, gram, u, 1, 0, 10)
        assert basis.cols == [[1, 0], [0, 1]]
        assert gram == gram_compute(basis)
        assert gram.g == [[1, 0], [0, 1]]
        assert apply_transform(Basis([[1, 0], [10, 1]]), u) == basis

    def test_zero_coefficient_is_noop(self):
        basis = Basis([[1, 2], [3, 4]])
        gram = gram_compute(basis)
        before_cols = [list(c) for c in basis.cols]
        apply_column_op(basis, gram, None, 0, 1, 0)
        assert basis.cols == before_cols

    def test_negative_coefficient_keeps_unit_determinant(self):
        basis = Basis.identity(2)
        u = TransformRecord.identity(2)
        apply_column_op(basis, None, u, 0, 1, -1)
        assert basis.cols[0] == [1, 1]
        assert det_small(u.to_rows()) == 1

    def test_rejects_equal_indices(self):
        basis = Basis.identity(2)
        with pytest.raises(ValueError):
            apply_column_op(basis, None, None, 1, 1, 3)

    def test_random_sequences_keep_gram_and_transform_consistent(self):
        rng = random.Random(202)
        for _ in range(30):
            basis = random_basis(rng, max_dim=6, max_entry=20)
            if basis.n < 2:
                continue
            original = basis.copy()
            gram = gram_compute(basis)
            u = TransformRecord.identity(basis.n)
            for _ in range(25):
                j = rng.randrange(basis.n)
                k = rng.randrange(basis.n)
                if j == k:
                    continue
                apply_column_op(basis, gram, u, j, k, rng.randint(-4, 4))
            assert gram == gram_compute(basis)
            assert apply_transform(original, u) == basis
            assert abs(det_small(u.to_rows())) == 1


class TestDeterminant:
    def test_identity(self):
        assert det_sign_small([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1

    def test_column_swap_flips_sign(self):
        assert det_sign_small([[0, 1, 0], [1, 0, 0], [0, 0, 1]]) == -1

    def test_magnitude_visible_to_caller(self):
        m = [[2, 0], [0, 2]]
        assert det_sign_small(m) == 1
        assert det_small(m) == 4
        assert not is_unimodular(TransformRecord([[2, 0], [0, 2]]))

    def test_singular(self):
        assert det_sign_small([[1, 2], [2, 4]]) == 0

    def test_matches_cofactor_expansion(self):
        rng = random.Random(303)
        for _ in range(200):
            n = rng.randint(1, 4)
            rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
            assert det_small(rows) == det_cofactor(rows)

    def test_rejects_large_n(self):
        with pytest.raises(ValueError):
            det_small([[0] * 17 for _ in range(17)])


class TestMatFormat:
    def test_round_trip(self, tmp_path):
        rng = random.Random(404)
        basis = random_basis(rng, max_dim=7, max_entry=10**6)
        path = tmp_path / "b.mat"
        write_mat(basis, path)
        assert read_mat(path) == basis

    def test_header_then_rows(self, tmp_path):
        path = tmp_path / "b.mat"
        write_mat(Basis([[1, 0], [10, 1]]), path)
        assert path.read_text() == "2 2\n1 10\n0 1\n"

    def test_rejects_oversized_entries(self, tmp_path):
        path = tmp_path / "big.mat"
        path.write_text(f"1 1\n{INT128_MAX + 1}\n")
        with pytest.raises(MatFormatError, match="128-bit"):
            read_mat(path)

    def test_rejects_wrong_shape(self, tmp_path):
        path = tmp_path / "bad.mat"
        path.write_text("2 2\n1 2 3\n4 5\n")
        with pytest.raises(MatFormatError):
            read_mat(path)

    def test_rejects_garbage(self, tmp_path):
        path = tmp_path / "bad.mat"
        path.write_text("2 2\n1 x\n4 5\n")
        with pytest.raises(MatFormatError):
            read_mat(path)


class TestBasisType:
    def test_rejects_float_entries(self):
        with pytest.raises(TypeError):
            Basis([[1.5, 0], [0, 1]])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Basis([])

    def test_rows_columns_round_trip(self):
        rows = [[1, 2, 3], [4, 5, 6]]
        assert Basis.from_rows(rows).to_rows() == rows

    def test_copy_is_deep(self):
        basis = Basis([[1, 2], [3, 4]])
        dup = basis.copy()
        dup.cols[0][0] = 99
        assert basis.cols[0][0] == 1
