import math
import random

import numpy as np
import pytest

from latred.core import Basis, apply_transform, det_small, summarize_columns
from latred.lll import (
    LLLConfig,
    lll_reduce,
    lovasz_ok,
    orthogonalize,
    size_reduce,
)

from oracles import exact_lll, shortest_vector_sq


def random_square_basis(rng, n, max_entry=20):
    while True:
        cols = [[rng.randint(-max_entry, max_entry) for _ in range(n)]
                for _ in range(n)]
        if det_small(cols) != 0:
            return Basis(cols)


def orthogonality_residual(state, n):
    worst = 0.0
    for j in range(n):
        for k in range(j + 1, n):
            denom = math.sqrt(state.norms_sq[j] * state.norms_sq[k])
            if denom == 0:
                continue
            dot = float(state.bstar[:, j] @ state.bstar[:, k])
            worst = max(worst, abs(dot) / denom)
    return worst


def check_postconditions(basis, delta, mu_tol=1e-9):
    """Size reduction and the swap condition, from a fresh orthogonalization."""
    state = orthogonalize(basis)
    n = basis.n
    for k in range(n):
        for j in range(k):
            assert abs(state.mu[k, j]) <= 0.5 + mu_tol
    for k in range(1, n):
        assert lovasz_ok(state, k, delta - 1e-9)


class TestOrthogonalize:
    def test_identity(self):
        state = orthogonalize(Basis.identity(3))
        assert np.allclose(state.bstar, np.eye(3))
        assert np.allclose(state.mu, np.eye(3))

    def test_skewed_pair(self):
        state = orthogonalize(Basis([[1, 0], [10, 1]]))
        assert np.allclose(state.bstar[:, 0], [1.0, 0.0])
        assert state.mu[1, 0] == pytest.approx(10.0)
        assert np.allclose(state.bstar[:, 1], [0.0, 1.0], atol=1e-12)

    def test_residual_small_on_random_bases(self):
        rng = random.Random(50)
        for _ in range(10):
            basis = random_square_basis(rng, 8, max_entry=100)
            state = orthogonalize(basis)
            assert orthogonality_residual(state, 8) <= 1e-12

    def test_residual_small_at_n64_large_entries(self):
        rng = random.Random(51)
        cols = [[rng.randint(-(2**13), 2**13) for _ in range(64)]
                for _ in range(64)]
        state = orthogonalize(Basis(cols))
        if not state.dependent:
            assert orthogonality_residual(state, 64) <= 1e-12

    def test_zero_column_flagged(self):
        basis = Basis([[1, 0], [0, 0]])
        state = orthogonalize(basis)
        assert state.dependent == [1]
        assert state.norms_sq[1] == 0.0

    def test_dependent_column_flagged(self):
        basis = Basis([[1, 0], [2, 0], [0, 1]])
        state = orthogonalize(basis)
        assert state.dependent == [1]


class TestSizeReduce:
    def test_clears_large_mu(self):
        basis = Basis([[1, 0], [10, 1]])
        state = orthogonalize(basis)
        size_reduce(state, basis, 1)
        assert basis.cols[1] == [0, 1]
        assert state.mu[1, 0] == pytest.approx(0.0)

    def test_noop_when_already_reduced(self):
        basis = Basis([[5, 1], [2, -3]])  # mu[1][0] = 7/26, inside [-1/2, 1/2]
        state = orthogonalize(basis)
        before = [list(c) for c in basis.cols]
        size_reduce(state, basis, 1)
        assert basis.cols == before

    def test_exact_half_rounds_away_from_zero(self):
        basis = Basis([[2, 0], [1, 1]])  # mu[1][0] == 1/2 exactly
        state = orthogonalize(basis)
        assert state.mu[1, 0] == pytest.approx(0.5)
        size_reduce(state, basis, 1)
        assert basis.cols[1] == [-1, 1]
        assert state.mu[1, 0] == pytest.approx(-0.5)


class TestLovasz:
    def test_orthogonal_equal_norms_pass(self):
        state = orthogonalize(Basis([[3, 0], [0, 3]]))
        assert lovasz_ok(state, 1, 1.0)

    def test_direct_failure_case(self):
        state = orthogonalize(Basis.identity(2))
        state.norms_sq[0] = 1.0
        state.norms_sq[1] = 0.1
        state.mu[1, 0] = 0.4
        assert not lovasz_ok(state, 1, 0.99)  # 0.99 > 0.1 + 0.16

    def test_quarter_delta_always_passes_when_size_reduced(self):
        rng = random.Random(60)
        for _ in range(20):
            basis = random_square_basis(rng, 4)
            res = lll_reduce(basis, LLLConfig(delta=0.75))
            state = orthogonalize(res.basis)
            for k in range(1, 4):
                assert lovasz_ok(state, k, 0.25)


class TestLLLReduce:
    def test_identity_unchanged(self):
        res = lll_reduce(Basis.identity(4))
        assert res.basis == Basis.identity(4)

    def test_skewed_pair(self):
        res = lll_reduce(Basis([[1, 0], [10, 1]]))
        assert res.basis.cols == [[1, 0], [0, 1]]

    def test_three_dim_example_matches_exact_reference(self):
        cols = [[1, 1, 1], [-1, 0, 2], [3, 5, 6]]
        res = lll_reduce(Basis(cols), LLLConfig(delta=0.75))
        assert res.basis.cols == exact_lll(cols, 0.75)
        assert all(sum(x * x for x in c) <= 6 for c in res.basis.cols)
        check_postconditions(res.basis, 0.75)

    def test_matches_exact_reference_on_random_bases(self):
        rng = random.Random(61)
        for _ in range(15):
            n = rng.randint(2, 5)
            basis = random_square_basis(rng, n, max_entry=15)
            res = lll_reduce(basis, LLLConfig(delta=0.75))
            assert res.basis.cols == exact_lll(basis.cols, 0.75)

    def test_postconditions_on_random_bases(self):
        rng = random.Random(62)
        for delta in (0.75, 1.0 - 1e-15):
            for _ in range(10):
                basis = random_square_basis(rng, 6, max_entry=40)
                res = lll_reduce(basis, LLLConfig(delta=delta))
                check_postconditions(res.basis, delta)

    def test_lattice_preserved(self):
        rng = random.Random(63)
        for _ in range(15):
            n = rng.randint(2, 8)
            basis = random_square_basis(rng, n)
            res = lll_reduce(basis, track_transform=True)
            assert apply_transform(basis, res.transform) == res.basis
            assert abs(det_small(res.transform.to_rows())) == 1

    def test_norm_quality_vs_enumeration(self):
        rng = random.Random(64)
        delta = 1.0 - 1e-15
        factor = (2.0 / math.sqrt(4.0 * delta - 1.0))
        for _ in range(15):
            n = rng.randint(2, 3)
            basis = random_square_basis(rng, n, max_entry=8)
            res = lll_reduce(basis, LLLConfig(delta=delta))
            best = shortest_vector_sq(basis.cols, 12)
            out_min = summarize_columns(res.basis).min_norm_sq
            assert math.sqrt(out_min) <= factor ** (n - 1) * math.sqrt(best) + 1e-9

    def test_rank_deficiency_raises_with_column(self):
        basis = Basis([[1, 0], [2, 0], [0, 1]])
        with pytest.raises(ValueError, match="column 1"):
            lll_reduce(basis)


class TestLLLConfig:
    def test_rejects_bad_delta(self):
        with pytest.raises(ValueError):
            LLLConfig(delta=0.25)
        with pytest.raises(ValueError):
            LLLConfig(delta=1.1)

    def test_rejects_tiny_cap(self):
        with pytest.raises(ValueError):
            LLLConfig(reorth_cap=1)
