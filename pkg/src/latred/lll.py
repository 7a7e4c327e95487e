"""LLL baseline with double-precision Gram-Schmidt.

The basis columns and accumulated transform stay exact integers; only the
orthogonalized vectors and their projection coefficients are floating
point.  Accuracy comes from two measures: every orthogonalization is
repeated until no component moves by more than a unit in the last place
(plus one extra round once that holds), and on every swap the two affected
orthogonal vectors are recomputed from scratch instead of patched.  That
is enough for the random bases of interest here, not for adversarial
inputs built to break floating-point reducers.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .core import (
    Basis,
    TransformRecord,
    apply_column_op,
    nint_float,
    summarize_columns,
)
from .greedy import ReductionResult

# Relative squared-norm floor under which a column counts as dependent.
RANK_FLOOR = 1e-30

_ULP = 2.0 ** -52


@dataclass(frozen=True)
class LLLConfig:
    delta: float = 1.0 - 1e-15
    reorth_cap: int = 4

    def __post_init__(self):
        if not 0.25 < self.delta <= 1.0:
            raise ValueError(f"delta must lie in (1/4, 1], got {self.delta}")
        if self.reorth_cap < 2:
            raise ValueError("reorth_cap must be at least 2")


@dataclass
class GSState:
    """Floating Gram-Schmidt data: b* columns, mu coefficients, norms."""

    bstar: np.ndarray            # (m, n), column k is b*_k
    mu: np.ndarray               # (n, n) lower triangular, unit diagonal
    norms_sq: np.ndarray         # (n,), squared norms of b*
    dependent: list[int] = field(default_factory=list)


def _float_col(basis: Basis, j: int) -> np.ndarray:
    return np.array(basis.cols[j], dtype=float)


def _orthogonalize_column(state: GSState, basis: Basis, k: int,
                          config: LLLConfig) -> None:
    """Project column k off b*_0..b*_{k-1}, repeating until stable.

    A pass is converged when every component changed by at most one ulp of
    its magnitude; one additional pass then runs, and the total number of
    passes never exceeds reorth_cap.
    """
    b = _float_col(basis, k)
    norm0 = float(b @ b)
    state.mu[k, :] = 0.0
    state.mu[k, k] = 1.0
    converged = False
    for _ in range(config.reorth_cap):
        prev = b.copy()
        for j in range(k):
            nj = state.norms_sq[j]
            if nj <= 0.0:
                continue
            t = float(b @ state.bstar[:, j]) / nj
            state.mu[k, j] += t
            b -= t * state.bstar[:, j]
        if converged:
            break
        change = np.abs(b - prev)
        tol = _ULP * np.maximum(np.abs(prev), np.abs(b))
        converged = bool(np.all(change <= tol))
    nk = float(b @ b)
    if norm0 == 0.0 or nk < RANK_FLOOR * norm0:
        state.bstar[:, k] = 0.0
        state.norms_sq[k] = 0.0
        if k not in state.dependent:
            state.dependent.append(k)
        return
    state.bstar[:, k] = b
    state.norms_sq[k] = nk


def orthogonalize(basis: Basis, config: LLLConfig | None = None) -> GSState:
    """Re-orthogonalized classical Gram-Schmidt over all columns.

    Columns that come out (numerically) dependent, including zero columns,
    get a zero b* and are listed in the returned state's ``dependent``.
    """
    cfg = config if config is not None else LLLConfig()
    m, n = basis.m, basis.n
    state = GSState(
        bstar=np.zeros((m, n)),
        mu=np.zeros((n, n)),
        norms_sq=np.zeros(n),
    )
    for k in range(n):
        _orthogonalize_column(state, basis, k, cfg)
    return state


def size_reduce(state: GSState, basis: Basis, k: int,
                transform: TransformRecord | None = None) -> None:
    """Make |mu[k][j]| <= 1/2 for all j < k via integer column operations."""
    for j in range(k - 1, -1, -1):
        c = nint_float(float(state.mu[k, j]))
        if c == 0:
            continue
        apply_column_op(basis, None, transform, k, j, c)
        # b* is unchanged; only row k of mu moves.
        state.mu[k, :j] -= c * state.mu[j, :j]
        state.mu[k, j] -= c


def lovasz_ok(state: GSState, k: int, delta: float) -> bool:
    """Swap condition between columns k-1 and k (k >= 1)."""
    if k < 1:
        raise ValueError("lovasz_ok needs k >= 1")
    prev = float(state.norms_sq[k - 1])
    mu = float(state.mu[k, k - 1])
    return delta * prev <= float(state.norms_sq[k]) + mu * mu * prev


def _recompute_after_swap(state: GSState, basis: Basis, k: int,
                          config: LLLConfig) -> None:
    """Rebuild b*_{k-1}, b*_k from scratch and the mu entries that read them."""
    before = len(state.dependent)
    for idx in (k - 1, k):
        _orthogonalize_column(state, basis, idx, config)
    if len(state.dependent) > before:
        raise ValueError(
            f"rank deficiency detected at column {state.dependent[-1]} after swap"
        )
    n = basis.n
    for i in range(k + 1, n):
        ai = _float_col(basis, i)
        for j in (k - 1, k):
            state.mu[i, j] = float(ai @ state.bstar[:, j]) / state.norms_sq[j]


def lll_reduce(basis: Basis, config: LLLConfig | None = None, *,
               track_transform: bool = False) -> ReductionResult:
    """Classical LLL with recompute-on-swap.

    Requires linearly independent columns; a column whose orthogonal part
    falls under the rank floor raises ValueError naming it.
    iterations_applied counts swaps.
    """
    cfg = config if config is not None else LLLConfig()
    started = time.perf_counter()
    work = basis.copy()
    n = work.n
    transform = TransformRecord.identity(n) if track_transform else None
    before = summarize_columns(work)
    state = orthogonalize(work, cfg)
    if state.dependent:
        raise ValueError(
            f"rank deficiency detected at column {state.dependent[0]}"
        )
    swaps = 0
    k = 1
    while k < n:
        size_reduce(state, work, k, transform)
        if lovasz_ok(state, k, cfg.delta):
            k += 1
        else:
            work.swap_columns(k - 1, k)
            if transform is not None:
                transform.swap_columns(k - 1, k)
            _recompute_after_swap(state, work, k, cfg)
            swaps += 1
            k = max(k - 1, 1)
    return ReductionResult(
        basis=work,
        iterations_applied=swaps,
        before=before,
        after=summarize_columns(work),
        seconds=time.perf_counter() - started,
        transform=transform,
    )
