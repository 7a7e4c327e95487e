"""Two alternative reducers kept for comparison.

Both looked natural and both lose to the main greedy/LLL pair in practice;
they are retained so the benchmark harness can reproduce that negative
result.  random_combination re-centers one random column against the best
real-coefficient combination of all the others (rounded to integers, which
is usually too coarse).  mgs_pivot is pivoted Gram-Schmidt with rounded
projections and no swap condition.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np

from .core import (
    Basis,
    GramMatrix,
    TransformRecord,
    apply_column_op,
    gram_compute,
    nint_float,
    norm_summary,
)
from .genlat import SplitMix64
from .greedy import ReductionResult
from .lll import RANK_FLOOR

log = logging.getLogger(__name__)

VARIANTS = ("random_combination", "mgs_pivot")


@dataclass(frozen=True)
class AltConfig:
    variant: str = "random_combination"
    p: float = 2.0
    iterations: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if not self.p > 0:
            raise ValueError("p must be positive")
        if self.iterations < 0:
            raise ValueError("iterations must be nonnegative")


def random_combination_step(basis: Basis, gram: GramMatrix, j: int,
                            transform: TransformRecord | None = None) -> bool:
    """Subtract from column j the rounded best combination of the others.

    The real-valued coefficients come from the normal equations over the
    Gram submatrix without row/column j, solved in floating point (any
    float error below 1/2 disappears in the rounding).  Returns whether
    anything changed; a singular system is skipped with a warning.
    """
    n = basis.n
    others = [i for i in range(n) if i != j]
    g = gram.g
    sub = np.array([[float(g[a][b]) for b in others] for a in others])
    rhs = np.array([float(g[a][j]) for a in others])
    try:
        coeffs = np.linalg.solve(sub, rhs)
    except np.linalg.LinAlgError:
        log.warning("singular normal equations for column %d; step skipped", j)
        return False
    if not np.all(np.isfinite(coeffs)):
        log.warning("non-finite coefficients for column %d; step skipped", j)
        return False
    changed = False
    for idx, k in enumerate(others):
        c = nint_float(float(coeffs[idx]))
        if c:
            apply_column_op(basis, gram, transform, j, k, c)
            changed = True
    return changed


def random_combination_reduce(basis: Basis, config: AltConfig | None = None, *,
                              track_transform: bool = False) -> ReductionResult:
    """Run random_combination_step for a fixed budget of random columns.

    Column norms can go up as well as down; there is no monotonicity here,
    which is exactly why this variant is only a baseline.
    """
    cfg = config if config is not None else AltConfig()
    started = time.perf_counter()
    work = basis.copy()
    gram = gram_compute(work)
    transform = TransformRecord.identity(work.n) if track_transform else None
    before = norm_summary(gram)
    rng = SplitMix64(cfg.seed)
    applied = 0
    for _ in range(cfg.iterations):
        j = rng.below(work.n)
        if random_combination_step(work, gram, j, transform):
            applied += 1
    return ReductionResult(
        basis=work,
        iterations_applied=applied,
        before=before,
        after=norm_summary(gram),
        seconds=time.perf_counter() - started,
        transform=transform,
    )


def mgs_pivot_reduce(basis: Basis, p: float = 2.0, *,
                     track_transform: bool = False) -> ReductionResult:
    """Pivoted Gram-Schmidt with rounded integer projections.

    Each round scores every residual column by the sum of p-th powers of
    the norms the basis would have after projecting the others off it,
    picks the best, orthogonalizes it against the previous pivots in
    floating point, and subtracts the rounded projection onto that
    orthogonalized pivot from every remaining column (as an integer
    multiple of the pivot's basis column).  Squared norms for the scores
    are exact; only the p/2 power is floating.  Columns that are zero or
    dependent on the chosen pivots are skipped.
    """
    if not p > 0:
        raise ValueError("p must be positive")
    started = time.perf_counter()
    work = basis.copy()
    n = work.n
    gram = gram_compute(work)
    transform = TransformRecord.identity(n) if track_transform else None
    before = norm_summary(gram)
    half_p = p / 2.0
    residual = list(range(n))
    pivot_qs: list[np.ndarray] = []
    chosen: list[int] = []
    rounds = 0
    while residual:
        g = gram.g
        best = None
        for r in residual:
            grr = g[r][r]
            if grr == 0:
                continue
            q = np.array(work.cols[r], dtype=float)
            for qprev in pivot_qs:
                q -= (float(q @ qprev) / float(qprev @ qprev)) * qprev
            qq = float(q @ q)
            if qq < RANK_FLOOR * grr:
                continue
            score = sum(float(g[t][t]) ** half_p for t in chosen)
            score += float(grr) ** half_p
            cs = []
            for s in residual:
                if s == r:
                    continue
                c = nint_float(float(np.array(work.cols[s], dtype=float) @ q) / qq)
                cs.append((s, c))
                inner = g[s][s] + c * c * grr - 2 * c * g[s][r]
                if inner < 0:
                    raise ArithmeticError(
                        f"negative squared norm for column {s}: Gram corrupt"
                    )
                score += float(inner) ** half_p
            if best is None or score < best[0]:
                best = (score, r, q, cs)
        if best is None:
            break
        _, r, q, cs = best
        for s, c in cs:
            if c:
                apply_column_op(work, gram, transform, s, r, c)
        residual.remove(r)
        chosen.append(r)
        pivot_qs.append(q)
        rounds += 1
    return ReductionResult(
        basis=work,
        iterations_applied=rounds,
        before=before,
        after=norm_summary(gram),
        seconds=time.perf_counter() - started,
        transform=transform,
    )
