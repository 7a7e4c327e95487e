"""Exact integer primitives shared by every reducer.

Basis vectors, Gram matrices, and accumulated column transforms are stored
as plain Python integers so that all norm bookkeeping is exact.  Values are
required to stay inside the signed 128-bit range; crossing it raises
OverflowError rather than silently widening, since for the intended inputs
a wider value always indicates a bug.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INT128_MAX = (1 << 127) - 1
INT128_MIN = -(1 << 127)


class MatFormatError(ValueError):
    """Raised when a ``.mat`` file is ill-formed or out of range."""


def _check_entries(rows) -> None:
    for row in rows:
        for x in row:
            if not isinstance(x, int):
                raise TypeError(f"matrix entries must be int, got {type(x).__name__}")


class Basis:
    """Integer basis stored column-major: ``cols[j]`` is basis vector j.

    Columns are allowed to be linearly dependent (and even zero); reducers
    that cannot handle that reject it themselves.
    """

    __slots__ = ("m", "cols")

    def __init__(self, cols):
        if not cols or not cols[0]:
            raise ValueError("basis needs at least one row and one column")
        m = len(cols[0])
        for col in cols:
            if len(col) != m:
                raise ValueError("basis columns must all have the same length")
        _check_entries(cols)
        self.m = m
        self.cols = [list(col) for col in cols]

    @classmethod
    def from_rows(cls, rows) -> "Basis":
        if not rows or not rows[0]:
            raise ValueError("basis needs at least one row and one column")
        return cls([[row[j] for row in rows] for j in range(len(rows[0]))])

    @classmethod
    def identity(cls, n: int) -> "Basis":
        return cls([[int(i == j) for i in range(n)] for j in range(n)])

    @property
    def n(self) -> int:
        return len(self.cols)

    def col(self, j: int) -> list[int]:
        return self.cols[j]

    def to_rows(self) -> list[list[int]]:
        return [[col[r] for col in self.cols] for r in range(self.m)]

    def copy(self) -> "Basis":
        dup = object.__new__(Basis)
        dup.m = self.m
        dup.cols = [list(col) for col in self.cols]
        return dup

    def swap_columns(self, j: int, k: int) -> None:
        self.cols[j], self.cols[k] = self.cols[k], self.cols[j]

    def __eq__(self, other):
        return isinstance(other, Basis) and self.cols == other.cols

    def __repr__(self):
        return f"Basis(m={self.m}, n={self.n})"


class GramMatrix:
    """Symmetric matrix of exact pairwise inner products, ``g[j][k]``."""

    __slots__ = ("g",)

    def __init__(self, g):
        n = len(g)
        for row in g:
            if len(row) != n:
                raise ValueError("Gram matrix must be square")
        _check_entries(g)
        for j in range(n):
            if g[j][j] < 0:
                raise ValueError(f"negative Gram diagonal at {j}")
            for k in range(j):
                if g[j][k] != g[k][j]:
                    raise ValueError(f"Gram matrix not symmetric at ({j},{k})")
        self.g = [list(row) for row in g]

    @property
    def n(self) -> int:
        return len(self.g)

    def diagonal(self) -> list[int]:
        return [self.g[k][k] for k in range(self.n)]

    def copy(self) -> "GramMatrix":
        dup = object.__new__(GramMatrix)
        dup.g = [list(row) for row in self.g]
        return dup

    def __eq__(self, other):
        return isinstance(other, GramMatrix) and self.g == other.g

    def __repr__(self):
        return f"GramMatrix(n={self.n})"


class TransformRecord:
    """Accumulated column operations U, so original_basis . U = current basis.

    Every operation applied to it is elementary (unit determinant), so U
    stays unimodular and the lattice generated by the columns is preserved.
    """

    __slots__ = ("cols",)

    def __init__(self, cols):
        n = len(cols)
        for col in cols:
            if len(col) != n:
                raise ValueError("transform must be square")
        _check_entries(cols)
        self.cols = [list(col) for col in cols]

    @classmethod
    def identity(cls, n: int) -> "TransformRecord":
        return cls([[int(i == j) for i in range(n)] for j in range(n)])

    @property
    def n(self) -> int:
        return len(self.cols)

    def to_rows(self) -> list[list[int]]:
        return [[col[r] for col in self.cols] for r in range(self.n)]

    def copy(self) -> "TransformRecord":
        return TransformRecord(self.cols)

    def swap_columns(self, j: int, k: int) -> None:
        self.cols[j], self.cols[k] = self.cols[k], self.cols[j]

    def __eq__(self, other):
        return isinstance(other, TransformRecord) and self.cols == other.cols


@dataclass(frozen=True)
class NormSummary:
    """The two reported size metrics, kept as exact squared integers.

    frobenius_sq is the sum of all squared entries (the trace of the Gram
    matrix); min_norm_sq is the smallest squared norm over nonzero columns,
    or 0 when every column is zero.
    """

    frobenius_sq: int
    min_norm_sq: int


def gram_compute(basis: Basis) -> GramMatrix:
    """Exact Gram matrix of the basis columns.

    Only the upper triangle is computed; the rest is mirrored from symmetry.
    """
    cols = basis.cols
    n = len(cols)
    g = [[0] * n for _ in range(n)]
    for k in range(n):
        ak = cols[k]
        for j in range(k + 1):
            s = 0
            for x, y in zip(cols[j], ak):
                s += x * y
            if s > INT128_MAX or s < INT128_MIN:
                raise OverflowError(
                    f"Gram entry ({j},{k}) exceeds the signed 128-bit range"
                )
            g[j][k] = s
            g[k][j] = s
    out = object.__new__(GramMatrix)
    out.g = g
    return out


def column_norms_sq(basis: Basis) -> list[int]:
    """Exact squared norm of every column (the Gram diagonal, cheaper)."""
    out = []
    for col in basis.cols:
        s = 0
        for x in col:
            s += x * x
        if s > INT128_MAX:
            raise OverflowError("column norm exceeds the signed 128-bit range")
        out.append(s)
    return out


def nint_ratio(num: int, den: int) -> int:
    """Integer nearest to num/den, computed without floating point.

    den must be positive.  Exact halves round away from zero, so
    nint_ratio(7, 2) == 4 and nint_ratio(-7, 2) == -4.  This is the one
    rounding convention used throughout the package.
    """
    if den <= 0:
        raise ValueError(f"denominator must be positive, got {den}")
    if num >= 0:
        return (2 * num + den) // (2 * den)
    return -((-2 * num + den) // (2 * den))


def nint_float(x: float) -> int:
    """Nearest integer for floats, halves away from zero (matches nint_ratio)."""
    if x >= 0.0:
        return math.floor(x + 0.5)
    return math.ceil(x - 0.5)


def norm_summary(gram: GramMatrix) -> NormSummary:
    """Frobenius-squared and minimum nonzero squared column norm."""
    diag = gram.diagonal()
    nonzero = [d for d in diag if d > 0]
    return NormSummary(sum(diag), min(nonzero) if nonzero else 0)


def summarize_columns(basis: Basis) -> NormSummary:
    """norm_summary without materializing the full Gram matrix."""
    norms = column_norms_sq(basis)
    nonzero = [d for d in norms if d > 0]
    return NormSummary(sum(norms), min(nonzero) if nonzero else 0)


def apply_column_op(basis, gram, transform, j: int, k: int, c: int) -> None:
    """Elementary column operation: column j -= c * column k.

    The Gram matrix and transform record, when given, are updated exactly
    alongside the basis; pass None to skip either.  The operation has unit
    determinant, so tracked transforms stay unimodular.
    """
    if j == k:
        raise ValueError("column indices must differ")
    if c == 0:
        return
    cj = basis.cols[j]
    ck = basis.cols[k]
    for r in range(basis.m):
        v = cj[r] - c * ck[r]
        if v > INT128_MAX or v < INT128_MIN:
            raise OverflowError(
                f"basis entry ({r},{j}) exceeds the signed 128-bit range"
            )
        cj[r] = v
    if gram is not None:
        g = gram.g
        gj = g[j]
        gk = g[k]
        # New diagonal uses pre-update cross terms; compute before mutating.
        new_jj = gj[j] - 2 * c * gk[j] + c * c * gk[k]
        for i in range(len(g)):
            if i == j:
                continue
            v = gj[i] - c * gk[i]
            if v > INT128_MAX or v < INT128_MIN:
                raise OverflowError(
                    f"Gram entry ({j},{i}) exceeds the signed 128-bit range"
                )
            gj[i] = v
            g[i][j] = v
        if new_jj > INT128_MAX or new_jj < INT128_MIN:
            raise OverflowError(
                f"Gram entry ({j},{j}) exceeds the signed 128-bit range"
            )
        gj[j] = new_jj
    if transform is not None:
        uj = transform.cols[j]
        uk = transform.cols[k]
        for r in range(transform.n):
            uj[r] -= c * uk[r]


def apply_transform(basis: Basis, transform: TransformRecord) -> Basis:
    """Exact product basis . transform, for verifying tracked reductions."""
    if transform.n != basis.n:
        raise ValueError("transform dimension does not match basis")
    cols = []
    for ucol in transform.cols:
        col = [0] * basis.m
        for i, u in enumerate(ucol):
            if u == 0:
                continue
            ai = basis.cols[i]
            for r in range(basis.m):
                col[r] += u * ai[r]
        cols.append(col)
    return Basis(cols)


def det_small(rows: list[list[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination, n <= 16."""
    n = len(rows)
    if n > 16:
        raise ValueError("det_small is limited to n <= 16")
    for row in rows:
        if len(row) != n:
            raise ValueError("matrix must be square")
    a = [list(row) for row in rows]
    sign = 1
    prev = 1
    for i in range(n - 1):
        piv = next((r for r in range(i, n) if a[r][i] != 0), None)
        if piv is None:
            return 0
        if piv != i:
            a[i], a[piv] = a[piv], a[i]
            sign = -sign
        irow = a[i]
        for r in range(i + 1, n):
            arow = a[r]
            ari = arow[i]
            for c in range(i + 1, n):
                arow[c] = (arow[c] * irow[i] - ari * irow[c]) // prev
            arow[i] = 0
        prev = irow[i]
    return sign * a[n - 1][n - 1]


def det_sign_small(rows: list[list[int]]) -> int:
    """Sign of the exact determinant: -1, 0, or +1.  Test support, n <= 16."""
    d = det_small(rows)
    return (d > 0) - (d < 0)


def is_unimodular(transform: TransformRecord) -> bool:
    """Exact |det| == 1 check for tracked transforms, n <= 16."""
    return abs(det_small(transform.to_rows())) == 1


def write_mat(basis: Basis, path) -> None:
    """Write the text matrix format: ``m n`` header then m row lines."""
    rows = basis.to_rows()
    lines = [f"{basis.m} {basis.n}"]
    lines.extend(" ".join(str(x) for x in row) for row in rows)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_mat(path) -> Basis:
    """Read the text matrix format written by write_mat.

    Entries beyond the signed 128-bit range are rejected.
    """
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read()
    tokens_by_line = [line.split() for line in text.splitlines() if line.strip()]
    if not tokens_by_line:
        raise MatFormatError(f"{path}: empty matrix file")
    header = tokens_by_line[0]
    if len(header) != 2:
        raise MatFormatError(f"{path}: header must be 'm n'")
    try:
        m, n = int(header[0]), int(header[1])
    except ValueError as exc:
        raise MatFormatError(f"{path}: non-integer header") from exc
    if m < 1 or n < 1:
        raise MatFormatError(f"{path}: dimensions must be positive, got {m} {n}")
    body = tokens_by_line[1:]
    if len(body) != m:
        raise MatFormatError(f"{path}: expected {m} rows, found {len(body)}")
    rows = []
    for r, line in enumerate(body):
        if len(line) != n:
            raise MatFormatError(
                f"{path}: row {r} has {len(line)} entries, expected {n}"
            )
        row = []
        for token in line:
            try:
                x = int(token)
            except ValueError as exc:
                raise MatFormatError(f"{path}: bad integer {token!r} in row {r}") from exc
            if x > INT128_MAX or x < INT128_MIN:
                raise MatFormatError(
                    f"{path}: entry in row {r} exceeds the signed 128-bit range"
                )
            row.append(x)
        rows.append(row)
    return Basis.from_rows(rows)
