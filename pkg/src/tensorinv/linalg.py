"""Exact matrices: polynomial entries, rational entries, determinants, kernels.

Two determinant routes are kept deliberately separate.  Symbolic determinants
use a column-subset dynamic program over rows, which shares the repeated
sub-minors of structured block matrices; rational determinants use
fraction-free Bareiss elimination.  Kernel and rank computations are exact
Gauss-Jordan over ``Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .ring import Polynomial, PolyRing, RingError, _as_fraction


class MatrixError(ValueError):
    pass


class SymMatrix:
    """Rectangular matrix of polynomials over one ring; 0-based indices."""

    def __init__(self, ring: PolyRing, entries: Sequence[Sequence[Polynomial]]):
        self.ring = ring
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        for row in self.entries:
            if len(row) != self.cols:
                raise MatrixError("ragged symbolic matrix")
            for p in row:
                if p.ring != ring:
                    raise RingError("matrix entry from a different ring")

    def __getitem__(self, idx: tuple[int, int]) -> Polynomial:
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise MatrixError(f"index {idx} out of range for {self.rows}x{self.cols}")
        return self.entries[i][j]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def submatrix(self, row_set: Sequence[int], col_set: Sequence[int]) -> "SymMatrix":
        return SymMatrix(
            self.ring, [[self[i, j] for j in col_set] for i in row_set]
        )

    def transpose(self) -> "SymMatrix":
        return SymMatrix(
            self.ring,
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
        )


class RatMatrix:
    """Rectangular matrix of exact rationals; 0-based indices."""

    def __init__(self, entries: Sequence[Sequence[Fraction | int | str]]):
        self.entries = [[_as_fraction(x) for x in row] for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        for row in self.entries:
            if len(row) != self.cols:
                raise MatrixError("ragged rational matrix")

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls([[0] * cols for _ in range(rows)])

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        return self.entries[idx[0]][idx[1]]

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self.entries == other.entries

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise MatrixError("shape mismatch in matrix product")
        return RatMatrix(
            [
                [
                    sum(
                        (self.entries[i][k] * other.entries[k][j] for k in range(self.cols)),
                        Fraction(0),
                    )
                    for j in range(other.cols)
                ]
                for i in range(self.rows)
            ]
        )

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise MatrixError("shape mismatch in matrix sum")
        return RatMatrix(
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def scale(self, c) -> "RatMatrix":
        c = _as_fraction(c)
        return RatMatrix([[c * x for x in row] for row in self.entries])

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def __repr__(self):
        return f"RatMatrix({self.entries!r})"


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------


def minor(M: SymMatrix, row_set: Sequence[int], col_set: Sequence[int]) -> Polynomial:
    """Determinant of the square submatrix selected by the index sets.

    Index sets must be strictly increasing and of equal positive size.
    """
    rows, cols = list(row_set), list(col_set)
    if len(rows) != len(cols) or not rows:
        raise MatrixError("minor selection must be square and non-empty")
    if rows != sorted(set(rows)) or cols != sorted(set(cols)):
        raise MatrixError("minor index sets must be strictly increasing")
    return det_symbolic(M.submatrix(rows, cols))


def det_symbolic(M: SymMatrix) -> Polynomial:
    """Exact determinant by column-subset dynamic programming over rows.

    Level r holds, for each r-subset S of columns (as a bitmask), the
    determinant of rows 0..r-1 against columns S.  Zero entries are skipped,
    so block matrices with many empty blocks stay cheap.
    """
    if not M.is_square():
        raise MatrixError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return M.ring.one()
    level: dict[int, Polynomial] = {0: M.ring.one()}
    for r in range(n):
        nxt: dict[int, Polynomial] = {}
        row = M.entries[r]
        for mask, val in level.items():
            for c in range(n):
                bit = 1 << c
                if mask & bit:
                    continue
                entry = row[c]
                if entry.is_zero():
                    continue
                sign = -1 if (mask >> (c + 1)).bit_count() & 1 else 1
                contrib = entry * val
                if sign < 0:
                    contrib = -contrib
                new_mask = mask | bit
                acc = nxt.get(new_mask)
                nxt[new_mask] = contrib if acc is None else acc + contrib
        level = {mask: p for mask, p in nxt.items() if not p.is_zero()}
        if not level:
            return M.ring.zero()
    return level.get((1 << n) - 1, M.ring.zero())


def det_cofactor(M: SymMatrix) -> Polynomial:
    """Plain Laplace expansion along the first row (test oracle)."""
    if not M.is_square():
        raise MatrixError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return M.ring.one()
    if n == 1:
        return M.entries[0][0]
    total = M.ring.zero()
    for c in range(n):
        entry = M.entries[0][c]
        if entry.is_zero():
            continue
        sub = M.submatrix(range(1, n), [j for j in range(n) if j != c])
        term = entry * det_cofactor(sub)
        total = total + (term if c % 2 == 0 else -term)
    return total


def det_rational(M: RatMatrix) -> Fraction:
    """Exact determinant via fraction-free (Bareiss) elimination.

    Rows are first scaled to integers; the accumulated scale is divided out
    of the integer Bareiss result.
    """
    if M.rows != M.cols:
        raise MatrixError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return Fraction(1)
    scale = 1
    a: list[list[int]] = []
    for row in M.entries:
        lcm = 1
        for x in row:
            d = x.denominator
            lcm = lcm * d // _gcd(lcm, d)
        scale *= lcm
        a.append([int(x * lcm) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], scale)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a if a >= 0 else -a


# ---------------------------------------------------------------------------
# exact kernel / rank
# ---------------------------------------------------------------------------


def _height(x: Fraction) -> int:
    return max(abs(x.numerator), x.denominator)


def rref(M: RatMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices).

    Within each column the pivot of smallest height is chosen (ties by row
    index) to keep coefficient growth down; the result is deterministic.
    """
    a = [list(row) for row in M.entries]
    rows, cols = M.rows, M.cols
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        best = None
        for i in range(r, rows):
            if a[i][c] != 0:
                h = _height(a[i][c])
                if best is None or h < best[0]:
                    best = (h, i)
        if best is None:
            continue
        i = best[1]
        a[r], a[i] = a[i], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(M: RatMatrix) -> int:
    return len(rref(M)[1])


def kernel_basis(M: RatMatrix) -> list[list[Fraction]]:
    """Exact basis of the right null space; dimension = cols - rank."""
    a, pivots = rref(M)
    cols = M.cols
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis: list[list[Fraction]] = []
    for f in free:
        vec = [Fraction(0)] * cols
        vec[f] = Fraction(1)
        for r, p in enumerate(pivots):
            vec[p] = -a[r][f]
        basis.append(vec)
    return basis


def solve_linear(M: RatMatrix, rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve M x = rhs exactly for square invertible M."""
    if M.rows != M.cols:
        raise MatrixError("solve requires a square matrix")
    aug = RatMatrix(
        [list(row) + [rhs[i]] for i, row in enumerate(M.entries)]
    )
    a, pivots = rref(aug)
    if pivots != list(range(M.cols)):
        raise MatrixError("matrix is singular")
    return [a[i][M.cols] for i in range(M.cols)]


class SparseEchelon:
    """Incremental reduced echelon form over Q with sparse rows.

    Rows are dicts mapping column index to a nonzero ``Fraction``.  The
    structure stays fully reduced, so kernel extraction is direct.
    """

    def __init__(self):
        self.rows: dict[int, dict[int, Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def add_row(self, row: dict[int, Fraction]) -> bool:
        """Insert one equation row; returns True if the rank increased."""
        row = {c: v for c, v in row.items() if v != 0}
        # eliminate every stored pivot column; stored rows are reduced, so
        # each subtraction introduces only free columns
        while True:
            hits = [c for c in row if c in self.rows]
            if not hits:
                break
            for p in hits:
                f = row.pop(p)
                for c, v in self.rows[p].items():
                    if c == p:
                        continue
                    s = row.get(c, Fraction(0)) - f * v
                    if s:
                        row[c] = s
                    else:
                        row.pop(c, None)
        if not row:
            return False
        p = min(row)
        piv = row[p]
        row = {c: v / piv for c, v in row.items()}
        # back-eliminate the new pivot from stored rows
        for stored in self.rows.values():
            f = stored.get(p)
            if f is not None:
                for c, v in row.items():
                    s = stored.get(c, Fraction(0)) - f * v
                    if s:
                        stored[c] = s
                    else:
                        stored.pop(c, None)
        self.rows[p] = row
        return True

    def kernel_basis(self, ncols: int) -> list[list[Fraction]]:
        free = [c for c in range(ncols) if c not in self.rows]
        basis = []
        for f in free:
            vec = [Fraction(0)] * ncols
            vec[f] = Fraction(1)
            for p, row in self.rows.items():
                coef = row.get(f)
                if coef is not None:
                    vec[p] = -coef
            basis.append(vec)
        return basis
