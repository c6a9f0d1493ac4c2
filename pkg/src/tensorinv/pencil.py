"""The m x n x 2 indeterminate tensor and its determinantal invariants.

For m = n the pencil determinant det(xX + yY) splits into bihomogeneous
coefficients computed by two independent routes (column-subset expansion and
Vandermonde interpolation).  For m < n with n = m + gcd(m, n) the single
generator of the invariant ring is the determinant of a block-bidiagonal
matrix with X on the diagonal chain and Y below it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd

from .linalg import RatMatrix, SymMatrix, det_symbolic, solve_linear
from .ring import Monomial, Polynomial, PolyRing, tensor_ring, tensor_variable


class FormatError(ValueError):
    """Invalid (m, n) format for the requested operation."""


class TrivialInvariantRing(FormatError):
    """The invariant ring for this format is just the ground field."""


class IndeterminateTensor:
    """The symbol grid T[i,j,k] (1-based indices) with matrix slices X, Y."""

    def __init__(self, m: int, n: int, ring: PolyRing | None = None):
        if m < 1 or n < 1:
            raise FormatError("tensor dimensions must be positive")
        self.m = m
        self.n = n
        self.ring = ring if ring is not None else tensor_ring(m, n)
        for k in (1, 2):
            for i in range(1, m + 1):
                for j in range(1, n + 1):
                    if tensor_variable(i, j, k) not in self.ring.index:
                        raise FormatError("ring does not contain the T-variable grid")

    def var(self, i: int, j: int, k: int) -> Polynomial:
        if not (1 <= i <= self.m and 1 <= j <= self.n and k in (1, 2)):
            raise FormatError(f"tensor index ({i},{j},{k}) out of range")
        return self.ring.var(tensor_variable(i, j, k))

    def slice(self, k: int) -> SymMatrix:
        return SymMatrix(
            self.ring,
            [[self.var(i, j, k) for j in range(1, self.n + 1)] for i in range(1, self.m + 1)],
        )

    @property
    def X(self) -> SymMatrix:
        return self.slice(1)

    @property
    def Y(self) -> SymMatrix:
        return self.slice(2)


@dataclass
class PencilInvariants:
    """The ordered coefficient tuple (f_{0,n}, ..., f_{n,0}) of det(xX+yY).

    ``coeffs[k]`` is the coefficient of x^k y^(n-k), homogeneous of degree k
    in the first slice and n-k in the second.
    """

    n: int
    coeffs: list[Polynomial]
    _product_cache: dict[tuple[int, ...], Polynomial] = field(
        default_factory=dict, repr=False, compare=False
    )

    def __post_init__(self):
        if len(self.coeffs) != self.n + 1:
            raise FormatError("pencil invariant tuple has wrong length")

    @property
    def ring(self) -> PolyRing:
        return self.coeffs[0].ring

    def __getitem__(self, k: int) -> Polynomial:
        return self.coeffs[k]

    def generator_product(self, powers: tuple[int, ...]) -> Polynomial:
        """Cached expansion of prod_k f_{k,n-k}^powers[k]."""
        if len(powers) != self.n + 1:
            raise FormatError("power vector has wrong length")
        cached = self._product_cache.get(powers)
        if cached is None:
            cached = self.ring.one()
            for k, e in enumerate(powers):
                if e:
                    cached = cached * self._power(k, e)
            self._product_cache[powers] = cached
        return cached

    def _power(self, k: int, e: int) -> Polynomial:
        key = tuple(e if i == k else -1 for i in range(self.n + 1))
        cached = self._product_cache.get(key)
        if cached is None:
            cached = self.coeffs[k] ** e
            self._product_cache[key] = cached
        return cached


def pencil_coefficients_subset(t: IndeterminateTensor) -> PencilInvariants:
    """Pencil coefficients via the column-subset determinant expansion.

    f_{k,n-k} is the sum, over k-subsets S of columns, of the determinant
    whose j-th column is taken from X when j is in S and from Y otherwise.
    """
    if t.m != t.n:
        raise FormatError("pencil coefficients require a square format (m = n)")
    n = t.n
    X, Y = t.X, t.Y
    coeffs: list[Polynomial] = []
    for k in range(n + 1):
        total = t.ring.zero()
        for subset in combinations(range(n), k):
            chosen = set(subset)
            cols = [
                [(X if j in chosen else Y)[i, j] for j in range(n)]
                for i in range(n)
            ]
            total = total + det_symbolic(SymMatrix(t.ring, cols))
        coeffs.append(total)
    return PencilInvariants(n, coeffs)


def pencil_coefficients_interp(t: IndeterminateTensor) -> PencilInvariants:
    """Pencil coefficients by exact interpolation of det(cX + Y).

    det(cX + Y) = sum_k c^k f_{k,n-k}; evaluating at c = 0..n and solving
    the integer Vandermonde system recovers every coefficient exactly.
    """
    if t.m != t.n:
        raise FormatError("pencil coefficients require a square format (m = n)")
    n = t.n
    X, Y = t.X, t.Y
    dets: list[Polynomial] = []
    for c in range(n + 1):
        M = SymMatrix(
            t.ring,
            [[X[i, j] * c + Y[i, j] for j in range(n)] for i in range(n)],
        )
        dets.append(det_symbolic(M))
    vandermonde = RatMatrix([[Fraction(c) ** k for k in range(n + 1)] for c in range(n + 1)])
    # invert column by column: coeffs = V^{-1} . dets, applied to polynomials
    coeffs: list[Polynomial] = []
    for k in range(n + 1):
        unit = [Fraction(1) if i == k else Fraction(0) for i in range(n + 1)]
        weights = solve_linear(vandermonde.transpose(), unit)
        acc = t.ring.zero()
        for c, w in enumerate(weights):
            if w:
                acc = acc + dets[c] * w
        coeffs.append(acc)
    return PencilInvariants(n, coeffs)


# ---------------------------------------------------------------------------
# the block determinant generator for m < n
# ---------------------------------------------------------------------------


def validate_block_format(m: int, n: int) -> int:
    """Check the m < n trichotomy; returns d = gcd(m, n) when a generator exists."""
    if m >= n:
        raise FormatError("block determinant requires m < n")
    d = gcd(m, n)
    if n > 2 * m:
        raise TrivialInvariantRing(
            f"invariant ring is K for format {m}x{n}x2 (n > 2m)"
        )
    if n != m + d:
        raise TrivialInvariantRing(
            f"no nontrivial invariant exists in format {m}x{n}x2 (n != m + gcd(m, n))"
        )
    return d


def block_matrix_from_slices(m: int, n: int, X: SymMatrix, Y: SymMatrix) -> SymMatrix:
    """The (mn/d) x (mn/d) block-bidiagonal arrangement of the two slices.

    m/d column blocks of width n; n/d row blocks of height m; block (r, c)
    holds X when r = c and Y when r = c + 1.
    """
    d = validate_block_format(m, n)
    size = m * n // d
    ring = X.ring
    zero = ring.zero()
    entries = [[zero] * size for _ in range(size)]
    for R in range(size):
        r, rin = divmod(R, m)
        for C in range(size):
            c, cin = divmod(C, n)
            if r == c:
                entries[R][C] = X[rin, cin]
            elif r == c + 1:
                entries[R][C] = Y[rin, cin]
    return SymMatrix(ring, entries)


def block_matrix(m: int, n: int) -> SymMatrix:
    t = IndeterminateTensor(m, n)
    return block_matrix_from_slices(m, n, t.X, t.Y)


def block_det(m: int, n: int) -> Polynomial:
    """The generator of the invariant ring for m < n = m + gcd(m, n).

    Sign convention: X blocks sit on the main diagonal chain and Y blocks
    directly below, exactly in that row-block order.
    """
    return det_symbolic(block_matrix(m, n))


def block_det_leading_monomial(m: int, n: int) -> Monomial:
    """The expected leading monomial of the block determinant.

    Built from the diagonal products of the block structure: the t-th
    diagonal run of X-variables appears with exponent s - t and the t-th
    antidiagonal run of Y-variables with exponent t + 1, where s = m/d.
    """
    d = validate_block_format(m, n)
    s = m // d
    ring = tensor_ring(m, n)
    exps = [0] * ring.nvars
    for t in range(s):
        for i in range(t * d + 1, (t + 1) * d + 1):
            exps[ring.index[tensor_variable(i, i, 1)]] += s - t
            exps[ring.index[tensor_variable(i, i + d, 2)]] += t + 1
    return Monomial(ring, tuple(exps))


def leading_monomial_support_check(f: Polynomial, m: int, n: int) -> bool:
    """True iff supp(lm(f)) lies in the diagonal/antidiagonal variable set.

    The admissible set is {T[i,i,1] : i <= m} together with
    {T[i, n-m+i, 2] : 1 <= i <= m}.
    """
    if f.is_zero():
        raise FormatError("support check of the zero polynomial")
    allowed = {tensor_variable(i, i, 1) for i in range(1, min(m, n) + 1)}
    allowed |= {tensor_variable(i, n - m + i, 2) for i in range(1, m + 1)}
    return f.leading_monomial().support() <= allowed


def expected_pencil_leading_monomial(n: int, k: int, ring: PolyRing | None = None) -> Monomial:
    """lm(f_{k,n-k}) = T[1,1,1]...T[k,k,1] * T[k+1,k+1,2]...T[n,n,2]."""
    if ring is None:
        ring = tensor_ring(n, n)
    exps = [0] * ring.nvars
    for i in range(1, k + 1):
        exps[ring.index[tensor_variable(i, i, 1)]] += 1
    for i in range(k + 1, n + 1):
        exps[ring.index[tensor_variable(i, i, 2)]] += 1
    return Monomial(ring, tuple(exps))
