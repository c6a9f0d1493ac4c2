"""Exact action of SL(m) x SL(n) x SL(2) on tensors and polynomials.

Convention, fixed once and used everywhere: on tensor values the pair (P, Q)
sends the slices to P^T X Q and P^T Y Q, and the SL(2) factor
R = [[a, b], [c, d]] sends X to a X + c Y and Y to b X + d Y.  The action on
polynomials is the substitution compatible with this, so that
``evaluate(act_on_polynomial(g, p), t) == evaluate(p, act_on_tensor(g, t))``
holds exactly for every g and t.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Sequence

from .linalg import RatMatrix, SparseEchelon, det_rational
from .pencil import FormatError
from .ring import Polynomial, PolyRing, tensor_ring, tensor_variable

Invariant = Polynomial | Callable[["TensorValues"], Fraction]


@dataclass
class TensorValues:
    """A rational-valued m x n x 2 tensor as its two matrix slices."""

    X: RatMatrix
    Y: RatMatrix

    def __post_init__(self):
        if (self.X.rows, self.X.cols) != (self.Y.rows, self.Y.cols):
            raise FormatError("tensor slices must have equal shape")

    @property
    def m(self) -> int:
        return self.X.rows

    @property
    def n(self) -> int:
        return self.X.cols

    def assignment(self) -> dict[str, Fraction]:
        out: dict[str, Fraction] = {}
        for k, M in ((1, self.X), (2, self.Y)):
            for i in range(self.m):
                for j in range(self.n):
                    out[tensor_variable(i + 1, j + 1, k)] = M[i, j]
        return out

    def __eq__(self, other):
        return (
            isinstance(other, TensorValues) and self.X == other.X and self.Y == other.Y
        )


@dataclass
class GroupElement:
    """A triple (P, Q, R) of exact unit-determinant matrices."""

    P: RatMatrix
    Q: RatMatrix
    R: RatMatrix

    def __post_init__(self):
        for name, M in (("P", self.P), ("Q", self.Q), ("R", self.R)):
            if M.rows != M.cols:
                raise FormatError(f"group factor {name} must be square")
            if det_rational(M) != 1:
                raise FormatError(f"group factor {name} must have determinant 1")
        if self.R.rows != 2:
            raise FormatError("the third factor must be 2x2")

    @classmethod
    def identity(cls, m: int, n: int) -> "GroupElement":
        return cls(RatMatrix.identity(m), RatMatrix.identity(n), RatMatrix.identity(2))


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def _random_small_rational(rng: random.Random) -> Fraction:
    # numerators in [-3, 3], denominators in {1, 2}: keeps exact blow-up small
    return Fraction(rng.randint(-3, 3), rng.choice((1, 2)))


def random_sl(size: int, seed_or_rng: int | random.Random = 0) -> RatMatrix:
    """Deterministic random SL element: a product of 2*size elementary shears."""
    if size < 1:
        raise FormatError("matrix size must be positive")
    rng = (
        seed_or_rng
        if isinstance(seed_or_rng, random.Random)
        else random.Random(seed_or_rng)
    )
    M = RatMatrix.identity(size)
    if size == 1:
        return M
    for _ in range(2 * size):
        i = rng.randrange(size)
        j = rng.randrange(size - 1)
        if j >= i:
            j += 1
        lam = _random_small_rational(rng)
        shear = RatMatrix.identity(size)
        shear.entries[i][j] = lam
        M = M @ shear
    return M


def random_group_element(
    m: int, n: int, rng: random.Random, include_sl2: bool = True
) -> GroupElement:
    P = random_sl(m, rng)
    Q = random_sl(n, rng)
    R = random_sl(2, rng) if include_sl2 else RatMatrix.identity(2)
    return GroupElement(P, Q, R)


def random_tensor(m: int, n: int, rng: random.Random) -> TensorValues:
    def mat():
        return RatMatrix(
            [[_random_small_rational(rng) for _ in range(n)] for _ in range(m)]
        )

    return TensorValues(mat(), mat())


# ---------------------------------------------------------------------------
# the action
# ---------------------------------------------------------------------------


def act_on_tensor(g: GroupElement, t: TensorValues) -> TensorValues:
    if g.P.rows != t.m or g.Q.rows != t.n:
        raise FormatError("group element shape does not match tensor shape")
    Xt = g.P.transpose() @ t.X @ g.Q
    Yt = g.P.transpose() @ t.Y @ g.Q
    a, b = g.R[0, 0], g.R[0, 1]
    c, d = g.R[1, 0], g.R[1, 1]
    return TensorValues(Xt.scale(a) + Yt.scale(c), Xt.scale(b) + Yt.scale(d))


def compose(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """The element acting on tensors as t -> g1 . (g2 . t)."""
    return GroupElement(g2.P @ g1.P, g2.Q @ g1.Q, g2.R @ g1.R)


def transformed_slice_entries(
    g: GroupElement, m: int, n: int, ring: PolyRing
) -> dict[str, Polynomial]:
    """Substitution map T[i,j,k] -> entry of the transformed symbolic slices."""
    if g.P.rows != m or g.Q.rows != n:
        raise FormatError("group element shape does not match format")
    a, b = g.R[0, 0], g.R[0, 1]
    c, d = g.R[1, 0], g.R[1, 1]

    def congruence(k: int, i: int, j: int) -> Polynomial:
        # (P^T X_k Q)_{ij} as a linear form in the T-variables
        acc = ring.zero()
        for r in range(m):
            pr = g.P[r, i]
            if pr == 0:
                continue
            for s in range(n):
                w = pr * g.Q[s, j]
                if w:
                    acc = acc + ring.var(tensor_variable(r + 1, s + 1, k)) * w
        return acc

    mapping: dict[str, Polynomial] = {}
    for i in range(m):
        for j in range(n):
            xt = congruence(1, i, j)
            yt = congruence(2, i, j)
            mapping[tensor_variable(i + 1, j + 1, 1)] = xt * a + yt * c
            mapping[tensor_variable(i + 1, j + 1, 2)] = xt * b + yt * d
    return mapping


def act_on_polynomial(g: GroupElement, p: Polynomial, m: int, n: int) -> Polynomial:
    """Substitute every T-variable of p by its transformed slice entry."""
    mapping = transformed_slice_entries(g, m, n, p.ring)
    for name in p.variables_used():
        mapping.setdefault(name, p.ring.var(name))
    return p.substitute(mapping, target=p.ring)


# ---------------------------------------------------------------------------
# invariance verification
# ---------------------------------------------------------------------------


@dataclass
class Counterexample:
    sample_index: int
    tensor: TensorValues
    element: GroupElement
    value_before: Fraction
    value_after: Fraction


@dataclass
class InvarianceReport:
    passed: bool
    samples: int
    group: str
    counterexample: Counterexample | None = None


def _evaluate_invariant(inv: Invariant, t: TensorValues) -> Fraction:
    if isinstance(inv, Polynomial):
        return inv.evaluate(t.assignment())
    return inv(t)


def check_invariance(
    inv: Invariant,
    m: int,
    n: int,
    group: str = "slslsl",
    samples: int = 25,
    seed: int = 0,
) -> InvarianceReport:
    """Exact sampling check of invariance under the chosen group.

    ``group`` is ``"slsl"`` (SL(m) x SL(n)) or ``"slslsl"`` (with the SL(2)
    factor).  ``inv`` is a polynomial in the T-variables or any callable
    evaluating the invariant at rational tensor values.  Failures are data:
    the report carries the first counterexample.
    """
    if group not in ("slsl", "slslsl"):
        raise FormatError(f"unknown group {group!r}")
    include_sl2 = group == "slslsl"
    for idx in range(samples):
        rng = random.Random(f"{seed}:{idx}")
        t = random_tensor(m, n, rng)
        g = random_group_element(m, n, rng, include_sl2=include_sl2)
        before = _evaluate_invariant(inv, t)
        after = _evaluate_invariant(inv, act_on_tensor(g, t))
        if before != after:
            return InvarianceReport(
                False, samples, group, Counterexample(idx, t, g, before, after)
            )
    return InvarianceReport(True, samples, group)


# ---------------------------------------------------------------------------
# Lie-algebra invariance on a graded piece (characteristic 0 device)
# ---------------------------------------------------------------------------

LIE_PARTS = ("sl_m", "sl_n", "sl_2")
MAX_GRADED_BASIS = 50_000


def _variable_derivations(m: int, n: int, part: str) -> list[dict[int, list[tuple[int, Fraction]]]]:
    """Standard generator derivations as sparse linear maps on the variables.

    Each derivation maps variable index -> list of (image variable index,
    coefficient).  Off-diagonal elementary matrices plus the diagonal
    traceless generators of each factor.
    """
    ring = tensor_ring(m, n)

    def vid(i: int, j: int, k: int) -> int:
        return ring.index[tensor_variable(i, j, k)]

    gens: list[dict[int, list[tuple[int, Fraction]]]] = []
    one = Fraction(1)
    if part == "sl_m":
        for a in range(1, m + 1):
            for b in range(1, m + 1):
                if a == b:
                    continue
                # P = I + eps*E_ab acts via P^T: row b gains row a
                gens.append(
                    {
                        vid(b, j, k): [(vid(a, j, k), one)]
                        for j in range(1, n + 1)
                        for k in (1, 2)
                    }
                )
        for a in range(1, m):
            d: dict[int, list[tuple[int, Fraction]]] = {}
            for j in range(1, n + 1):
                for k in (1, 2):
                    d[vid(a, j, k)] = [(vid(a, j, k), one)]
                    d[vid(a + 1, j, k)] = [(vid(a + 1, j, k), -one)]
            gens.append(d)
    elif part == "sl_n":
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                if a == b:
                    continue
                # Q = I + eps*E_ab: column b gains column a
                gens.append(
                    {
                        vid(i, b, k): [(vid(i, a, k), one)]
                        for i in range(1, m + 1)
                        for k in (1, 2)
                    }
                )
        for a in range(1, n):
            d = {}
            for i in range(1, m + 1):
                for k in (1, 2):
                    d[vid(i, a, k)] = [(vid(i, a, k), one)]
                    d[vid(i, a + 1, k)] = [(vid(i, a + 1, k), -one)]
            gens.append(d)
    elif part == "sl_2":
        raise_op = {
            vid(i, j, 2): [(vid(i, j, 1), one)]
            for i in range(1, m + 1)
            for j in range(1, n + 1)
        }
        lower_op = {
            vid(i, j, 1): [(vid(i, j, 2), one)]
            for i in range(1, m + 1)
            for j in range(1, n + 1)
        }
        diag = {}
        for i in range(1, m + 1):
            for j in range(1, n + 1):
                diag[vid(i, j, 1)] = [(vid(i, j, 1), one)]
                diag[vid(i, j, 2)] = [(vid(i, j, 2), -one)]
        gens.extend([raise_op, lower_op, diag])
    else:
        raise FormatError(f"unknown Lie part {part!r}")
    return gens


def lie_invariant_space(
    m: int,
    n: int,
    degree: int,
    parts: Iterable[str] = LIE_PARTS,
    max_basis: int = MAX_GRADED_BASIS,
) -> list[Polynomial]:
    """Exact basis of the joint derivation kernel on the degree-d piece.

    Valid in characteristic 0 only: a polynomial is group-invariant for a
    factor iff it is killed by that factor's generator derivations.
    """
    parts = tuple(parts)
    for p in parts:
        if p not in LIE_PARTS:
            raise FormatError(f"unknown Lie part {p!r}")
    if not parts:
        raise FormatError("at least one Lie part is required")
    if degree < 0:
        raise FormatError("degree must be non-negative")
    ring = tensor_ring(m, n)
    nv = ring.nvars
    basis: list[tuple[int, ...]] = []
    for combo in combinations_with_replacement(range(nv), degree):
        exps = [0] * nv
        for i in combo:
            exps[i] += 1
        basis.append(tuple(exps))
    if len(basis) > max_basis:
        raise FormatError(
            f"graded basis of size {len(basis)} exceeds the guard ({max_basis})"
        )
    col_of = {mon: c for c, mon in enumerate(basis)}
    ncols = len(basis)
    echelon = SparseEchelon()
    done = False
    for part in parts:
        if done:
            break
        for deriv in _variable_derivations(m, n, part):
            # rows indexed by image monomials; columns by basis monomials
            rows: dict[tuple[int, ...], dict[int, Fraction]] = {}
            for col, mon in enumerate(basis):
                for vi, e in enumerate(mon):
                    if e == 0 or vi not in deriv:
                        continue
                    for wi, coef in deriv[vi]:
                        img = list(mon)
                        img[vi] -= 1
                        img[wi] += 1
                        key = tuple(img)
                        row = rows.setdefault(key, {})
                        row[col] = row.get(col, Fraction(0)) + coef * e
            for row in rows.values():
                if echelon.add_row(row) and echelon.rank == ncols:
                    done = True
                    break
            if done:
                break
    kernel = echelon.kernel_basis(ncols)
    polys = []
    for vec in kernel:
        polys.append(
            ring.from_terms({basis[c]: v for c, v in enumerate(vec) if v != 0})
        )
    return polys
