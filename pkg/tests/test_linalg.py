"""Exact matrices: determinants (two routes), minors, kernels, rank."""

import random
from fractions import Fraction

import pytest

from tensorinv.linalg import (
    MatrixError,
    RatMatrix,
    SparseEchelon,
    SymMatrix,
    det_cofactor,
    det_rational,
    det_symbolic,
    kernel_basis,
    minor,
    rank,
    rref,
    solve_linear,
)
from tensorinv.ring import PolyRing


def sym_from_names(ring, names):
    return SymMatrix(ring, [[ring.var(v) for v in row] for row in names])


def test_det_2x2_symbolic():
    r = PolyRing(["a", "b", "c", "d"])
    M = sym_from_names(r, [["a", "b"], ["c", "d"]])
    assert det_symbolic(M) == r.var("a") * r.var("d") - r.var("b") * r.var("c")


def test_det_symbolic_matches_cofactor_on_random_matrices():
    rng = random.Random(7)
    r = PolyRing([f"v{i}" for i in range(16)])
    for size in (2, 3, 4):
        entries = []
        for i in range(size):
            row = []
            for j in range(size):
                # mix of variables, constants and zeros
                roll = rng.random()
                if roll < 0.25:
                    row.append(r.zero())
                elif roll < 0.5:
                    row.append(r.const(Fraction(rng.randint(-4, 4), rng.choice((1, 3)))))
                else:
                    row.append(r.var(f"v{rng.randrange(16)}") * rng.randint(1, 3))
            entries.append(row)
        M = SymMatrix(r, entries)
        assert det_symbolic(M) == det_cofactor(M)


def test_det_symbolic_rejects_non_square():
    r = PolyRing(["a", "b"])
    M = SymMatrix(r, [[r.var("a"), r.var("b")]])
    with pytest.raises(MatrixError):
        det_symbolic(M)


def test_det_alternating_under_row_swap():
    r = PolyRing(["a", "b", "c", "d", "e", "f"])
    M = sym_from_names(r, [["a", "b"], ["c", "d"]])
    swapped = sym_from_names(r, [["c", "d"], ["a", "b"]])
    assert det_symbolic(swapped) == -det_symbolic(M)


def test_minor_selection():
    r = PolyRing([f"v{i}" for i in range(9)])
    M = sym_from_names(r, [[f"v{3 * i + j}" for j in range(3)] for i in range(3)])
    expect = r.var("v0") * r.var("v4") - r.var("v1") * r.var("v3")
    assert minor(M, [0, 1], [0, 1]) == expect


def test_minor_rejects_bad_index_sets():
    r = PolyRing(["a", "b", "c", "d"])
    M = sym_from_names(r, [["a", "b"], ["c", "d"]])
    with pytest.raises(MatrixError):
        minor(M, [1, 0], [0, 1])
    with pytest.raises(MatrixError):
        minor(M, [0], [0, 1])


def test_det_rational_examples():
    assert det_rational(RatMatrix([[Fraction(1, 2), 1], [3, 4]])) == -1
    assert det_rational(RatMatrix.identity(5)) == 1
    assert det_rational(RatMatrix([[1, 2], [2, 4]])) == 0


def test_det_rational_multiplicative():
    rng = random.Random(11)

    def rand(size):
        return RatMatrix(
            [
                [Fraction(rng.randint(-5, 5), rng.choice((1, 2, 3))) for _ in range(size)]
                for _ in range(size)
            ]
        )

    for size in (2, 3, 4):
        A, B = rand(size), rand(size)
        assert det_rational(A @ B) == det_rational(A) * det_rational(B)


def test_det_rational_with_pivot_swap():
    M = RatMatrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    assert det_rational(M) == -1


def test_rref_and_rank():
    M = RatMatrix([[1, 2, 3], [2, 4, 6], [1, 1, 1]])
    assert rank(M) == 2
    rows, pivots = rref(M)
    assert pivots == [0, 1]
    assert rows[0][:2] == [Fraction(1), Fraction(0)]


def test_kernel_basis_annihilates():
    M = RatMatrix([[1, 2, 3, 0], [0, 1, 1, 1]])
    basis = kernel_basis(M)
    assert len(basis) == 2
    for vec in basis:
        for row in M.entries:
            assert sum(a * b for a, b in zip(row, vec)) == 0


def test_solve_linear_round_trip():
    M = RatMatrix([[2, 1], [1, 3]])
    x = solve_linear(M, [Fraction(5), Fraction(10)])
    assert [sum(r[j] * x[j] for j in range(2)) for r in M.entries] == [5, 10]


def test_solve_linear_singular_errors():
    with pytest.raises(MatrixError):
        solve_linear(RatMatrix([[1, 2], [2, 4]]), [Fraction(1), Fraction(1)])


def test_sparse_echelon_matches_dense_kernel():
    rng = random.Random(3)
    for trial in range(20):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        entries = [
            [Fraction(rng.randint(-3, 3)) if rng.random() < 0.6 else Fraction(0) for _ in range(cols)]
            for _ in range(rows)
        ]
        M = RatMatrix(entries)
        ech = SparseEchelon()
        for row in entries:
            ech.add_row({c: v for c, v in enumerate(row) if v != 0})
        assert ech.rank == rank(M)
        sparse_kernel = ech.kernel_basis(cols)
        assert len(sparse_kernel) == cols - rank(M)
        for vec in sparse_kernel:
            for row in entries:
                assert sum(a * b for a, b in zip(row, vec)) == 0


def test_sparse_echelon_stays_reduced():
    # regression: a fresh pivot row must not retain other stored pivot columns
    ech = SparseEchelon()
    ech.add_row({0: Fraction(1), 2: Fraction(1)})
    ech.add_row({1: Fraction(1), 2: Fraction(1)})
    ech.add_row({0: Fraction(1), 1: Fraction(1), 3: Fraction(1)})
    for p, row in ech.rows.items():
        for other in ech.rows:
            if other != p:
                assert other not in row
