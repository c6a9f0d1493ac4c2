"""SAGBI subduction, the binary-forms bridge, and hyperdeterminant tools.

The abstraction variables U_0..U_n stand for the pencil coefficients
f_{0,n}..f_{n,0} and carry the degree-revlex order with U_n > ... > U_0.
Subduction factors leading monomials through the triangular exponent system
induced by lm(f_{k,n-k}); the bridge U_k <-> binom(n, k) * xi_k identifies
the invariant ring with the classical invariants of binary forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .action import TensorValues
from .linalg import RatMatrix, det_rational, solve_linear
from .pencil import (
    FormatError,
    IndeterminateTensor,
    PencilInvariants,
    pencil_coefficients_subset,
)
from .ring import Monomial, Polynomial, PolyRing, tensor_variable


def u_variable(k: int) -> str:
    return f"U{k}"


def xi_variable(k: int) -> str:
    return f"xi{k}"


def u_ring(n: int) -> PolyRing:
    """Degree-revlex ring on U_n > U_{n-1} > ... > U_0."""
    return PolyRing([u_variable(k) for k in range(n, -1, -1)], order="degrevlex")


def xi_ring(n: int) -> PolyRing:
    return PolyRing([xi_variable(k) for k in range(n, -1, -1)], order="degrevlex")


@lru_cache(maxsize=8)
def pencil_generators(n: int) -> PencilInvariants:
    """Cached symbolic pencil coefficient tuple for the n x n x 2 format."""
    return pencil_coefficients_subset(IndeterminateTensor(n, n))


# ---------------------------------------------------------------------------
# subduction
# ---------------------------------------------------------------------------


def _factor_diagonal_monomial(mon: Monomial, n: int) -> tuple[int, ...] | None:
    """Solve lm(p) = prod_k lm(f_{k,n-k})^{c_k} for the exponent vector.

    The exponent of T[k,k,1] in such a product is c_k + c_{k+1} + ... + c_n,
    so the c_k are differences of the partial sums; the candidate is then
    verified by exact reconstruction.  Returns None when no factorization
    exists.
    """
    ring = mon.ring
    e1 = [mon.exponent(tensor_variable(k, k, 1)) for k in range(1, n + 1)]
    e2 = [mon.exponent(tensor_variable(k, k, 2)) for k in range(1, n + 1)]
    c = [0] * (n + 1)
    c[0] = e2[0]
    for k in range(1, n):
        c[k] = e1[k - 1] - e1[k]
    c[n] = e1[n - 1]
    if any(x < 0 for x in c):
        return None
    # exact reconstruction: catches off-diagonal support and mismatches
    exps = [0] * ring.nvars
    for k in range(n + 1):
        if c[k] == 0:
            continue
        for i in range(1, k + 1):
            exps[ring.index[tensor_variable(i, i, 1)]] += c[k]
        for i in range(k + 1, n + 1):
            exps[ring.index[tensor_variable(i, i, 2)]] += c[k]
    if tuple(exps) != mon.exps:
        return None
    return tuple(c)


def subduct(
    p: Polynomial, n: int, gens: PencilInvariants | None = None
) -> tuple[Polynomial, Polynomial]:
    """SAGBI subduction of p against the pencil coefficient generators.

    Returns (u, r) with p = u(f_{0,n}, ..., f_{n,0}) + r.  The remainder is
    zero exactly when p lies in the invariant ring.  Each step strictly
    decreases the leading monomial; when the leading monomial stops being
    factorable the current polynomial is returned as the remainder.
    """
    if gens is None:
        gens = pencil_generators(n)
    uring = u_ring(n)
    u = uring.zero()
    q = p
    prev_key = None
    while not q.is_zero():
        mon, coef = q.leading_term()
        key = q.ring.monomial_key(mon.exps)
        assert prev_key is None or key < prev_key, "subduction failed to decrease"
        prev_key = key
        powers = _factor_diagonal_monomial(mon, n)
        if powers is None:
            break
        product = gens.generator_product(powers)
        scalar = coef / product.leading_coefficient()
        q = q - product * scalar
        u_exps = [0] * uring.nvars
        for k, e in enumerate(powers):
            u_exps[uring.index[u_variable(k)]] = e
        u = u + uring.monomial(tuple(u_exps), scalar)
    return u, q


def substitute_generators(
    u: Polynomial, n: int, gens: PencilInvariants | None = None
) -> Polynomial:
    """Evaluate a U-polynomial at the pencil coefficients (full expansion)."""
    if gens is None:
        gens = pencil_generators(n)
    result = gens.ring.zero()
    for exps, coef in u.terms.items():
        powers = [0] * (n + 1)
        for i, e in enumerate(exps):
            name = u.ring.variables[i]
            if not name.startswith("U"):
                raise FormatError(f"not a U-variable: {name!r}")
            powers[int(name[1:])] = e
        result = result + gens.generator_product(tuple(powers)) * coef
    return result


# ---------------------------------------------------------------------------
# the binary-forms bridge
# ---------------------------------------------------------------------------


def bridge_to_xi(u: Polynomial, n: int) -> Polynomial:
    """Substitute U_k -> binom(n, k) * xi_k."""
    xr = xi_ring(n)
    mapping = {
        u_variable(k): xr.var(xi_variable(k)) * math.comb(n, k) for k in range(n + 1)
    }
    return u.substitute(mapping, target=xr)


def bridge_from_xi(x: Polynomial, n: int) -> Polynomial:
    """Substitute xi_k -> U_k / binom(n, k); inverse of :func:`bridge_to_xi`."""
    ur = u_ring(n)
    mapping = {
        xi_variable(k): ur.var(u_variable(k)) / math.comb(n, k) for k in range(n + 1)
    }
    return x.substitute(mapping, target=ur)


def integer_normalize(p: Polynomial) -> Polynomial:
    """Scale to coprime integer coefficients with positive leading coefficient."""
    if p.is_zero():
        return p
    denom_lcm = 1
    for c in p.terms.values():
        denom_lcm = denom_lcm * c.denominator // math.gcd(denom_lcm, c.denominator)
    scaled = [c * denom_lcm for c in p.terms.values()]
    g = 0
    for c in scaled:
        g = math.gcd(g, int(c))
    factor = Fraction(denom_lcm, g)
    if p.leading_coefficient() < 0:
        factor = -factor
    return p * factor


# ---------------------------------------------------------------------------
# classical invariants (tabulated, derived through the bridge)
# ---------------------------------------------------------------------------


def _xi_form_quadric(xr: PolyRing) -> Polynomial:
    x0, x1, x2 = (xr.var(xi_variable(k)) for k in range(3))
    return x1 * x1 - x0 * x2


def _xi_form_cubic(xr: PolyRing) -> Polynomial:
    x0, x1, x2, x3 = (xr.var(xi_variable(k)) for k in range(4))
    return (
        x1**2 * x2**2 * 3
        - x0 * x2**3 * 4
        - x1**3 * x3 * 4
        + x0 * x1 * x2 * x3 * 6
        - x0**2 * x3**2
    )


def _xi_forms_quartic(xr: PolyRing) -> list[Polynomial]:
    x0, x1, x2, x3, x4 = (xr.var(xi_variable(k)) for k in range(5))
    i2 = x2**2 * 3 - x1 * x3 * 4 + x0 * x4
    i3 = x2**3 + x0 * x3**2 + x1**2 * x4 - x1 * x2 * x3 * 2 - x0 * x2 * x4
    return [i2, i3]


def classical_invariants(n: int) -> list[Polynomial]:
    """Integer-normalized generators of the full invariant ring, in U-form.

    Derived by pushing the binary-form generators through the bridge, never
    hard-coded in f-form; tabulated for n = 2, 3, 4 only.
    """
    xr = xi_ring(n)
    if n == 2:
        forms = [_xi_form_quadric(xr)]
    elif n == 3:
        forms = [_xi_form_cubic(xr)]
    elif n == 4:
        forms = _xi_forms_quartic(xr)
    else:
        raise FormatError(f"classical invariants not tabulated for n = {n}")
    return [integer_normalize(bridge_from_xi(f, n)) for f in forms]


# ---------------------------------------------------------------------------
# hyperdeterminants
# ---------------------------------------------------------------------------


def hyperdet_exists(l1: int, l2: int, l3: int) -> bool:
    """Existence of the hyperdeterminant of format (l1, l2, l3)."""
    ls = (l1, l2, l3)
    if any(l < 1 for l in ls):
        raise FormatError("format entries must be positive")
    total = sum(ls)
    return all(l <= total - l for l in ls)


def support_divisibility_check(p: Polynomial, m: int, n: int) -> bool:
    """Index-support divisibility criterion for an m x n x 2 format.

    True iff every monomial's index support comes within Hamming distance 1
    of every index triple (j1, j2, j3) of the format.
    """
    targets = [
        (j1, j2, j3)
        for j1 in range(1, m + 1)
        for j2 in range(1, n + 1)
        for j3 in (1, 2)
    ]
    for mon in p.monomials():
        isupp = []
        for name in mon.support():
            inner = name[name.index("[") + 1 : name.index("]")]
            isupp.append(tuple(int(x) for x in inner.split(",")))
        for target in targets:
            if not any(
                sum(1 for a, b in zip(triple, target) if a != b) <= 1
                for triple in isupp
            ):
                return False
    return True


def hyperdet_nn1(n: int) -> Polynomial:
    """The format (n-1, n-1, 1) hyperdeterminant in U-form, up to scalar.

    n = 2 is the Cayley 2x2x2 case; n = 3 is the degree-12 generator; n = 4
    is 4*I2^3 - I3^2 built from the two quartic generators.  Only the
    vanishing locus and the leading-monomial support are canonical; the
    overall scalar is fixed by integer normalization.
    """
    if n == 2:
        return classical_invariants(2)[0]
    if n == 3:
        return classical_invariants(3)[0]
    if n == 4:
        i2, i3 = classical_invariants(4)
        return integer_normalize(i2**3 * 4 - i3**2)
    raise FormatError(f"hyperdeterminant not tabulated for n = {n}")


# ---------------------------------------------------------------------------
# numeric evaluation and the repeated-root degeneracy oracle
# ---------------------------------------------------------------------------


def pencil_values(t: TensorValues) -> list[Fraction]:
    """Exact values (f_{0,n}(t), ..., f_{n,0}(t)) by determinant interpolation.

    Numerically independent of the symbolic subset expansion: evaluates
    det(cX + Y) at c = 0..n and solves the Vandermonde system.
    """
    if t.m != t.n:
        raise FormatError("pencil values require a square format")
    n = t.n
    dets = [
        det_rational(t.X.scale(c) + t.Y)
        for c in range(n + 1)
    ]
    vandermonde = RatMatrix(
        [[Fraction(c) ** k for k in range(n + 1)] for c in range(n + 1)]
    )
    return solve_linear(vandermonde, dets)


def evaluate_u_at_tensor(u: Polynomial, n: int, t: TensorValues) -> Fraction:
    """Value of a U-polynomial at the pencil coefficients of a tensor."""
    values = pencil_values(t)
    return u.evaluate({u_variable(k): values[k] for k in range(n + 1)})


def u_evaluator(u: Polynomial, n: int):
    """Invariant evaluator closure for :func:`tensorinv.action.check_invariance`."""

    def ev(t: TensorValues) -> Fraction:
        return evaluate_u_at_tensor(u, n, t)

    return ev


def pencil_value_evaluator(k: int, n: int):
    """Evaluator for the single pencil coefficient f_{k,n-k}."""

    def ev(t: TensorValues) -> Fraction:
        return pencil_values(t)[k]

    return ev


@dataclass
class DegeneracyResult:
    degenerate: bool
    zero_form: bool = False

    def __bool__(self):
        return self.degenerate


def _univ_degree(coeffs: list[Fraction]) -> int:
    for i in range(len(coeffs) - 1, -1, -1):
        if coeffs[i] != 0:
            return i
    return -1


def _univ_mod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    db = _univ_degree(b)
    lead = b[db]
    while _univ_degree(a) >= db:
        da = _univ_degree(a)
        f = a[da] / lead
        for i in range(db + 1):
            a[da - db + i] -= f * b[i]
        a[da] = Fraction(0)  # force exact cancellation of the lead
    return a


def _univ_gcd_degree(a: list[Fraction], b: list[Fraction]) -> int:
    """Degree of gcd(a, b) over Q (coefficient lists, ascending)."""
    while _univ_degree(b) >= 0:
        a, b = b, _univ_mod(a, b)
    return _univ_degree(a)


def pencil_degenerate(t: TensorValues) -> DegeneracyResult:
    """Repeated-root oracle for the binary form det(xX + yY).

    Handles roots at infinity through the homogeneous degree drop: when the
    dehomogenized form loses two or more degrees, infinity is a repeated
    root.  The identically-zero form is degenerate and flagged.
    """
    if t.m != t.n:
        raise FormatError("degeneracy oracle requires a square format")
    n = t.n
    values = pencil_values(t)  # values[k] multiplies x^k y^(n-k)
    coeffs = list(values)  # ascending in x after setting y = 1
    deg = _univ_degree(coeffs)
    if deg < 0:
        return DegeneracyResult(True, zero_form=True)
    if n - deg >= 2:
        return DegeneracyResult(True)
    if deg < 1:
        # form is y^(n-1) * (linear): repeated iff the y-root already counted
        return DegeneracyResult(n - deg >= 2)
    derivative = [coeffs[i] * i for i in range(1, deg + 1)]
    g = _univ_gcd_degree(coeffs[: deg + 1], derivative)
    return DegeneracyResult(g >= 1)
