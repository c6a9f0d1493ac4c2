"""Exact sparse multivariate polynomials over the rationals.

A polynomial lives in a :class:`PolyRing`, which fixes an explicit, ordered
chain of variable names and a degree-compatible monomial order (degree-lex or
degree-revlex with respect to that chain).  Terms are stored as a dict mapping
exponent tuples (one entry per ring variable) to nonzero ``Fraction``
coefficients; the zero polynomial is the empty dict.  All operations are exact
and eagerly canonical, so structural equality of term maps is mathematical
equality.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

Exponents = tuple[int, ...]

DEFAULT_MAX_TERMS = 5_000_000


class RingError(ValueError):
    pass


class ExpansionLimitError(RingError):
    """Raised when an expansion would exceed the TIV_MAX_TERMS guard."""


def max_terms_limit() -> int:
    return int(os.environ.get("TIV_MAX_TERMS", DEFAULT_MAX_TERMS))


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise RingError(f"not an exact rational: {value!r}")


class PolyRing:
    """Polynomial ring with an explicit variable chain and monomial order.

    ``variables`` is listed in strictly decreasing order: ``variables[0]`` is
    the largest variable of the chain.  ``order`` is ``"deglex"`` or
    ``"degrevlex"``; both are total, multiplicative and degree-compatible.
    """

    def __init__(self, variables: Iterable[str], order: str = "deglex"):
        self.variables: tuple[str, ...] = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise RingError("duplicate variable names in ring")
        if order not in ("deglex", "degrevlex"):
            raise RingError(f"unknown monomial order {order!r}")
        self.order = order
        self.index: dict[str, int] = {v: i for i, v in enumerate(self.variables)}
        self.nvars = len(self.variables)
        self._zero_exps: Exponents = (0,) * self.nvars

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyRing)
            and self.variables == other.variables
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.variables, self.order))

    def __repr__(self):
        return f"PolyRing({len(self.variables)} vars, {self.order})"

    # -- monomial order -------------------------------------------------

    def monomial_key(self, exps: Exponents):
        """Sort key: larger key means larger monomial under the ring order."""
        deg = sum(exps)
        if self.order == "deglex":
            return (deg, exps)
        # degrevlex: ties broken by the rightmost nonzero entry of the
        # exponent difference being negative.
        return (deg, tuple(-e for e in reversed(exps)))

    def monomial_cmp_lt(self, a: Exponents, b: Exponents) -> bool:
        return self.monomial_key(a) < self.monomial_key(b)

    # -- constructors ---------------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = _as_fraction(c)
        if c == 0:
            return self.zero()
        return Polynomial(self, {self._zero_exps: c})

    def var(self, name: str) -> "Polynomial":
        if name not in self.index:
            raise RingError(f"unknown variable {name!r}")
        exps = [0] * self.nvars
        exps[self.index[name]] = 1
        return Polynomial(self, {tuple(exps): Fraction(1)})

    def monomial(self, exps: Exponents, coeff=1) -> "Polynomial":
        coeff = _as_fraction(coeff)
        if coeff == 0:
            return self.zero()
        return Polynomial(self, {tuple(exps): coeff})

    def from_terms(self, terms: Mapping[Exponents, Fraction]) -> "Polynomial":
        clean = {tuple(e): _as_fraction(c) for e, c in terms.items() if c != 0}
        return Polynomial(self, clean)

    # -- parsing --------------------------------------------------------

    _coeff_re = re.compile(r"^-?\d+(?:/\d+)?$")
    _var_re = re.compile(r"^(?P<name>[^\^\s]+?)(?:\^(?P<exp>\d+))?$")

    def parse(self, text: str) -> "Polynomial":
        """Parse the text form produced by ``Polynomial.__str__``."""
        text = text.strip()
        if not text:
            raise RingError("empty polynomial text")
        # split into signed terms at top level (no parentheses in the format)
        chunks: list[tuple[int, str]] = []
        sign = 1
        buf: list[str] = []
        for tok in re.split(r"\s+", text.replace("+", " + ").replace("-", " - ")):
            if tok == "":
                continue
            if tok == "+":
                if buf:
                    chunks.append((sign, " ".join(buf)))
                    buf, sign = [], 1
            elif tok == "-":
                if buf:
                    chunks.append((sign, " ".join(buf)))
                    buf, sign = [], -1
                else:
                    sign = -sign
            else:
                buf.append(tok)
        if buf:
            chunks.append((sign, " ".join(buf)))
        result = self.zero()
        for sgn, chunk in chunks:
            result = result + self._parse_term(sgn, chunk)
        return result

    def _parse_term(self, sign: int, chunk: str) -> "Polynomial":
        coeff = Fraction(sign)
        exps = [0] * self.nvars
        for factor in (f.strip() for f in chunk.split("*")):
            if not factor:
                continue
            if self._coeff_re.match(factor):
                coeff *= Fraction(factor)
                continue
            m = self._var_re.match(factor)
            if not m or m.group("name") not in self.index:
                raise RingError(f"cannot parse factor {factor!r}")
            exp = int(m.group("exp") or 1)
            exps[self.index[m.group("name")]] += exp
        return self.monomial(tuple(exps), coeff)


@dataclass(frozen=True)
class Monomial:
    """A single monomial of a ring, as an exponent vector."""

    ring: PolyRing
    exps: Exponents

    @property
    def degree(self) -> int:
        return sum(self.exps)

    def exponent(self, name: str) -> int:
        return self.exps[self.ring.index[name]]

    def support(self) -> set[str]:
        return {self.ring.variables[i] for i, e in enumerate(self.exps) if e > 0}

    def __mul__(self, other: "Monomial") -> "Monomial":
        if self.ring != other.ring:
            raise RingError("monomials from different rings")
        return Monomial(self.ring, tuple(a + b for a, b in zip(self.exps, other.exps)))

    def __lt__(self, other: "Monomial") -> bool:
        return self.ring.monomial_key(self.exps) < other.ring.monomial_key(other.exps)

    def __str__(self):
        if not any(self.exps):
            return "1"
        parts = []
        for i, e in enumerate(self.exps):
            if e == 1:
                parts.append(self.ring.variables[i])
            elif e > 1:
                parts.append(f"{self.ring.variables[i]}^{e}")
        return " * ".join(parts)


class Polynomial:
    """Immutable exact polynomial; do not mutate ``terms`` after creation."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict[Exponents, Fraction]):
        self.ring = ring
        self.terms = terms

    # -- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingError("operands live in different rings")
            return other
        return self.ring.const(other)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            s = terms.get(exps, Fraction(0)) + c
            if s:
                terms[exps] = s
            else:
                terms.pop(exps, None)
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _as_fraction(other)
            if other == 0:
                return self.ring.zero()
            return Polynomial(self.ring, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        limit = max_terms_limit()
        terms: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(exps, Fraction(0)) + c1 * c2
                if s:
                    terms[exps] = s
                else:
                    terms.pop(exps, None)
            if len(terms) > limit:
                raise ExpansionLimitError(
                    f"product exceeds TIV_MAX_TERMS={limit} terms"
                )
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        scalar = _as_fraction(scalar)
        if scalar == 0:
            raise ZeroDivisionError("division of polynomial by zero scalar")
        return self * (Fraction(1) / scalar)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise RingError("polynomial powers must be non-negative integers")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- structure ------------------------------------------------------

    def total_degree(self) -> int:
        """Max total degree over terms; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, names: Iterable[str]) -> int:
        """Max combined exponent of the given variables; -1 if zero."""
        if not self.terms:
            return -1
        idx = [self.ring.index[n] for n in names]
        return max(sum(e[i] for i in idx) for e in self.terms)

    def variables_used(self) -> set[str]:
        used: set[str] = set()
        for e in self.terms:
            for i, exp in enumerate(e):
                if exp:
                    used.add(self.ring.variables[i])
        return used

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def coefficient_of(self, mon: Monomial) -> Fraction:
        return self.terms.get(mon.exps, Fraction(0))

    def leading_term(self) -> tuple[Monomial, Fraction]:
        if not self.terms:
            raise RingError("leading term of the zero polynomial")
        exps = max(self.terms, key=self.ring.monomial_key)
        return Monomial(self.ring, exps), self.terms[exps]

    def leading_monomial(self) -> Monomial:
        return self.leading_term()[0]

    def leading_coefficient(self) -> Fraction:
        return self.leading_term()[1]

    def monomials(self) -> list[Monomial]:
        return [Monomial(self.ring, e) for e in self.terms]

    # -- calculus and composition --------------------------------------

    def diff(self, name: str) -> "Polynomial":
        i = self.ring.index[name]
        terms: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            lowered = e[:i] + (e[i] - 1,) + e[i + 1 :]
            s = terms.get(lowered, Fraction(0)) + c * e[i]
            if s:
                terms[lowered] = s
            else:
                terms.pop(lowered, None)
        return Polynomial(self.ring, terms)

    def substitute(
        self, mapping: Mapping[str, "Polynomial"], target: PolyRing | None = None
    ) -> "Polynomial":
        """Compose with ``mapping`` (variable name -> polynomial).

        Every variable that actually occurs in ``self`` must be mapped;
        identity images are allowed.  The target ring is taken from the
        images (or ``target`` when mapping into an empty polynomial set).
        """
        if target is None:
            for img in mapping.values():
                target = img.ring
                break
            if target is None:
                target = self.ring
        for img in mapping.values():
            if img.ring != target:
                raise RingError("substitution images live in different rings")
        used = self.variables_used()
        missing = used - set(mapping)
        if missing:
            raise RingError(f"unmapped variables in substitution: {sorted(missing)}")
        cache: dict[tuple[str, int], Polynomial] = {}

        def power(name: str, k: int) -> Polynomial:
            key = (name, k)
            if key not in cache:
                cache[key] = mapping[name] ** k
            return cache[key]

        result = target.zero()
        for e, c in self.terms.items():
            term = target.const(c)
            for i, exp in enumerate(e):
                if exp:
                    term = term * power(self.ring.variables[i], exp)
            result = result + term
        return result

    def evaluate(self, assignment: Mapping[str, Fraction | int | str]) -> Fraction:
        """Evaluate at a rational point; every used variable must be assigned."""
        used = self.variables_used()
        missing = used - set(assignment)
        if missing:
            raise RingError(f"missing assignments: {sorted(missing)}")
        values = {self.ring.index[n]: _as_fraction(v) for n, v in assignment.items()
                  if n in self.ring.index}
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for i, exp in enumerate(e):
                if exp:
                    v *= values[i] ** exp
            total += v
        return total

    def map_into(self, target: PolyRing) -> "Polynomial":
        """Re-express in a ring containing all used variables by name."""
        terms: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            exps = [0] * target.nvars
            for i, exp in enumerate(e):
                if exp:
                    name = self.ring.variables[i]
                    if name not in target.index:
                        raise RingError(f"target ring lacks variable {name!r}")
                    exps[target.index[name]] = exp
            terms[tuple(exps)] = c
        return Polynomial(target, terms)

    # -- formatting -----------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        return sorted(
            self.terms.items(), key=lambda t: self.ring.monomial_key(t[0]), reverse=True
        )

    def __str__(self):
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for i, (exps, coeff) in enumerate(self.sorted_terms()):
            mon = Monomial(self.ring, exps)
            mon_str = str(mon)
            mag = abs(coeff)
            if mon_str == "1":
                body = str(mag)
            elif mag == 1:
                body = mon_str
            else:
                body = f"{mag} * {mon_str}"
            if i == 0:
                pieces.append(body if coeff > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self):
        return f"<Polynomial {self}>"


def tensor_variable(i: int, j: int, k: int) -> str:
    return f"T[{i},{j},{k}]"


def tensor_chain(m: int, n: int) -> list[str]:
    """The distinguished T-variable chain, largest first.

    Ordering is by slice (k=1 before k=2), then by column, then by row, so
    the induced order is diagonal for both the row-stacked and the
    column-concatenated arrangement of the two slices.
    """
    return [
        tensor_variable(i, j, k)
        for k in (1, 2)
        for j in range(1, n + 1)
        for i in range(1, m + 1)
    ]


def tensor_ring(m: int, n: int, extra: Iterable[str] = ()) -> PolyRing:
    """Degree-lex ring on the T-variables of an m x n x 2 tensor.

    ``extra`` variables are appended below the whole T-chain.
    """
    return PolyRing(tensor_chain(m, n) + list(extra), order="deglex")
