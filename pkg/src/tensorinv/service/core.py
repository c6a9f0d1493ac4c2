"""Service handlers: the single implementation behind the API and the CLI."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from ..action import (
    Counterexample,
    TensorValues,
    check_invariance,
)
from ..action import lie_invariant_space as _lie_invariant_space
from ..invariants import (
    classical_invariants,
    evaluate_u_at_tensor,
    hyperdet_nn1,
    pencil_generators,
    pencil_degenerate,
    pencil_value_evaluator,
    pencil_values,
    subduct,
    u_evaluator,
)
from ..linalg import RatMatrix, det_rational
from ..pencil import (
    FormatError,
    IndeterminateTensor,
    TrivialInvariantRing,
    block_det,
    pencil_coefficients_interp,
    pencil_coefficients_subset,
    validate_block_format,
)
from ..ring import tensor_ring
from ..tensorio import tensor_to_json, tensor_values_from_entries
from . import schemas as S


def _tensor_from_payload(payload: S.TensorPayload | None) -> TensorValues | None:
    if payload is None or payload.entries is None:
        return None
    return tensor_values_from_entries(payload.m, payload.n, payload.entries)


def _counterexample_model(ce: Counterexample | None) -> S.CounterexampleModel | None:
    if ce is None:
        return None
    return S.CounterexampleModel(
        sample_index=ce.sample_index,
        tensor=tensor_to_json(ce.tensor),
        value_before=str(ce.value_before),
        value_after=str(ce.value_after),
    )


def handle_pencil(req: S.PencilRequest) -> S.PencilResponse:
    n = req.n
    t = IndeterminateTensor(n, n)
    values = _tensor_from_payload(req.tensor)
    if values is not None and (values.m, values.n) != (n, n):
        raise FormatError("tensor shape does not match --n")
    subset = pencil_coefficients_subset(t) if req.method in ("subset", "both") else None
    interp = pencil_coefficients_interp(t) if req.method in ("interp", "both") else None
    agree = None
    if subset is not None and interp is not None:
        agree = all(subset[k] == interp[k] for k in range(n + 1))
    chosen = subset if subset is not None else interp
    coeffs = []
    for k in range(n + 1):
        poly = chosen[k]
        item = S.PencilCoefficient(k=k, label=f"f[{k},{n - k}]")
        if values is None:
            item.polynomial = str(poly)
        else:
            item.value = str(poly.evaluate(values.assignment()))
        coeffs.append(item)
    return S.PencilResponse(
        n=n, method=req.method, coefficients=coeffs, methods_agree=agree
    )


def block_det_value(m: int, n: int, t: TensorValues) -> Fraction:
    """Numeric block determinant, assembled directly from tensor values."""
    d = validate_block_format(m, n)
    size = m * n // d
    entries = [[Fraction(0)] * size for _ in range(size)]
    for R in range(size):
        r, rin = divmod(R, m)
        for C in range(size):
            c, cin = divmod(C, n)
            if r == c:
                entries[R][C] = t.X[rin, cin]
            elif r == c + 1:
                entries[R][C] = t.Y[rin, cin]
    return det_rational(RatMatrix(entries))


def handle_blockdet(req: S.BlockDetRequest) -> S.BlockDetResponse:
    m, n = req.m, req.n
    values = _tensor_from_payload(req.tensor)
    try:
        validate_block_format(m, n)
    except TrivialInvariantRing as exc:
        return S.BlockDetResponse(
            m=m, n=n, verdict="trivial", message=f"trivial: K ({exc})"
        )
    if values is not None:
        if (values.m, values.n) != (m, n):
            raise FormatError("tensor shape does not match the requested format")
        return S.BlockDetResponse(
            m=m,
            n=n,
            verdict="generator",
            message="ring generated by one element",
            value=str(block_det_value(m, n, values)),
        )
    return S.BlockDetResponse(
        m=m,
        n=n,
        verdict="generator",
        message="ring generated by one element",
        polynomial=str(block_det(m, n)),
    )


def _default_check_set(m: int, n: int, group: str):
    """Named invariant evaluators appropriate for the format and group."""
    if m == n:
        if group == "slsl":
            return [
                (f"f[{k},{n - k}]", pencil_value_evaluator(k, n))
                for k in range(n + 1)
            ]
        gens = classical_invariants(n)
        return [
            (f"classical_invariant_{i + 1}", u_evaluator(g, n))
            for i, g in enumerate(gens)
        ]
    lo, hi = min(m, n), max(m, n)
    validate_block_format(lo, hi)
    if (m, n) != (lo, hi):
        raise FormatError("block determinant checks require m < n")

    def ev(t: TensorValues) -> Fraction:
        return block_det_value(m, n, t)

    return [(f"block_det[{m},{n}]", ev)]


def handle_check(req: S.CheckRequest) -> S.CheckResponse:
    n = req.n
    m = req.m if req.m is not None else n
    if req.poly is not None:
        ring = tensor_ring(m, n)
        targets = [("poly", ring.parse(req.poly))]
    elif req.target == "pencil":
        targets = [
            (f"f[{k},{n - k}]", pencil_value_evaluator(k, n)) for k in range(n + 1)
        ]
    elif req.target == "classical":
        targets = [
            (f"classical_invariant_{i + 1}", u_evaluator(g, n))
            for i, g in enumerate(classical_invariants(n))
        ]
    elif req.target == "blockdet":
        validate_block_format(m, n)

        def ev(t: TensorValues) -> Fraction:
            return block_det_value(m, n, t)

        targets = [(f"block_det[{m},{n}]", ev)]
    else:
        targets = _default_check_set(m, n, req.group)
    checks = []
    all_passed = True
    for name, inv in targets:
        report = check_invariance(
            inv, m, n, group=req.group, samples=req.samples, seed=req.seed
        )
        all_passed = all_passed and report.passed
        checks.append(
            S.CheckItem(
                name=name,
                passed=report.passed,
                counterexample=_counterexample_model(report.counterexample),
            )
        )
    return S.CheckResponse(
        passed=all_passed, group=req.group, samples=req.samples, checks=checks
    )


def handle_subduct(req: S.SubductRequest) -> S.SubductResponse:
    n = req.n
    ring = tensor_ring(n, n)
    p = ring.parse(req.poly)
    u, remainder = subduct(p, n)
    return S.SubductResponse(
        n=n, u=str(u), remainder=str(remainder), in_ring=remainder.is_zero()
    )


def handle_hyperdet(req: S.HyperdetRequest) -> S.HyperdetResponse:
    n = req.n
    values = _tensor_from_payload(req.tensor)
    if values is None:
        raise FormatError("hyperdeterminant evaluation needs tensor entries")
    if (values.m, values.n) != (n, n):
        raise FormatError("tensor shape does not match --n")
    u_form = hyperdet_nn1(n)
    value = evaluate_u_at_tensor(u_form, n, values)
    result = pencil_degenerate(values)
    return S.HyperdetResponse(
        n=n,
        value=str(value),
        degenerate=result.degenerate,
        zero_form=result.zero_form,
        u_form=str(u_form),
    )


def handle_lie_kernel(req: S.LieKernelRequest) -> S.LieKernelResponse:
    basis = _lie_invariant_space(req.m, req.n, req.degree, parts=req.parts)
    return S.LieKernelResponse(
        m=req.m,
        n=req.n,
        degree=req.degree,
        parts=list(req.parts),
        dimension=len(basis),
        basis=[str(p) for p in basis],
    )
