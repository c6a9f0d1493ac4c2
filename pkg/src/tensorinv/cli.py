"""Command-line surface: a thin client over the service handlers.

Every subcommand builds the same request model the HTTP API accepts and
dispatches it either in-process (default) or to a running service via
``--server``.  Exit codes: 0 success/pass, 1 verification failure, 2
usage/format error.
"""

from __future__ import annotations

import json
import sys

import click
from pydantic import BaseModel, ValidationError

from .linalg import MatrixError
from .pencil import FormatError
from .ring import RingError
from .service import core
from .service import schemas as S

DOMAIN_ERRORS = (FormatError, RingError, MatrixError, ValidationError)


def _dispatch(server: str | None, path: str, request: BaseModel, response_cls):
    if server is None:
        handler = {
            "/pencil": core.handle_pencil,
            "/blockdet": core.handle_blockdet,
            "/check": core.handle_check,
            "/subduct": core.handle_subduct,
            "/hyperdet": core.handle_hyperdet,
            "/lie-kernel": core.handle_lie_kernel,
        }[path]
        return handler(request)
    import httpx

    resp = httpx.post(server.rstrip("/") + path, json=request.model_dump(), timeout=600)
    if resp.status_code == 400:
        raise FormatError(resp.json().get("detail", "request rejected"))
    resp.raise_for_status()
    return response_cls.model_validate(resp.json())


def _load_tensor_payload(path: str | None) -> S.TensorPayload | None:
    if path is None:
        return None
    with open(path) as fh:
        return S.TensorPayload.model_validate(json.load(fh))


def _format_poly(text: str, pretty: bool) -> str:
    if not pretty:
        return text
    return text.replace(" + ", "\n+ ").replace(" - ", "\n- ")


def _fail_usage(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


@click.group()
@click.option("--server", default=None, metavar="URL",
              help="Send requests to a running service instead of computing in-process.")
@click.pass_context
def main(ctx, server):
    """Exact invariants of m x n x 2 tensors under SL(m) x SL(n) x SL(2)."""
    ctx.obj = {"server": server}


@main.command()
@click.option("--n", "n", type=int, required=True, help="Square format size.")
@click.option("--symbolic", is_flag=True, help="Print symbolic coefficients.")
@click.option("--input", "-i", "input_path", default=None, help="Tensor JSON file.")
@click.option("--method", type=click.Choice(["subset", "interp", "both"]),
              default="subset", show_default=True)
@click.option("--pretty", is_flag=True, help="One term per line.")
@click.pass_context
def pencil(ctx, n, symbolic, input_path, method, pretty):
    """Pencil coefficients f[k,n-k] of det(xX + yY), symbolic or evaluated."""
    if not symbolic and input_path is None:
        _fail_usage("pencil needs --symbolic or --input FILE")
    try:
        req = S.PencilRequest(n=n, method=method,
                              tensor=_load_tensor_payload(input_path))
        resp = _dispatch(ctx.obj["server"], "/pencil", req, S.PencilResponse)
    except DOMAIN_ERRORS as exc:
        _fail_usage(str(exc))
    for item in resp.coefficients:
        if item.polynomial is not None:
            click.echo(f"{item.label} = {_format_poly(item.polynomial, pretty)}")
        else:
            click.echo(f"{item.label} = {item.value}")
    if resp.methods_agree is not None:
        click.echo("methods agree" if resp.methods_agree else "METHODS DISAGREE")
        if not resp.methods_agree:
            sys.exit(1)


@main.command()
@click.option("--m", "m", type=int, required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--symbolic", is_flag=True)
@click.option("--input", "-i", "input_path", default=None, help="Tensor JSON file.")
@click.option("--pretty", is_flag=True)
@click.pass_context
def blockdet(ctx, m, n, symbolic, input_path, pretty):
    """Block determinant generator for m < n, or the trichotomy verdict."""
    try:
        req = S.BlockDetRequest(m=m, n=n, tensor=_load_tensor_payload(input_path))
        resp = _dispatch(ctx.obj["server"], "/blockdet", req, S.BlockDetResponse)
    except DOMAIN_ERRORS as exc:
        _fail_usage(str(exc))
    if resp.verdict == "trivial":
        click.echo(resp.message)
        return
    click.echo(resp.message)
    if resp.value is not None:
        click.echo(f"value = {resp.value}")
    elif resp.polynomial is not None:
        click.echo(_format_poly(resp.polynomial, pretty))


@main.command()
@click.option("--n", "n", type=int, required=True)
@click.option("--m", "m", type=int, default=None, help="Defaults to n.")
@click.option("--group", type=click.Choice(["slsl", "slslsl"]), default="slslsl",
              show_default=True)
@click.option("--samples", type=int, default=25, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--poly", default=None, help="Explicit polynomial to check.")
@click.option("--target", type=click.Choice(["auto", "pencil", "blockdet", "classical"]),
              default="auto", show_default=True)
@click.pass_context
def check(ctx, n, m, group, samples, seed, poly, target):
    """Exact sampling invariance check; exit 0 iff every check passes."""
    try:
        req = S.CheckRequest(m=m, n=n, group=group, samples=samples, seed=seed,
                             poly=poly, target=target)
        resp = _dispatch(ctx.obj["server"], "/check", req, S.CheckResponse)
    except DOMAIN_ERRORS as exc:
        _fail_usage(str(exc))
    for item in resp.checks:
        status = "pass" if item.passed else "FAIL"
        click.echo(f"{item.name}: {status} ({resp.samples} samples, {resp.group})")
        if item.counterexample is not None:
            ce = item.counterexample
            click.echo(f"  counterexample at sample {ce.sample_index}: "
                       f"{ce.value_before} != {ce.value_after}")
            click.echo(f"  tensor: {json.dumps(ce.tensor)}")
    sys.exit(0 if resp.passed else 1)


@main.command()
@click.option("--n", "n", type=int, required=True)
@click.option("--poly", default=None, help="Polynomial in the T-variables.")
@click.option("--poly-file", default=None, help="File holding the polynomial text.")
@click.option("--pretty", is_flag=True)
@click.pass_context
def subduct(ctx, n, poly, poly_file, pretty):
    """SAGBI subduction against the pencil generators; exit 1 if not in the ring."""
    if (poly is None) == (poly_file is None):
        _fail_usage("subduct needs exactly one of --poly or --poly-file")
    if poly_file is not None:
        with open(poly_file) as fh:
            poly = fh.read().strip()
    try:
        req = S.SubductRequest(n=n, poly=poly)
        resp = _dispatch(ctx.obj["server"], "/subduct", req, S.SubductResponse)
    except DOMAIN_ERRORS as exc:
        _fail_usage(str(exc))
    click.echo(f"u = {_format_poly(resp.u, pretty)}")
    click.echo(f"remainder = {_format_poly(resp.remainder, pretty)}")
    sys.exit(0 if resp.in_ring else 1)


@main.command()
@click.option("--n", "n", type=int, required=True)
@click.option("--input", "-i", "input_path", required=True, help="Tensor JSON file.")
@click.pass_context
def hyperdet(ctx, n, input_path):
    """Hyperdeterminant value of format (n-1, n-1, 1) and degeneracy verdict."""
    try:
        req = S.HyperdetRequest(n=n, tensor=_load_tensor_payload(input_path))
        resp = _dispatch(ctx.obj["server"], "/hyperdet", req, S.HyperdetResponse)
    except DOMAIN_ERRORS as exc:
        _fail_usage(str(exc))
    click.echo(f"value = {resp.value}")
    verdict = "degenerate" if resp.degenerate else "non-degenerate"
    if resp.zero_form:
        verdict += " (identically zero form)"
    click.echo(verdict)


@main.command("lie-kernel")
@click.option("--m", "m", type=int, required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--degree", type=int, required=True)
@click.option("--parts", default="sl_m,sl_n,sl_2", show_default=True,
              help="Comma-separated subset of sl_m, sl_n, sl_2.")
@click.option("--pretty", is_flag=True)
@click.pass_context
def lie_kernel(ctx, m, n, degree, parts, pretty):
    """Exact basis of the joint Lie-derivation kernel on the graded piece."""
    try:
        req = S.LieKernelRequest(
            m=m, n=n, degree=degree, parts=[p.strip() for p in parts.split(",")]
        )
        resp = _dispatch(ctx.obj["server"], "/lie-kernel", req, S.LieKernelResponse)
    except DOMAIN_ERRORS as exc:
        _fail_usage(str(exc))
    click.echo(f"dimension = {resp.dimension}")
    for i, basis_poly in enumerate(resp.basis):
        click.echo(f"basis[{i}] = {_format_poly(basis_poly, pretty)}")


if __name__ == "__main__":
    main()
