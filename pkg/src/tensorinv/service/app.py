"""FastAPI application wrapping the computation handlers."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..linalg import MatrixError
from ..pencil import FormatError
from ..ring import RingError
from . import core
from . import schemas as S


def create_app() -> FastAPI:
    app = FastAPI(
        title="tensorinv",
        description=(
            "Exact invariants of SL(m) x SL(n) x SL(2) acting on m x n x 2 "
            "tensors: pencil coefficients, block determinants, SAGBI "
            "subduction, hyperdeterminants and invariance verification."
        ),
    )

    @app.exception_handler(FormatError)
    @app.exception_handler(RingError)
    @app.exception_handler(MatrixError)
    async def _domain_error(request: Request, exc: Exception):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.post("/pencil", response_model=S.PencilResponse,
              responses={400: {"model": S.ErrorResponse}})
    def pencil(req: S.PencilRequest):
        return core.handle_pencil(req)

    @app.post("/blockdet", response_model=S.BlockDetResponse,
              responses={400: {"model": S.ErrorResponse}})
    def blockdet(req: S.BlockDetRequest):
        return core.handle_blockdet(req)

    @app.post("/check", response_model=S.CheckResponse,
              responses={400: {"model": S.ErrorResponse}})
    def check(req: S.CheckRequest):
        return core.handle_check(req)

    @app.post("/subduct", response_model=S.SubductResponse,
              responses={400: {"model": S.ErrorResponse}})
    def subduct(req: S.SubductRequest):
        return core.handle_subduct(req)

    @app.post("/hyperdet", response_model=S.HyperdetResponse,
              responses={400: {"model": S.ErrorResponse}})
    def hyperdet(req: S.HyperdetRequest):
        return core.handle_hyperdet(req)

    @app.post("/lie-kernel", response_model=S.LieKernelResponse,
              responses={400: {"model": S.ErrorResponse}})
    def lie_kernel(req: S.LieKernelRequest):
        return core.handle_lie_kernel(req)

    return app


app = create_app()
