"""Pydantic request/response models for the computation service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class TensorPayload(BaseModel):
    """A tensor in the shared JSON format; no entries means symbolic."""

    m: int = Field(ge=1)
    n: int = Field(ge=1)
    entries: Optional[dict[str, str]] = None


class PencilRequest(BaseModel):
    n: int = Field(ge=1)
    method: Literal["subset", "interp", "both"] = "subset"
    tensor: Optional[TensorPayload] = None


class PencilCoefficient(BaseModel):
    k: int
    label: str
    polynomial: Optional[str] = None
    value: Optional[str] = None


class PencilResponse(BaseModel):
    n: int
    method: str
    coefficients: list[PencilCoefficient]
    methods_agree: Optional[bool] = None


class BlockDetRequest(BaseModel):
    m: int = Field(ge=1)
    n: int = Field(ge=1)
    tensor: Optional[TensorPayload] = None


class BlockDetResponse(BaseModel):
    m: int
    n: int
    verdict: Literal["generator", "trivial"]
    message: str
    polynomial: Optional[str] = None
    value: Optional[str] = None


class CounterexampleModel(BaseModel):
    sample_index: int
    tensor: dict
    value_before: str
    value_after: str


class CheckItem(BaseModel):
    name: str
    passed: bool
    counterexample: Optional[CounterexampleModel] = None


class CheckRequest(BaseModel):
    m: Optional[int] = None
    n: int = Field(ge=1)
    group: Literal["slsl", "slslsl"] = "slslsl"
    samples: int = Field(default=25, ge=1)
    seed: int = 0
    poly: Optional[str] = None
    target: Literal["auto", "pencil", "blockdet", "classical"] = "auto"


class CheckResponse(BaseModel):
    passed: bool
    group: str
    samples: int
    checks: list[CheckItem]


class SubductRequest(BaseModel):
    n: int = Field(ge=1)
    poly: str


class SubductResponse(BaseModel):
    n: int
    u: str
    remainder: str
    in_ring: bool


class HyperdetRequest(BaseModel):
    n: int = Field(ge=2, le=4)
    tensor: TensorPayload


class HyperdetResponse(BaseModel):
    n: int
    value: str
    degenerate: bool
    zero_form: bool
    u_form: str


class LieKernelRequest(BaseModel):
    m: int = Field(ge=1)
    n: int = Field(ge=1)
    degree: int = Field(ge=0)
    parts: list[Literal["sl_m", "sl_n", "sl_2"]] = ["sl_m", "sl_n", "sl_2"]


class LieKernelResponse(BaseModel):
    m: int
    n: int
    degree: int
    parts: list[str]
    dimension: int
    basis: list[str]


class ErrorResponse(BaseModel):
    detail: str
