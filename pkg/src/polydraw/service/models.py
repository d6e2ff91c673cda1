"""Request/response schemas for the drawing service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class SelectFacetRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    marked: list[int] = Field(min_length=1)


class ZoomRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    zeta: float | str


class DragRequest(BaseModel):
    """Facet-vertex drags carry a displacement, non-facet drags a target;
    both are exact chart coordinates (floats or "p/q" strings)."""

    model_config = ConfigDict(extra="forbid")
    vertex: int
    displacement: list[float | str] | None = None
    target: list[float | str] | None = None


class SpringParamsRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    delta_rep: float | None = None
    delta_visc: float | None = None
    delta_lin: float | None = None
    rest_length: float | None = None
    step_scale: float | None = None
    threshold: float | None = None
    seed: int | None = None


class StepRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    count: int = Field(default=1, ge=1, le=100000)


class ErrorPayload(BaseModel):
    error: str
    detail: str


class CommandRecord(BaseModel):
    op: Literal["select_facet", "zoom", "drag", "params", "step"]
    payload: dict
