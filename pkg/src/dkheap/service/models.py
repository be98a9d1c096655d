"""Pydantic request/response models for the heap service."""

from typing import Literal, Optional

from pydantic import BaseModel, Field

Strategy = Literal["amortized", "wc1", "wc2"]
AuditLevel = Literal["off", "boundary", "paranoid"]


class StatsModel(BaseModel):
    n: int
    max_rank: int
    phi_a: int
    phi_l: int
    comparisons: int
    reductions_ca: int
    reductions_cl: int
    structural_mutations: int
    registry_mutations: int

    @classmethod
    def from_stats(cls, stats):
        return cls(**{name: getattr(stats, name) for name in cls.model_fields})


# -- trace replay / fuzzing -------------------------------------------------


class RunRequest(BaseModel):
    trace: str = Field(description="trace text, one op per line")
    strategy: Strategy = "amortized"
    audit: AuditLevel = "boundary"
    audit_stride: int = Field(default=1, ge=1)


class FuzzRequest(BaseModel):
    seed: int = 0
    ops: int = Field(default=1000, ge=1)
    strategy: Strategy = "amortized"
    audit: AuditLevel = "boundary"
    audit_stride: int = Field(default=1, ge=1)
    mix: Optional[dict[str, float]] = None


class VerdictResponse(BaseModel):
    ok: bool
    compared: int = 0
    op_index: Optional[int] = None
    expected: Optional[tuple[int, int]] = None
    got: Optional[tuple[int, int]] = None
    detail: str = ""
    stats: StatsModel

    @classmethod
    def from_verdict(cls, verdict):
        return cls(
            ok=verdict.ok,
            compared=verdict.compared,
            op_index=verdict.op_index,
            expected=verdict.expected,
            got=verdict.got,
            detail=verdict.detail,
            stats=StatsModel.from_stats(verdict.stats),
        )


# -- benchmark and certificate ----------------------------------------------


class BenchRequest(BaseModel):
    seed: int = 0
    vertices: int = Field(default=1000, ge=1)
    edges: int = Field(default=5000, ge=0)
    strategy: Strategy = "amortized"


class BenchResponse(BaseModel):
    ok: bool
    vertices: int
    edges: int
    bad_vertex: Optional[int] = None
    expected: Optional[int] = None
    got: Optional[int] = None
    stats: StatsModel


class CertRequest(BaseModel):
    max_rank: int = Field(default=60, ge=1, le=62)


class CertResponse(BaseModel):
    ok: bool
    max_rank: int


# -- heap sessions -----------------------------------------------------------


class CreateHeapRequest(BaseModel):
    strategy: Strategy = "amortized"
    audit: AuditLevel = "off"


class HeapCreated(BaseModel):
    heap_id: str
    strategy: Strategy
    audit: AuditLevel


class InsertRequest(BaseModel):
    key: int


class InsertResponse(BaseModel):
    ref: int


class DecreaseRequest(BaseModel):
    ref: int
    key: int


class ElementResponse(BaseModel):
    """Result of find-min / delete-min; empty=True means an empty heap."""

    empty: bool
    key: Optional[int] = None
    ref: Optional[int] = None


class AuditResponse(BaseModel):
    ok: bool
    findings: list[str]
    max_rank: int
    phi_a: int
    phi_l: int
