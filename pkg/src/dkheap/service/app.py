"""FastAPI service wrapping the heap library.

Besides one-shot endpoints for trace replay, fuzzing, benchmarking and
the rank-bound certificate, the service hosts named heap sessions so
multiple clients can drive long-lived heaps over HTTP.  Elements are
addressed by their insert ordinal (``ref``), mirroring the trace format.
"""

import threading
import uuid

from fastapi import FastAPI, HTTPException

from .. import audit as audit_mod
from ..bench import dijkstra_bench
from ..errors import DeadHandleError, HeapError, KeyOrderError, TraceFormatError
from ..harness import generate_trace, parse_trace, run_differential
from ..heap import Heap
from .models import (
    AuditResponse,
    BenchRequest,
    BenchResponse,
    CertRequest,
    CertResponse,
    CreateHeapRequest,
    ElementResponse,
    FuzzRequest,
    HeapCreated,
    InsertRequest,
    InsertResponse,
    DecreaseRequest,
    RunRequest,
    StatsModel,
    VerdictResponse,
)


class _Session:
    """One hosted heap plus the ref <-> handle bookkeeping."""

    def __init__(self, strategy, audit):
        self.heap = Heap(strategy=strategy, audit=audit)
        self.handles = []
        self.ref_of = {}

    def insert(self, key):
        handle = self.heap.insert(key)
        ref = len(self.handles)
        self.handles.append(handle)
        self.ref_of[handle] = ref
        return ref

    def decrease(self, ref, key):
        if not 0 <= ref < len(self.handles):
            raise HTTPException(status_code=400, detail=f"unknown ref {ref}")
        self.heap.decrease_key(self.handles[ref], key)

    def delete_min(self):
        popped = self.heap.delete_min()
        if popped is None:
            return ElementResponse(empty=True)
        key, handle = popped
        return ElementResponse(empty=False, key=key, ref=self.ref_of[handle])

    def find_min(self):
        handle = self.heap.find_min()
        if handle is None:
            return ElementResponse(empty=True)
        return ElementResponse(
            empty=False, key=self.heap.key_of(handle), ref=self.ref_of[handle]
        )


def create_app():
    app = FastAPI(
        title="dkheap service",
        description="Worst-case decrease-key heap: sessions, replay, "
        "fuzzing, benchmarking, certification.",
    )
    sessions: dict[str, _Session] = {}
    lock = threading.Lock()

    def _session(heap_id):
        session = sessions.get(heap_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"no heap {heap_id!r}")
        return session

    # -- one-shot tools -----------------------------------------------

    @app.post("/run", response_model=VerdictResponse)
    def run_trace(request: RunRequest):
        try:
            ops = parse_trace(request.trace)
        except TraceFormatError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        verdict = run_differential(
            ops,
            strategy=request.strategy,
            audit=request.audit,
            audit_stride=request.audit_stride,
        )
        return VerdictResponse.from_verdict(verdict)

    @app.post("/fuzz", response_model=VerdictResponse)
    def fuzz(request: FuzzRequest):
        try:
            ops = generate_trace(request.seed, request.ops, mix=request.mix)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        verdict = run_differential(
            ops,
            strategy=request.strategy,
            audit=request.audit,
            audit_stride=request.audit_stride,
        )
        return VerdictResponse.from_verdict(verdict)

    @app.post("/bench", response_model=BenchResponse)
    def bench(request: BenchRequest):
        try:
            verdict = dijkstra_bench(
                request.seed,
                request.vertices,
                request.edges,
                strategy=request.strategy,
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return BenchResponse(
            ok=verdict.ok,
            vertices=verdict.n_vertices,
            edges=verdict.n_edges,
            bad_vertex=verdict.bad_vertex,
            expected=verdict.expected,
            got=verdict.got,
            stats=StatsModel.from_stats(verdict.stats),
        )

    @app.post("/cert", response_model=CertResponse)
    def cert(request: CertRequest):
        ok = audit_mod.rank_bound_certificate(request.max_rank)
        return CertResponse(ok=ok, max_rank=request.max_rank)

    # -- heap sessions ------------------------------------------------

    @app.post("/heaps", response_model=HeapCreated)
    def create_heap(request: CreateHeapRequest):
        heap_id = uuid.uuid4().hex[:12]
        with lock:
            sessions[heap_id] = _Session(request.strategy, request.audit)
        return HeapCreated(
            heap_id=heap_id, strategy=request.strategy, audit=request.audit
        )

    @app.delete("/heaps/{heap_id}")
    def drop_heap(heap_id: str):
        with lock:
            if sessions.pop(heap_id, None) is None:
                raise HTTPException(status_code=404, detail=f"no heap {heap_id!r}")
        return {"dropped": heap_id}

    @app.post("/heaps/{heap_id}/insert", response_model=InsertResponse)
    def heap_insert(heap_id: str, request: InsertRequest):
        session = _session(heap_id)
        with lock:
            return InsertResponse(ref=session.insert(request.key))

    @app.post("/heaps/{heap_id}/decrease-key")
    def heap_decrease(heap_id: str, request: DecreaseRequest):
        session = _session(heap_id)
        with lock:
            try:
                session.decrease(request.ref, request.key)
            except KeyOrderError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            except DeadHandleError as exc:
                raise HTTPException(status_code=410, detail=str(exc))
        return {"ok": True}

    @app.post("/heaps/{heap_id}/delete-min", response_model=ElementResponse)
    def heap_delete_min(heap_id: str):
        session = _session(heap_id)
        with lock:
            return session.delete_min()

    @app.get("/heaps/{heap_id}/find-min", response_model=ElementResponse)
    def heap_find_min(heap_id: str):
        session = _session(heap_id)
        with lock:
            return session.find_min()

    @app.get("/heaps/{heap_id}/stats", response_model=StatsModel)
    def heap_stats(heap_id: str):
        session = _session(heap_id)
        with lock:
            return StatsModel.from_stats(session.heap.stats_snapshot())

    @app.post("/heaps/{heap_id}/audit", response_model=AuditResponse)
    def heap_audit(heap_id: str):
        session = _session(heap_id)
        with lock:
            report = audit_mod.check_structure(session.heap)
        phi_a, phi_l = report.phi_recomputed
        return AuditResponse(
            ok=report.ok,
            findings=[
                f"{name} at {handle}: {detail}"
                for name, handle, detail in report.violations_found
            ],
            max_rank=report.max_rank_observed,
            phi_a=phi_a,
            phi_l=phi_l,
        )

    return app


app = create_app()
