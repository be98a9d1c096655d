"""Differential-testing harness: oracle, trace generation, replay.

The oracle is a lazy-deletion binary heap over (key, seq) pairs with the
same insertion-order tie-break as the real heap, so extraction sequences
can be compared exactly, element by element.
"""

import heapq
import random
from dataclasses import dataclass

from .errors import ContractError, KeyOrderError, TraceFormatError
from .heap import AMORTIZED, AUDIT_BOUNDARY, Heap

OP_INSERT = "I"
OP_DECREASE = "K"
OP_DELETE_MIN = "D"
OP_FIND_MIN = "F"

_INT64_MIN = -(1 << 63)
_INT64_MAX = (1 << 63) - 1

_KEY_SPAN = 1 << 40
_DECREASE_SPAN = 1 << 20

DEFAULT_MIX = {"insert": 0.5, "decrease": 0.25, "delete": 0.25, "find": 0.0}


@dataclass(frozen=True)
class TraceOp:
    """One scripted operation; ``ref`` is a 0-based insert ordinal."""

    kind: str
    key: int = None
    ref: int = None


class OracleHeap:
    """Reference semantics: an ordered multiset of (key, seq)."""

    def __init__(self):
        self._pq = []
        self._key = {}
        self._next_seq = 0

    def __len__(self):
        return len(self._key)

    def insert(self, key):
        seq = self._next_seq
        self._next_seq += 1
        self._key[seq] = key
        heapq.heappush(self._pq, (key, seq))
        return seq

    def current_key(self, seq):
        return self._key[seq]

    def is_live(self, seq):
        return seq in self._key

    def decrease(self, seq, key):
        if seq not in self._key:
            raise ContractError(f"ref {seq} is not live")
        if not key < self._key[seq]:
            raise KeyOrderError(
                f"new key {key!r} is not below {self._key[seq]!r}"
            )
        self._key[seq] = key
        heapq.heappush(self._pq, (key, seq))

    def _settle(self):
        while self._pq:
            key, seq = self._pq[0]
            if self._key.get(seq) == key:
                return key, seq
            heapq.heappop(self._pq)
        return None

    def find_min(self):
        return self._settle()

    def delete_min(self):
        top = self._settle()
        if top is None:
            return None
        heapq.heappop(self._pq)
        del self._key[top[1]]
        return top


def oracle_apply(oracle, op):
    """Apply one trace op to the oracle; returns the observed result."""
    if op.kind == OP_INSERT:
        return oracle.insert(op.key)
    if op.kind == OP_DECREASE:
        oracle.decrease(op.ref, op.key)
        return None
    if op.kind == OP_DELETE_MIN:
        return oracle.delete_min()
    if op.kind == OP_FIND_MIN:
        return oracle.find_min()
    raise ContractError(f"unknown op kind {op.kind!r}")


def generate_trace(seed, n_ops, mix=None):
    """Deterministic random trace of ``n_ops`` valid operations.

    Operations that would be invalid in the current state (decrease with
    no live element, delete on an empty heap) are replaced by inserts, so
    every generated trace replays cleanly.
    """
    if n_ops < 1:
        raise ValueError("n_ops must be >= 1")
    weights = dict(DEFAULT_MIX)
    if mix:
        weights.update(mix)
    total = sum(weights.values())
    if total <= 0:
        raise ValueError("mix ratios must sum to a positive value")
    if abs(total - 1.0) > 1e-9:
        weights = {k: v / total for k, v in weights.items()}

    rng = random.Random(seed)
    oracle = OracleHeap()
    live = []
    pos = {}
    ops = []

    t_insert = weights["insert"]
    t_decrease = t_insert + weights["decrease"]
    t_delete = t_decrease + weights["delete"]

    def _forget(seq):
        idx = pos.pop(seq)
        last = live[-1]
        live[idx] = last
        if last != seq:
            pos[last] = idx
        live.pop()

    for _ in range(n_ops):
        r = rng.random()
        if r < t_insert:
            kind = "insert"
        elif r < t_decrease:
            kind = "decrease" if live else "insert"
        elif r < t_delete:
            kind = "delete" if live else "insert"
        else:
            kind = "find"

        if kind == "insert":
            key = rng.randrange(_KEY_SPAN)
            seq = oracle.insert(key)
            pos[seq] = len(live)
            live.append(seq)
            ops.append(TraceOp(OP_INSERT, key=key))
        elif kind == "decrease":
            seq = live[rng.randrange(len(live))]
            new_key = oracle.current_key(seq) - rng.randrange(1, _DECREASE_SPAN)
            oracle.decrease(seq, new_key)
            ops.append(TraceOp(OP_DECREASE, key=new_key, ref=seq))
        elif kind == "delete":
            _key, seq = oracle.delete_min()
            _forget(seq)
            ops.append(TraceOp(OP_DELETE_MIN))
        else:
            ops.append(TraceOp(OP_FIND_MIN))
    return ops


# ----------------------------------------------------------------------
# trace file grammar: one op per line, '#' starts a comment
#   I <int>          insert
#   K <ref> <int>    decrease-key (ref = 0-based insert ordinal)
#   D                delete-min
#   F                find-min
# ----------------------------------------------------------------------


def _parse_int(token, lineno, what):
    try:
        value = int(token)
    except ValueError:
        raise TraceFormatError(lineno, f"{what} {token!r} is not an integer")
    if not _INT64_MIN <= value <= _INT64_MAX:
        raise TraceFormatError(lineno, f"{what} {value} outside signed 64-bit")
    return value


def parse_trace(text):
    ops = []
    inserts = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == OP_INSERT:
            if len(parts) != 2:
                raise TraceFormatError(lineno, "I takes exactly one integer")
            ops.append(TraceOp(OP_INSERT, key=_parse_int(parts[1], lineno, "key")))
            inserts += 1
        elif kind == OP_DECREASE:
            if len(parts) != 3:
                raise TraceFormatError(lineno, "K takes a ref and a key")
            ref = _parse_int(parts[1], lineno, "ref")
            if not 0 <= ref < inserts:
                raise TraceFormatError(
                    lineno, f"ref {ref} does not name a previous insert"
                )
            ops.append(
                TraceOp(OP_DECREASE, key=_parse_int(parts[2], lineno, "key"), ref=ref)
            )
        elif kind == OP_DELETE_MIN:
            if len(parts) != 1:
                raise TraceFormatError(lineno, "D takes no arguments")
            ops.append(TraceOp(OP_DELETE_MIN))
        elif kind == OP_FIND_MIN:
            if len(parts) != 1:
                raise TraceFormatError(lineno, "F takes no arguments")
            ops.append(TraceOp(OP_FIND_MIN))
        else:
            raise TraceFormatError(lineno, f"unknown op {kind!r}")
    return ops


def format_trace(ops):
    lines = []
    for op in ops:
        if op.kind == OP_INSERT:
            lines.append(f"I {op.key}")
        elif op.kind == OP_DECREASE:
            lines.append(f"K {op.ref} {op.key}")
        else:
            lines.append(op.kind)
    return "\n".join(lines) + ("\n" if lines else "")


@dataclass
class DiffVerdict:
    ok: bool
    op_index: int = None
    expected: object = None
    got: object = None
    detail: str = ""
    stats: object = None
    compared: int = 0

    def describe(self):
        if self.ok:
            return f"pass ({self.compared} extractions compared)"
        if self.detail:
            return f"fail at op {self.op_index}: {self.detail}"
        return (
            f"fail at op {self.op_index}: expected {self.expected}, "
            f"got {self.got}"
        )


def run_differential(
    trace,
    strategy=AMORTIZED,
    audit=AUDIT_BOUNDARY,
    audit_stride=1,
    heap=None,
):
    """Replay ``trace`` on heap and oracle, comparing every observation."""
    from .errors import HeapError

    if heap is None:
        heap = Heap(strategy=strategy, audit=audit, audit_stride=audit_stride)
    oracle = OracleHeap()
    handles = []
    ref_of = {}
    compared = 0

    def _observed(pair):
        if pair is None:
            return None
        key, handle = pair
        return key, ref_of[handle]

    for index, op in enumerate(trace):
        try:
            if op.kind == OP_INSERT:
                handle = heap.insert(op.key)
                ref_of[handle] = len(handles)
                handles.append(handle)
                oracle.insert(op.key)
            elif op.kind == OP_DECREASE:
                heap.decrease_key(handles[op.ref], op.key)
                oracle.decrease(op.ref, op.key)
            elif op.kind == OP_DELETE_MIN:
                got = _observed(heap.delete_min())
                expected = oracle.delete_min()
                compared += 1
                if got != expected:
                    return DiffVerdict(
                        False, index, expected, got,
                        stats=heap.stats_snapshot(), compared=compared,
                    )
            else:  # OP_FIND_MIN
                handle = heap.find_min()
                got = None
                if handle is not None:
                    got = (heap.key_of(handle), ref_of[handle])
                expected = oracle.find_min()
                compared += 1
                if got != expected:
                    return DiffVerdict(
                        False, index, expected, got,
                        stats=heap.stats_snapshot(), compared=compared,
                    )
        except HeapError as exc:
            return DiffVerdict(
                False, index, detail=f"{type(exc).__name__}: {exc}",
                stats=heap.stats_snapshot(), compared=compared,
            )
    return DiffVerdict(True, stats=heap.stats_snapshot(), compared=compared)


def emit_stats(stats):
    """Machine-parseable key=value record, one counter per line."""
    lines = [f"{name}={getattr(stats, name)}" for name in type(stats).FIELD_ORDER]
    return "\n".join(lines) + "\n"
