"""Priority queue with worst-case constant-time decrease-key.

The heap keeps a single heap-ordered tree between public operations.
Arity stays logarithmic because almost all links are *rank* links between
equal-rank nodes; the two unavoidable violation kinds are tracked
explicitly and repaired eagerly:

  * type A - nonrank roots: the tree root and children attached by a
    comparison of unequal-rank nodes;
  * type L - rank children that lost rank children of their own (subtype
    L1 for loss one, L2 for loss two or more).

Pending violations sit on two stacks; a reduction step pops one entry and
either discards it (stale), parks it in a rank-indexed array, or pairs it
with an equal-rank partner from the array and links the two.  Every step
lowers the combined potential phi_a + phi_l by at least one, which is what
makes constant per-operation reduction budgets sufficient.

Three stack-processing strategies are provided:

  * ``amortized`` - drain both stacks on every operation;
  * ``wc1``       - reduce while the potential delta accumulated since the
                    operation started is positive;
  * ``wc2``       - run a fixed, precomputed number of reduction steps per
                    operation.

All three produce identical extraction order; they differ only in how the
repair work is scheduled.  ``delete_min`` always drains the stacks fully,
which is where its O(log n) budget lives.
"""

import math
from dataclasses import dataclass, replace

from . import audit as audit_mod
from .core_store import (
    SUB_A,
    SUB_L1,
    SUB_L2,
    SUB_N,
    TYPE_A,
    TYPE_L,
    TYPE_OF,
    NodeStore,
    SiblingList,
    list_insert_leftmost,
    list_remove,
)
from .errors import AuditFailure, ContractError, KeyOrderError
from .registry import Registry

AMORTIZED = "amortized"
WC1 = "wc1"
WC2 = "wc2"
STRATEGIES = (AMORTIZED, WC1, WC2)

AUDIT_OFF = "off"
AUDIT_BOUNDARY = "boundary"
AUDIT_PARANOID = "paranoid"
AUDIT_LEVELS = (AUDIT_OFF, AUDIT_BOUNDARY, AUDIT_PARANOID)

# Operation context for reduction planning.
CTX_INSERT = "insert"
CTX_DECREASE = "decrease"
CTX_DELETE = "delete"
CTX_FINDMIN = "find_min"

# Fixed reduction budgets of the second worst-case strategy, keyed by
# (context, phase) -> (c_l steps, c_a steps).  A bare find_min reuses the
# insert plan.  delete_min always drains amortized-style.
_WC2_BUDGETS = {
    (CTX_DECREASE, 1): (5, 18),
    (CTX_DECREASE, 3): (0, 1),
    (CTX_INSERT, 1): (0, 2),
    (CTX_INSERT, 3): (0, 1),
    (CTX_FINDMIN, 1): (0, 2),
    (CTX_FINDMIN, 3): (0, 1),
}

# Audit-mode per-op budgets of the first worst-case strategy.
_WC1_LIMITS = {CTX_DECREASE: (5, 8), CTX_INSERT: (0, 3), CTX_FINDMIN: (0, 3)}
_WC2_LIMITS = {CTX_DECREASE: (5, 19), CTX_INSERT: (0, 3), CTX_FINDMIN: (0, 3)}

# Per-call potential bounds of the private methods (paranoid audits).
_SVS_PHI_BOUND = {SUB_A: 2, SUB_L1: 4, SUB_L2: 5, SUB_N: 0}

_DECREMENT_PRESCRIPTION = {SUB_A: SUB_A, SUB_N: SUB_L1, SUB_L1: SUB_L2}


def rank_bound(n):
    """Largest rank admissible for a heap of ``n`` >= 1 nodes."""
    return int(math.floor(4 + 1.2 * math.log2(n)))


@dataclass
class Stats:
    """Monotone per-heap counters plus point-in-time gauges."""

    n: int = 0
    max_rank: int = 0
    phi_a: int = 0
    phi_l: int = 0
    comparisons: int = 0
    reductions_ca: int = 0
    reductions_cl: int = 0
    structural_mutations: int = 0
    registry_mutations: int = 0

    FIELD_ORDER = (
        "n",
        "max_rank",
        "phi_a",
        "phi_l",
        "comparisons",
        "reductions_ca",
        "reductions_cl",
        "structural_mutations",
        "registry_mutations",
    )


class Heap:
    """A decrease-key heap over a totally ordered key universe.

    Ties between equal keys are broken by insertion order, so extraction
    order is deterministic and identical across strategies.
    """

    def __init__(
        self,
        strategy=AMORTIZED,
        audit=AUDIT_OFF,
        track_loss=True,
        record_decisions=False,
        audit_stride=1,
    ):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}")
        if audit not in AUDIT_LEVELS:
            raise ValueError(f"unknown audit level {audit!r}")
        self.strategy = strategy
        self.audit = audit
        self.audit_stride = max(1, audit_stride)
        self.store = NodeStore()
        self.registry = Registry(track_loss=track_loss)
        self.roots = SiblingList()
        self.stats = Stats()
        self.decision_log = [] if record_decisions else None
        # Per-operation reduction counters and their observed maxima.
        self._op_cl = 0
        self._op_ca = 0
        self._op_count = 0
        self.op_reduction_max = {
            (kind, chan): 0
            for kind in (CTX_INSERT, CTX_DECREASE, CTX_DELETE, CTX_FINDMIN)
            for chan in ("cl", "ca")
        }
        # Potential snapshots for the first worst-case strategy.
        self._snap_a = 0
        self._snap_l = 0
        self._snap2_a = 0
        self._snap2_l = 0

    # ------------------------------------------------------------------
    # public interface
    # ------------------------------------------------------------------

    @property
    def n(self):
        return self.store.live_count

    def set_audit(self, level, stride=None):
        if level not in AUDIT_LEVELS:
            raise ValueError(f"unknown audit level {level!r}")
        self.audit = level
        if stride is not None:
            self.audit_stride = max(1, stride)

    def insert(self, key):
        """Add ``key``; returns a handle for later decrease_key."""
        self._begin_op()
        node = self.store.allocate(key)
        list_insert_leftmost(self.roots, node)
        self.stats.structural_mutations += 1
        if self.decision_log is not None:
            self.decision_log.append(("op", "insert", node.seq))
        self._find_min(CTX_INSERT)
        self._end_op(CTX_INSERT)
        return node.handle()

    def find_min(self):
        """Handle of the minimum element, or None on an empty heap."""
        self._begin_op()
        if self.decision_log is not None:
            self.decision_log.append(("op", "find_min"))
        root = self._find_min(CTX_FINDMIN)
        self._end_op(CTX_FINDMIN)
        return None if root is None else root.handle()

    def decrease_key(self, handle, key):
        """Lower the key of a live element; the new key must be smaller."""
        node = self.store.deref(handle)
        if not key < node.key:
            raise KeyOrderError(
                f"new key {key!r} is not strictly below {node.key!r}"
            )
        self._begin_op()
        if self.decision_log is not None:
            self.decision_log.append(("op", "decrease", node.seq))
        self._cut_from_parent(node)
        list_insert_leftmost(self.roots, node)
        self.stats.structural_mutations += 1
        node.key = key
        self._find_min(CTX_DECREASE)
        self._end_op(CTX_DECREASE)

    def delete_min(self):
        """Remove and return ``(key, handle)`` of the minimum, or None.

        The returned handle is dead; it identifies which element left.
        """
        rho = self.roots.head
        if rho is None:
            return None
        self._begin_op()
        n_entry = self.store.live_count
        if self.decision_log is not None:
            self.decision_log.append(("op", "delete", rho.seq))
        # The root list becomes rho's child list; phase 0 of find_min
        # clears the children's parent pointers.
        self.roots.head = rho.children.head
        rho.children.head = None
        self.stats.structural_mutations += 1
        self._svs(rho, SUB_N)
        self._find_min(CTX_DELETE)
        key = rho.key
        handle = rho.handle()
        self.store.free(rho)
        if self.audit != AUDIT_OFF:
            budget = 6 * rank_bound(n_entry) + 7
            if self._op_cl + self._op_ca > budget:
                raise AuditFailure(
                    f"delete_min ran {self._op_cl + self._op_ca} reductions, "
                    f"budget {budget} at n={n_entry}"
                )
        self._end_op(CTX_DELETE)
        return key, handle

    def key_of(self, handle):
        return self.store.deref(handle).key

    def is_live(self, handle):
        return self.store.is_live(handle)

    def stats_snapshot(self):
        """Copy of the counters with current gauges filled in."""
        snap = replace(self.stats)
        snap.n = self.store.live_count
        snap.phi_a = self.registry.phi_a
        snap.phi_l = self.registry.phi_l
        snap.registry_mutations = self.registry.mutations
        return snap

    # ------------------------------------------------------------------
    # private methods
    # ------------------------------------------------------------------

    def _svs(self, node, new):
        """set_violation_subtype with paranoid potential-bound check."""
        if self.decision_log is not None:
            self.decision_log.append(("svt", node.seq, node.subtype, new))
        if self.audit == AUDIT_PARANOID:
            before = self.registry.phi_total()
            self.registry.set_violation_subtype(node, new)
            delta = self.registry.phi_total() - before
            if delta > _SVS_PHI_BOUND[new]:
                raise AuditFailure(
                    f"set_violation_subtype({new}) raised phi by {delta}"
                )
        else:
            self.registry.set_violation_subtype(node, new)

    def _decrement_rank(self, x):
        """Rank loss of ``x``: subtype follows (A->A),(N->L1),(L1->L2)."""
        if x.rank < 1:
            raise ContractError("rank underflow")
        paranoid = self.audit == AUDIT_PARANOID
        before = self.registry.phi_total() if paranoid else 0
        if x.subtype != SUB_L2:
            self._svs(x, _DECREMENT_PRESCRIPTION[x.subtype])
        else:
            self.registry.bump_l2_loss(x)
        x.rank -= 1
        if paranoid and self.registry.phi_total() - before > 5:
            raise AuditFailure("decrement_rank raised phi by more than 5")

    def _cut_from_parent(self, c):
        """Detach ``c``; a non-A child costs its parent one rank."""
        paranoid = self.audit == AUDIT_PARANOID
        before = self.registry.phi_total() if paranoid else 0
        p = c.parent
        if p is not None:
            if c.subtype != SUB_A:
                self._decrement_rank(p)
            list_remove(p.children, c)
            c.parent = None
        else:
            list_remove(self.roots, c)
        self.stats.structural_mutations += 1
        if paranoid and self.registry.phi_total() - before > 5:
            raise AuditFailure("cut_from_parent raised phi by more than 5")

    def _link(self, x, y):
        """Link two equal-subtype nodes; returns the surviving parent."""
        paranoid = self.audit == AUDIT_PARANOID
        if paranoid:
            if x is y:
                raise ContractError("link of a node with itself")
            if x.subtype != y.subtype or x.subtype not in (SUB_A, SUB_L1):
                raise ContractError("link subtype precondition")
            if x.subtype == SUB_L1 and x.rank != y.rank:
                raise ContractError("L1 link requires equal ranks")
            before = self.registry.phi_total()
        self.stats.comparisons += 1
        if (x.key, x.seq) < (y.key, y.seq):
            s, h = x, y
        else:
            s, h = y, x
        if self.decision_log is not None:
            self.decision_log.append(("lnk", s.seq, h.seq))
        self._cut_from_parent(h)
        list_insert_leftmost(s.children, h)
        h.parent = s
        self.stats.structural_mutations += 1
        target_h = SUB_N if s.rank <= h.rank else SUB_A
        if h.subtype != target_h:
            self._svs(h, target_h)
        if target_h == SUB_N:
            # (A->A),(L1->N); s can be L2 here only when h was s's own
            # rank child and the cut above just bumped s - then N too.
            target_s = SUB_A if s.subtype == SUB_A else SUB_N
            self._svs(s, target_s)
            s.rank += 1
            if s.rank > self.stats.max_rank:
                self.stats.max_rank = s.rank
            self.registry.ensure_capacity(s.rank)
        if paranoid and self.registry.phi_total() - before > 5:
            raise AuditFailure("link raised phi by more than 5")
        return s

    # ------------------------------------------------------------------
    # reduction steps
    # ------------------------------------------------------------------

    def _reduce_ca_once(self):
        reg = self.registry
        before = reg.phi_total()
        node, _live = reg.stack_pop(TYPE_A)
        if node is None:
            return "stack_empty"
        self._op_ca += 1
        self.stats.reductions_ca += 1
        if TYPE_OF[node.subtype] != TYPE_A:
            outcome = "discarded_stale"
        else:
            slot = reg.array_slot(TYPE_A, node.rank)
            if slot is node:
                outcome = "discarded_duplicate"
            elif slot is None:
                reg.array_park(TYPE_A, node)
                outcome = "parked_in_array"
            else:
                reg.array_clear(TYPE_A, node.rank)
                self._link(node, slot)
                outcome = "linked"
        if self.decision_log is not None:
            self.decision_log.append(("rca", outcome))
        if self.audit == AUDIT_PARANOID and reg.phi_total() > before - 1:
            raise AuditFailure(
                f"c_a reduction ({outcome}) did not lower phi by 1"
            )
        return outcome

    def _reduce_cl_once(self):
        reg = self.registry
        before = reg.phi_total()
        node, live = reg.stack_pop(TYPE_L)
        if node is None:
            return "stack_empty"
        self._op_cl += 1
        self.stats.reductions_cl += 1
        if TYPE_OF[node.subtype] != TYPE_L:
            outcome = "discarded_stale"
        elif reg.array_slot(TYPE_L, node.rank) is node:
            outcome = "discarded_duplicate"
        elif node.subtype == SUB_L2:
            # One-node loss reduction: the L2 node becomes a nonrank
            # child of its parent, which loses a rank child.
            if self.audit == AUDIT_PARANOID and (not live or node.parent is None):
                raise AuditFailure("live L2 entry without a parent")
            parent = node.parent
            self._svs(node, SUB_A)
            self._decrement_rank(parent)
            outcome = "loss_reduced_L2"
        else:  # SUB_L1
            slot = reg.array_slot(TYPE_L, node.rank)
            if slot is None:
                reg.array_park(TYPE_L, node)
                outcome = "parked_in_array"
            else:
                reg.array_clear(TYPE_L, node.rank)
                if slot.parent is node or node.parent is slot:
                    # The partners already share a rank edge: linking
                    # would detach and re-attach the same edge, so only
                    # the loss cancellation remains to be done.
                    self._svs(node, SUB_N)
                    self._svs(slot, SUB_N)
                else:
                    self._link(node, slot)
                outcome = "linked_L1"
        if self.decision_log is not None:
            self.decision_log.append(("rcl", outcome))
        if self.audit == AUDIT_PARANOID and reg.phi_total() > before - 1:
            raise AuditFailure(
                f"c_l reduction ({outcome}) did not lower phi by 1"
            )
        return outcome

    def _run_reductions(self, phase, ctx):
        """Dispatch reduction work per the active strategy.

        c_l reductions always run before c_a reductions: the former can
        push onto c_a but never the other way around.
        """
        reg = self.registry
        strategy = AMORTIZED if ctx == CTX_DELETE else self.strategy
        if strategy == AMORTIZED:
            while reg.c_l:
                self._reduce_cl_once()
            while reg.c_a:
                self._reduce_ca_once()
        elif strategy == WC1:
            if phase == 1:
                base_l, base_a = self._snap_l, self._snap_a
            else:
                # Phase 3 answers for the potential change of phase 2 only.
                base_l, base_a = self._snap2_l, self._snap2_a
            while reg.phi_l > base_l and reg.c_l:
                self._reduce_cl_once()
            while reg.phi_a > base_a and reg.c_a:
                self._reduce_ca_once()
        else:  # WC2
            budget_ctx = CTX_INSERT if ctx == CTX_FINDMIN else ctx
            cl_budget, ca_budget = _WC2_BUDGETS[(budget_ctx, phase)]
            for _ in range(cl_budget):
                if not reg.c_l:
                    break
                self._reduce_cl_once()
            for _ in range(ca_budget):
                if not reg.c_a:
                    break
                self._reduce_ca_once()

    # ------------------------------------------------------------------
    # find_min phases
    # ------------------------------------------------------------------

    def _find_min(self, ctx):
        roots = self.roots
        # Phase 0: every root becomes a plain nonrank root of subtype A.
        x = roots.head
        while x is not None:
            x.parent = None
            if x.subtype != SUB_A:
                self._svs(x, SUB_A)
            x = x.right
        # Phase 1: scheduled reduction work.
        self._run_reductions(1, ctx)
        # Phase 2: circular leftward sweep linking neighboring roots.
        self._snap2_a = self.registry.phi_a
        self._snap2_l = self.registry.phi_l
        if roots.head is not None:
            cur = roots.head
            while roots.head.left is not roots.head:
                s = self._link(cur, cur.left)
                cur = s.left
        # Phase 3: answer for the potential raised by the sweep.
        self._run_reductions(3, ctx)
        return roots.head

    # ------------------------------------------------------------------
    # per-operation bookkeeping and audits
    # ------------------------------------------------------------------

    def _begin_op(self):
        self._op_cl = 0
        self._op_ca = 0
        self._op_count += 1
        if self.strategy == WC1:
            self._snap_a = self.registry.phi_a
            self._snap_l = self.registry.phi_l

    def _end_op(self, kind):
        maxima = self.op_reduction_max
        if self._op_cl > maxima[(kind, "cl")]:
            maxima[(kind, "cl")] = self._op_cl
        if self._op_ca > maxima[(kind, "ca")]:
            maxima[(kind, "ca")] = self._op_ca
        if self.audit == AUDIT_OFF:
            return
        if kind != CTX_DELETE and self.strategy in (WC1, WC2):
            limits = _WC1_LIMITS if self.strategy == WC1 else _WC2_LIMITS
            max_cl, max_ca = limits[kind]
            if self._op_cl > max_cl or self._op_ca > max_ca:
                raise AuditFailure(
                    f"{kind} under {self.strategy} ran "
                    f"{self._op_cl} c_l + {self._op_ca} c_a reductions "
                    f"(budget {max_cl}+{max_ca})"
                )
        if self._op_count % self.audit_stride == 0:
            self._boundary_audit(kind)

    def _boundary_audit(self, kind):
        report = audit_mod.check_structure(self)
        if report.violations_found:
            name, handle, detail = report.violations_found[0]
            raise AuditFailure(
                f"after {kind}: {len(report.violations_found)} finding(s), "
                f"first: {name} at {handle}: {detail}"
            )
        phi_a, phi_l = audit_mod.recompute_phi(self)
        if (phi_a, phi_l) != (self.registry.phi_a, self.registry.phi_l):
            raise AuditFailure(
                f"after {kind}: phi drift, incremental "
                f"({self.registry.phi_a}, {self.registry.phi_l}) vs "
                f"recomputed ({phi_a}, {phi_l})"
            )
        if self.store.live_count and not audit_mod.check_rank_bound(self):
            raise AuditFailure(f"after {kind}: rank bound exceeded")


def make_heap(strategy=AMORTIZED, audit=AUDIT_OFF, **kwargs):
    """Factory mirroring the construction-time strategy selection."""
    return Heap(strategy=strategy, audit=audit, **kwargs)
