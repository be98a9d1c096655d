"""Read-only verification of heap state.

``check_structure`` re-derives every structural invariant from scratch and
reports findings instead of raising, so fault-injection tests can count
them.  ``recompute_phi`` rebuilds both potentials by full scans and is
compared against the incrementally maintained counters.

``minimal_tree_size`` and ``rank_bound_certificate`` numerically certify
the logarithmic rank bound: a rank-R tree that suffered total loss L
cannot shrink below the size obtained by greedily cutting the L largest
grandchild subtrees of a rank-R binomial tree, and that size stays above
2^((R-4)/1.2) for L = R + 1.
"""

import itertools
import math
from dataclasses import dataclass, field

from .core_store import (
    LOC_ARRAY,
    LOC_NONE,
    LOC_STACK,
    SUB_A,
    SUB_L1,
    SUB_L2,
    SUB_N,
    SUBTYPE_NAMES,
    TYPE_A,
    TYPE_L,
    TYPE_OF,
)

_MAX_RANK_ARG = 62


@dataclass
class AuditReport:
    violations_found: list = field(default_factory=list)
    max_rank_observed: int = 0
    phi_recomputed: tuple = (0, 0)

    @property
    def ok(self):
        return not self.violations_found


def _check_sibling_list(lst, owner_desc, findings):
    """Validate cyclic-left/acyclic-right shape; returns members in order."""
    members = []
    x = lst.head
    seen = set()
    while x is not None:
        if id(x) in seen:
            findings.append(
                ("sibling_cycle", x.handle(), f"right links of {owner_desc} cycle")
            )
            return members
        seen.add(id(x))
        members.append(x)
        x = x.right
    if not members:
        return members
    head = members[0]
    if head.left is not members[-1]:
        findings.append(
            (
                "sibling_shape",
                head.handle(),
                f"head.left of {owner_desc} is not the rightmost member",
            )
        )
    for prev, cur in zip(members, members[1:]):
        if cur.left is not prev:
            findings.append(
                (
                    "sibling_shape",
                    cur.handle(),
                    f"left link inconsistent in {owner_desc}",
                )
            )
    return members


def check_structure(heap):
    """Full structural audit of a quiescent heap at a public boundary."""
    findings = []
    reg = heap.registry
    store = heap.store
    track_loss = reg.track_loss

    roots = _check_sibling_list(heap.roots, "root list", findings)
    if len(roots) > 1:
        findings.append(
            ("single_tree", roots[1].handle(), f"{len(roots)} trees at boundary")
        )

    seen = {}
    max_rank = 0
    stack = [(r, None) for r in roots]
    while stack:
        node, parent = stack.pop()
        if id(node) in seen:
            findings.append(("tree_shape", node.handle(), "node reached twice"))
            continue
        seen[id(node)] = node
        if node.rank > max_rank:
            max_rank = node.rank
        if node.parent is not parent:
            findings.append(
                ("parent_link", node.handle(), "parent pointer mismatch")
            )
        if parent is not None and not (
            (parent.key, parent.seq) < (node.key, node.seq)
        ):
            findings.append(
                (
                    "heap_order",
                    node.handle(),
                    f"parent key {parent.key!r} not below child {node.key!r}",
                )
            )
        if parent is None and node.subtype != SUB_A:
            findings.append(
                (
                    "root_subtype",
                    node.handle(),
                    f"root has subtype {SUBTYPE_NAMES[node.subtype]}",
                )
            )
        if node.subtype in (SUB_L1, SUB_L2) and parent is None:
            findings.append(
                ("loss_at_root", node.handle(), "loss violation without parent")
            )
        if track_loss:
            expected = {SUB_N: (0, 0), SUB_A: (0, 0), SUB_L1: (1, 1)}.get(
                node.subtype
            )
            if expected is not None:
                lo, hi = expected
                if not lo <= node.loss <= hi:
                    findings.append(
                        (
                            "loss_consistency",
                            node.handle(),
                            f"{SUBTYPE_NAMES[node.subtype]} with loss {node.loss}",
                        )
                    )
            elif node.loss < 2:
                findings.append(
                    ("loss_consistency", node.handle(), f"L2 with loss {node.loss}")
                )
        children = _check_sibling_list(
            node.children, f"children of seq {node.seq}", findings
        )
        rank_children = sum(1 for c in children if c.subtype != SUB_A)
        if node.rank != rank_children:
            findings.append(
                (
                    "rank_consistency",
                    node.handle(),
                    f"rank {node.rank}, rank children {rank_children}",
                )
            )
        for c in children:
            stack.append((c, node))

    if len(seen) != store.live_count:
        findings.append(
            (
                "node_count",
                roots[0].handle() if roots else None,
                f"reached {len(seen)} nodes, store holds {store.live_count}",
            )
        )

    # Registry consistency.
    stack_members = {TYPE_A: set(), TYPE_L: set()}
    for typ, stck in ((TYPE_A, reg.c_a), (TYPE_L, reg.c_l)):
        for entry in stck:
            stack_members[typ].add(id(entry))
            if id(entry) not in seen:
                findings.append(
                    ("stack_entry", entry.handle(), "stack entry not in heap")
                )

    parked = set()
    for typ, arr, sub_ok in (
        (TYPE_A, reg.r_a, (SUB_A,)),
        (TYPE_L, reg.r_l, (SUB_L1,)),
    ):
        name = "r_a" if typ == TYPE_A else "r_l"
        for rank, node in enumerate(arr):
            if node is None:
                continue
            if id(node) in parked:
                findings.append(
                    ("array_duplicate", node.handle(), "node in two array slots")
                )
            parked.add(id(node))
            if id(node) not in seen:
                findings.append(
                    ("array_entry", node.handle(), f"{name} entry not in heap")
                )
            if node.subtype not in sub_ok:
                findings.append(
                    (
                        "array_subtype",
                        node.handle(),
                        f"{name}[{rank}] holds subtype "
                        f"{SUBTYPE_NAMES[node.subtype]}",
                    )
                )
            if node.rank != rank:
                findings.append(
                    (
                        "array_rank",
                        node.handle(),
                        f"{name}[{rank}] holds node of rank {node.rank}",
                    )
                )
            if node.loc != LOC_ARRAY:
                findings.append(
                    ("location_flag", node.handle(), f"parked node has loc {node.loc}")
                )

    for node in seen.values():
        typ = TYPE_OF[node.subtype]
        if node.subtype == SUB_N:
            if node.loc != LOC_NONE:
                findings.append(
                    ("location_flag", node.handle(), "subtype N with a location")
                )
        else:
            if node.loc == LOC_NONE:
                findings.append(
                    (
                        "location_flag",
                        node.handle(),
                        f"{SUBTYPE_NAMES[node.subtype]} node in no container",
                    )
                )
            elif node.loc == LOC_ARRAY:
                arr = reg.r_a if typ == TYPE_A else reg.r_l
                if node.rank >= len(arr) or arr[node.rank] is not node:
                    findings.append(
                        (
                            "location_flag",
                            node.handle(),
                            "claims array slot it does not occupy",
                        )
                    )
            elif id(node) not in stack_members[typ]:
                findings.append(
                    (
                        "location_flag",
                        node.handle(),
                        "claims stack membership without an entry",
                    )
                )

    report = AuditReport(
        violations_found=findings,
        max_rank_observed=max_rank,
        phi_recomputed=recompute_phi(heap),
    )
    return report


def recompute_phi(heap):
    """From-scratch (phi_a, phi_l), honoring the weighted c_l rule."""
    reg = heap.registry
    phi_a = sum(1 for node in reg.r_a if node is not None) + 2 * len(reg.c_a)
    phi_l = 3 * sum(1 for node in reg.r_l if node is not None)
    seen_from_top = set()
    for entry in reversed(reg.c_l):
        live = (
            entry.loc == LOC_STACK
            and TYPE_OF[entry.subtype] == TYPE_L
            and id(entry) not in seen_from_top
        )
        seen_from_top.add(id(entry))
        if live and entry.subtype == SUB_L2 and reg.track_loss:
            phi_l += 4 * entry.loss
        else:
            phi_l += 4
    return phi_a, phi_l


def check_rank_bound(heap):
    """True iff every live rank is below 4 + 1.2 * log2(n)."""
    n = heap.store.live_count
    if n < 1:
        raise ValueError("rank bound requires n >= 1")
    bound = 4 + 1.2 * math.log2(n)
    return all(
        node.rank < bound for node in heap.store.slots if node is not None
    )


def _grandchild_multiset(rank):
    """(subtree_rank, multiplicity) pairs of a rank-``rank`` binomial tree.

    There are k grandchildren of rank ``rank - 1 - k`` for k = 1..rank-1.
    """
    return [(rank - 1 - k, k) for k in range(1, rank)]


def minimal_tree_size(rank, loss):
    """Smallest node count of a rank-``rank`` tree with total loss ``loss``.

    Greedily cuts the ``loss`` largest grandchild subtrees of the rank-R
    binomial tree; never cuts more grandchildren than exist.
    """
    if not 0 <= rank <= _MAX_RANK_ARG:
        raise ValueError(f"rank must be in [0, {_MAX_RANK_ARG}]")
    if loss < 0:
        raise ValueError("loss must be nonnegative")
    size = 1 << rank
    remaining = loss
    for sub_rank, count in _grandchild_multiset(rank):  # largest first
        take = min(count, remaining)
        size -= take << sub_rank
        remaining -= take
        if remaining == 0:
            break
    return size


def exhaustive_minimal_tree_size(rank, loss):
    """Brute-force oracle for ``minimal_tree_size`` (small ranks only).

    Tries every admissible multiset of grandchild cuts instead of the
    greedy choice.
    """
    if rank > 7:
        raise ValueError("exhaustive search is intended for rank <= 7")
    pairs = _grandchild_multiset(rank)
    total = sum(count for _, count in pairs)
    want = min(loss, total)
    best = None
    for combo in itertools.product(*(range(count + 1) for _, count in pairs)):
        if sum(combo) != want:
            continue
        size = (1 << rank) - sum(
            take << sub_rank for take, (sub_rank, _) in zip(combo, pairs)
        )
        if best is None or size < best:
            best = size
    return best if best is not None else 1 << rank


def rank_bound_certificate(max_rank):
    """Certify 2^((R-4)/1.2) <= minimal_tree_size(R, R+1) for R in [1, max]."""
    if max_rank > _MAX_RANK_ARG:
        raise ValueError(f"max_rank must be at most {_MAX_RANK_ARG}")
    for rank in range(1, max_rank + 1):
        if 2 ** ((rank - 4) / 1.2) > minimal_tree_size(rank, rank + 1):
            return False
    return True
