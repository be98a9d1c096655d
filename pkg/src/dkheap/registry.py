"""Violation containers and incremental potential counters.

The registry owns four containers: two rank-indexed arrays (``r_a`` for
nonrank-root violations of type A, ``r_l`` for positive-loss violations of
type L) and two stacks (``c_a``, ``c_l``) of pending violations.  Stacks
may hold stale entries for nodes whose subtype has since changed; stale
entries are discarded when popped.

Potentials are maintained incrementally:

    phi_a = |r_a occupied| + 2 * |c_a entries|
    phi_l = 3 * |r_l occupied| + 4 * (weighted |c_l| entries)

where a live c_l entry of an L2 node weighs that node's loss and every
other entry (live L1, stale anything) weighs 1.  ``recompute`` in the
audit module cross-checks the incremental counters by full scans.
"""

from .core_store import (
    LOC_ARRAY,
    LOC_NONE,
    LOC_STACK,
    SUB_A,
    SUB_L1,
    SUB_L2,
    SUB_N,
    TYPE_A,
    TYPE_L,
    TYPE_OF,
)

_INITIAL_CAPACITY = 32


def type_of(subtype):
    """Tabulated subtype-to-type conversion: A->A, N->N, L1->L, L2->L."""
    return TYPE_OF[subtype]


class Registry:
    __slots__ = (
        "r_a",
        "r_l",
        "c_a",
        "c_l",
        "phi_a",
        "phi_l",
        "track_loss",
        "mutations",
    )

    def __init__(self, track_loss=True):
        self.r_a = [None] * _INITIAL_CAPACITY
        self.r_l = [None] * _INITIAL_CAPACITY
        self.c_a = []
        self.c_l = []
        self.phi_a = 0
        self.phi_l = 0
        # When False, per-node loss counters are not maintained and every
        # c_l entry weighs 1.  Structural decisions must be unaffected.
        self.track_loss = track_loss
        self.mutations = 0

    # -- capacity ---------------------------------------------------------

    def ensure_capacity(self, rank):
        """Grow both arrays (amortized doubling) to make ``rank`` addressable."""
        cap = len(self.r_a)
        if rank < cap:
            return
        while cap <= rank:
            cap *= 2
        self.r_a.extend([None] * (cap - len(self.r_a)))
        self.r_l.extend([None] * (cap - len(self.r_l)))

    # -- stacks -----------------------------------------------------------

    def _entry_weight(self, typ, node):
        if typ == TYPE_L and node.subtype == SUB_L2 and self.track_loss:
            return node.loss
        return 1

    def stack_push(self, typ, node):
        """Push a live entry for ``node`` onto C[typ]; adjusts phi."""
        if typ == TYPE_A:
            self.c_a.append(node)
            self.phi_a += 2
        else:
            self.c_l.append(node)
            self.phi_l += 4 * self._entry_weight(TYPE_L, node)
        node.loc = LOC_STACK
        self.mutations += 1

    def stack_pop(self, typ):
        """Pop one entry from C[typ].

        Returns ``(node, live)`` or ``(None, False)`` on an empty stack.
        ``live`` tells whether the entry is the node's current live stack
        entry (as opposed to a stale leftover).  Popping a live entry
        clears the node's location flag.
        """
        stack = self.c_a if typ == TYPE_A else self.c_l
        if not stack:
            return None, False
        node = stack.pop()
        self.mutations += 1
        live = node.loc == LOC_STACK and TYPE_OF[node.subtype] == typ
        if typ == TYPE_A:
            self.phi_a -= 2
        else:
            self.phi_l -= 4 * (self._entry_weight(TYPE_L, node) if live else 1)
        if live:
            node.loc = LOC_NONE
        return node, live

    # -- arrays -----------------------------------------------------------

    def array_slot(self, typ, rank):
        arr = self.r_a if typ == TYPE_A else self.r_l
        if rank >= len(arr):
            return None
        return arr[rank]

    def array_park(self, typ, node):
        """Store ``node`` in R[typ] at its rank (slot must be empty)."""
        self.ensure_capacity(node.rank)
        arr = self.r_a if typ == TYPE_A else self.r_l
        assert arr[node.rank] is None
        arr[node.rank] = node
        if typ == TYPE_A:
            self.phi_a += 1
        else:
            self.phi_l += 3
        node.loc = LOC_ARRAY
        self.mutations += 1

    def array_clear(self, typ, rank):
        """Empty the R[typ] slot at ``rank``; clears the occupant's flag."""
        arr = self.r_a if typ == TYPE_A else self.r_l
        node = arr[rank]
        assert node is not None
        arr[rank] = None
        if typ == TYPE_A:
            self.phi_a -= 1
        else:
            self.phi_l -= 3
        node.loc = LOC_NONE
        self.mutations += 1
        return node

    # -- subtype transitions ---------------------------------------------

    def set_violation_subtype(self, node, new):
        """Change ``node``'s violation subtype with container bookkeeping.

        If the old subtype is not N, the node is evicted from its type's
        array when parked there (otherwise its live stack entry, if any,
        goes stale or stays live depending on whether the type changes).
        Unless the new subtype is N or the node is already live on the
        target stack, a fresh entry is pushed.
        """
        old = node.subtype
        if old != SUB_N:
            t_old = TYPE_OF[old]
            arr = self.r_a if t_old == TYPE_A else self.r_l
            rank = node.rank
            if rank < len(arr) and arr[rank] is node:
                self.array_clear(t_old, rank)
            elif node.loc == LOC_STACK and TYPE_OF[new] != t_old:
                # The live stack entry goes stale; for an L2 node its
                # weight drops from the node's loss to 1.
                if old == SUB_L2 and self.track_loss:
                    self.phi_l -= 4 * (node.loss - 1)
                node.loc = LOC_NONE

        node.subtype = new
        if self.track_loss:
            if new == SUB_N or new == SUB_A:
                node.loss = 0
            elif new == SUB_L1:
                node.loss = 1
            else:  # SUB_L2
                prev_weight = node.loss if old == SUB_L2 else 1
                node.loss += 1
                if node.loc == LOC_STACK:
                    # The live entry's weight rises to the new loss.
                    self.phi_l += 4 * (node.loss - prev_weight)

        if new != SUB_N:
            t_new = TYPE_OF[new]
            already_on_stack = (
                old != SUB_N and TYPE_OF[old] == t_new and node.loc == LOC_STACK
            )
            if not already_on_stack:
                self.stack_push(t_new, node)

    def bump_l2_loss(self, node):
        """Loss increment of an L2 node (no subtype change).

        An L2 node always has a live c_l entry, whose weight rises with
        the loss.
        """
        if self.track_loss:
            node.loss += 1
            self.phi_l += 4

    def phi_total(self):
        return self.phi_a + self.phi_l
