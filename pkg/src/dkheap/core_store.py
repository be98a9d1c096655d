"""Node storage and sibling-list primitives.

Nodes live in a generational slab: external code refers to them through
``Handle(index, generation)`` values that stay valid until the node is
freed, after which any use of the stale handle raises ``DeadHandleError``
instead of silently touching a recycled slot.

Sibling lists (the root list and every node's child list) keep their left
pointers cyclic (leftmost.left is the rightmost member) and their right
pointers acyclic (rightmost.right is None), so both ends are reachable in
constant time and any member can be unlinked in constant time.
"""

from dataclasses import dataclass

from .errors import ContractError, DeadHandleError

# Violation subtypes.  Type is derived: N -> N, A -> A, L1/L2 -> L.
SUB_N = 0
SUB_A = 1
SUB_L1 = 2
SUB_L2 = 3

TYPE_N = 0
TYPE_A = 1
TYPE_L = 2

TYPE_OF = (TYPE_N, TYPE_A, TYPE_L, TYPE_L)

SUBTYPE_NAMES = ("N", "A", "L1", "L2")

# Where a node's live registry entry currently is (instrumental for O(1)
# "is it already on the stack?" checks; stale stack entries are not "live").
LOC_NONE = 0
LOC_ARRAY = 1
LOC_STACK = 2


@dataclass(frozen=True, slots=True)
class Handle:
    """Stable external reference to a stored node."""

    index: int
    generation: int


class SiblingList:
    """A doubly linked list of nodes sharing the cyclic-left shape."""

    __slots__ = ("head",)

    def __init__(self):
        self.head = None

    def __bool__(self):
        return self.head is not None

    def __iter__(self):
        x = self.head
        while x is not None:
            yield x
            x = x.right


class Node:
    """One heap element record.

    ``loss`` is instrumentation only: no algorithm branch reads it, the
    control flow depends on ``subtype`` alone.
    """

    __slots__ = (
        "key",
        "seq",
        "rank",
        "subtype",
        "loss",
        "parent",
        "left",
        "right",
        "children",
        "loc",
        "index",
        "generation",
    )

    def __init__(self, key, seq, index, generation):
        self.key = key
        self.seq = seq
        self.rank = 0
        self.subtype = SUB_N
        self.loss = 0
        self.parent = None
        self.left = self
        self.right = None
        self.children = SiblingList()
        self.loc = LOC_NONE
        self.index = index
        self.generation = generation

    def sort_key(self):
        return (self.key, self.seq)

    def handle(self):
        return Handle(self.index, self.generation)

    def __repr__(self):  # pragma: no cover - debugging aid
        return (
            f"Node(key={self.key!r}, seq={self.seq}, rank={self.rank}, "
            f"subtype={SUBTYPE_NAMES[self.subtype]}, loss={self.loss})"
        )


class NodeStore:
    """Generational slab of node records."""

    __slots__ = ("slots", "generations", "free_slots", "next_seq", "live_count")

    def __init__(self):
        self.slots = []
        self.generations = []
        self.free_slots = []
        self.next_seq = 0
        self.live_count = 0

    def allocate(self, key):
        seq = self.next_seq
        self.next_seq += 1
        if self.free_slots:
            index = self.free_slots.pop()
            generation = self.generations[index] + 1
            node = Node(key, seq, index, generation)
            self.slots[index] = node
            self.generations[index] = generation
        else:
            index = len(self.slots)
            node = Node(key, seq, index, 0)
            self.slots.append(node)
            self.generations.append(0)
        self.live_count += 1
        return node

    def free(self, node):
        if self.slots[node.index] is not node:
            raise ContractError("double free or foreign node")
        self.slots[node.index] = None
        self.free_slots.append(node.index)
        self.live_count -= 1

    def deref(self, handle):
        """Return the live node for ``handle`` or raise DeadHandleError."""
        if not 0 <= handle.index < len(self.slots):
            raise DeadHandleError(f"handle index {handle.index} out of range")
        node = self.slots[handle.index]
        if node is None or node.generation != handle.generation:
            raise DeadHandleError(
                f"handle {handle} refers to a freed or recycled slot"
            )
        return node

    def is_live(self, handle):
        if not 0 <= handle.index < len(self.slots):
            return False
        node = self.slots[handle.index]
        return node is not None and node.generation == handle.generation


def list_insert_leftmost(lst, x):
    """Insert ``x`` as the new head of ``lst``.

    ``x`` must be detached (self-singleton shape left behind by
    ``list_remove`` or fresh allocation).
    """
    if x.right is not None or x.left is not x:
        raise ContractError("node is already a member of a list")
    head = lst.head
    if head is None:
        lst.head = x
        # x.left is already x, x.right already None
    else:
        x.right = head
        x.left = head.left  # cyclic: old rightmost
        head.left = x
        lst.head = x


def list_remove(lst, x):
    """Unlink ``x`` from ``lst``; ``x`` becomes a self-singleton."""
    if lst.head is None:
        raise ContractError("remove from empty list")
    if lst.head is x:
        nxt = x.right
        if nxt is None:
            lst.head = None
        else:
            nxt.left = x.left  # inherit pointer to rightmost
            lst.head = nxt
    else:
        prev = x.left
        nxt = x.right
        prev.right = nxt
        if nxt is None:
            lst.head.left = prev  # x was the rightmost
        else:
            nxt.left = prev
    x.left = x
    x.right = None
