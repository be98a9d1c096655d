import pytest
from hypothesis import given, strategies as st

from dkheap.core_store import (
    SUB_N,
    NodeStore,
    SiblingList,
    list_insert_leftmost,
    list_remove,
)
from dkheap.errors import ContractError, DeadHandleError


def test_allocate_defaults():
    store = NodeStore()
    node = store.allocate(42)
    assert node.key == 42
    assert node.rank == 0
    assert node.subtype == SUB_N
    assert node.loss == 0
    assert node.parent is None
    assert node.left is node
    assert node.right is None


def test_equal_keys_break_ties_by_allocation_order():
    store = NodeStore()
    first = store.allocate(5)
    second = store.allocate(5)
    assert first is not second
    assert first.sort_key() < second.sort_key()


def test_seq_strictly_increasing():
    store = NodeStore()
    seqs = [store.allocate(0).seq for _ in range(10)]
    assert seqs == sorted(seqs)
    assert len(set(seqs)) == len(seqs)


def test_dead_handle_rejected_after_slot_reuse():
    store = NodeStore()
    node = store.allocate(1)
    handle = node.handle()
    store.free(node)
    replacement = store.allocate(2)
    assert replacement.index == handle.index  # slot recycled
    with pytest.raises(DeadHandleError):
        store.deref(handle)
    assert not store.is_live(handle)
    assert store.deref(replacement.handle()) is replacement


def test_deref_out_of_range():
    store = NodeStore()
    node = store.allocate(1)
    bad = type(node.handle())(index=99, generation=0)
    with pytest.raises(DeadHandleError):
        store.deref(bad)


def test_double_free_rejected():
    store = NodeStore()
    node = store.allocate(1)
    store.free(node)
    with pytest.raises(ContractError):
        store.free(node)


class TestSiblingList:
    def _shape_ok(self, lst):
        members = list(lst)
        if not members:
            assert lst.head is None
            return members
        assert lst.head is members[0]
        assert members[-1].right is None
        assert members[0].left is members[-1]
        for prev, cur in zip(members, members[1:]):
            assert cur.left is prev
            assert prev.right is cur
        return members

    def test_insert_into_empty(self):
        store = NodeStore()
        lst = SiblingList()
        a = store.allocate("a")
        list_insert_leftmost(lst, a)
        assert self._shape_ok(lst) == [a]
        assert a.left is a and a.right is None

    def test_insert_front(self):
        store = NodeStore()
        lst = SiblingList()
        a, b, c = (store.allocate(k) for k in "abc")
        list_insert_leftmost(lst, a)
        list_insert_leftmost(lst, b)
        assert self._shape_ok(lst) == [b, a]
        assert b.left is a and b.right is a
        assert a.left is b and a.right is None
        list_insert_leftmost(lst, c)
        assert self._shape_ok(lst) == [c, b, a]
        assert c.left is a  # cyclic left link

    def test_double_insert_rejected(self):
        store = NodeStore()
        lst = SiblingList()
        a = store.allocate("a")
        b = store.allocate("b")
        list_insert_leftmost(lst, a)
        list_insert_leftmost(lst, b)
        with pytest.raises(ContractError):
            list_insert_leftmost(lst, b)

    def test_remove_middle(self):
        store = NodeStore()
        lst = SiblingList()
        for key in "abc":
            list_insert_leftmost(lst, store.allocate(key))
        c, b, a = list(lst)
        list_remove(lst, b)
        assert self._shape_ok(lst) == [c, a]
        assert c.right is a and a.left is c
        assert b.left is b and b.right is None

    def test_remove_head(self):
        store = NodeStore()
        lst = SiblingList()
        a = store.allocate("a")
        c = store.allocate("c")
        list_insert_leftmost(lst, a)
        list_insert_leftmost(lst, c)
        list_remove(lst, c)
        assert self._shape_ok(lst) == [a]
        assert a.left is a

    def test_remove_sole_member(self):
        store = NodeStore()
        lst = SiblingList()
        a = store.allocate("a")
        list_insert_leftmost(lst, a)
        list_remove(lst, a)
        assert lst.head is None
        list_remove_empty_raises = pytest.raises(ContractError)
        with list_remove_empty_raises:
            list_remove(lst, a)

    @given(st.lists(st.sampled_from(["insert", "remove_head", "remove_last"]),
                    max_size=60))
    def test_matches_list_model(self, script):
        store = NodeStore()
        lst = SiblingList()
        model = []
        counter = 0
        for action in script:
            if action == "insert" or not model:
                node = store.allocate(counter)
                counter += 1
                list_insert_leftmost(lst, node)
                model.insert(0, node)
            elif action == "remove_head":
                list_remove(lst, model.pop(0))
            else:
                list_remove(lst, model.pop())
            assert self._shape_ok(lst) == model
