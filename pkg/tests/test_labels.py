import pytest

from src.fitting.labels import Label, LabelStore, LayerClosed, dominates


@pytest.mark.parametrize("a, b, expected", [
    ((5.0, 2, 10.0), (5.5, 2, 9.0), True),
    ((5.0, 2, 10.0), (5.0, 2, 10.0), False),
    ((5.0, 3, 10.0), (5.5, 2, 9.0), False),
    ((5.0, 2, 10.0), (5.0, 2, 9.0), True),
    ((5.0, 2, 9.0), (5.0, 2, 10.0), False),
])
def test_dominance(a, b, expected):
    assert dominates(Label(*a), Label(*b)) is expected


def test_store_rejects_dominated_and_identical_labels():
    store = LabelStore(5)
    assert store.insert(Label(5.0, 2, 10.0, vertex=3))
    assert not store.insert(Label(5.5, 2, 9.0, vertex=3))
    assert not store.insert(Label(5.0, 2, 10.0, vertex=3))
    assert store.size(3) == 1
    assert store.created == 3
    assert store.dominated == 2


def test_store_deletes_labels_the_newcomer_dominates():
    store = LabelStore(5)
    store.insert(Label(6.0, 2, 9.0, vertex=2))
    store.insert(Label(7.0, 1, 8.0, vertex=2))
    store.insert(Label(4.0, 3, 12.0, vertex=2))
    assert store.size(2) == 3
    assert store.insert(Label(5.0, 1, 9.5, vertex=2))
    assert store.size(2) == 2
    assert store.dominated == 2


def test_pop_layer_order_and_closing():
    store = LabelStore(5)
    store.insert(Label(3.0, 1, 5.0, vertex=1))
    store.insert(Label(2.0, 2, 4.0, vertex=1))
    store.insert(Label(3.0, 2, 7.0, vertex=1))
    labels = store.pop_layer(1)
    assert [l.triple() for l in labels] == [(2.0, 2, 4.0), (3.0, 2, 7.0), (3.0, 1, 5.0)]
    with pytest.raises(LayerClosed):
        store.insert(Label(1.0, 1, 1.0, vertex=1))
    assert store.pop_layer(2) == []


def test_pending_lists_unprocessed_labels():
    store = LabelStore(4)
    store.insert(Label(1.0, 1, 5.0, vertex=2))
    store.insert(Label(2.0, 1, 4.0, vertex=3))
    store.pop_layer(2)
    assert [(h, l.c) for h, l in store.pending()] == [(3, 2.0)]


def test_arcs_follow_predecessors():
    root = Label(0.0, 0, 100.0)
    first = Label(1.0, 1, 9.0, pred=root, origin=0, vertex=3)
    second = Label(2.5, 2, 7.0, pred=first, origin=3, vertex=5)
    assert root.arcs() == []
    assert second.arcs() == [(0, 3), (3, 5)]
