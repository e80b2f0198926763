import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.core.costs import CostTables, block_error, block_value
from src.core.dataset import load_dataset
from src.core.errors import IndexOutOfRange
from src.core.models import L1, L2, CostModel

QUANTILE_30 = CostModel(kind="quantile", tau=0.3)


def test_l2_block_statistics(make_data):
    tables = CostTables(make_data([4, 2, 3]))
    assert block_value(tables, 0, 3) == 3.0
    assert block_error(tables, 0, 3) == 2.0


def test_l1_uses_lower_median(make_data):
    tables = CostTables(make_data([1, 9]), L1)
    assert tables.block_value(0, 2) == 1.0
    assert tables.block_error(0, 2) == 8.0


def test_quantile_order_statistic(make_data):
    # ceil(0.3 * 10) = 3rd smallest
    tables = CostTables(make_data([9, 0, 8, 1, 7, 2, 6, 3, 5, 4]), QUANTILE_30)
    assert tables.block_value(0, 10) == 2.0
    x = np.arange(10.0)
    r = x - 2.0
    assert tables.block_error(0, 10) == pytest.approx(float(np.sum(np.maximum(0.3 * r, -0.7 * r))))


@pytest.mark.parametrize("model", [L2, L1, QUANTILE_30])
def test_single_point_block(make_data, model):
    tables = CostTables(make_data([4.25, -3.5, 7.0]), model)
    for i, x in enumerate([4.25, -3.5, 7.0]):
        assert tables.block_value(i, i + 1) == x
        assert tables.block_error(i, i + 1) == 0.0


def test_noiseless_reference_block_is_exact(noiseless_small):
    tables = CostTables(noiseless_small)
    # p = 12..29 are vertices 12..29
    assert tables.block_value(12, 30) == 115.0
    assert tables.block_error(12, 30) == 0.0


def test_merged_coordinates_count_every_observation(make_data):
    data = make_data([1, 3, 5], ps=[0, 0, 1], on_duplicate="merge")
    tables = CostTables(data)
    assert tables.count(0, 1) == 2
    assert tables.block_value(0, 1) == 2.0
    assert tables.block_error(0, 1) == 2.0
    assert tables.block_value(0, 2) == 3.0


@pytest.mark.parametrize("i, j", [(0, 0), (2, 1), (-1, 2), (0, 4)])
def test_out_of_range(make_data, i, j):
    tables = CostTables(make_data([1, 2, 3]))
    with pytest.raises(IndexOutOfRange):
        tables.block_value(i, j)


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.floats(-100, 100, allow_nan=False, allow_infinity=False), min_size=1, max_size=12),
    st.sampled_from([L2, L1, QUANTILE_30]),
)
def test_arc_row_matches_scalar_queries(xs, model):
    tables = CostTables(load_dataset([(float(i), x) for i, x in enumerate(xs)]), model)
    for i in range(len(xs)):
        values, errors = tables.arc_row(i)
        assert len(values) == len(xs) - i
        for off, h in enumerate(range(i + 1, len(xs) + 1)):
            assert values[off] == tables.block_value(i, h)
            assert errors[off] == tables.block_error(i, h)
            assert errors[off] >= 0.0


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-100, 100, allow_nan=False, allow_infinity=False), min_size=1, max_size=10))
def test_representative_minimises_loss(xs):
    data = load_dataset([(float(i), x) for i, x in enumerate(xs)])
    arr = np.array(xs)
    for model, loss in [
        (L2, lambda u: float(np.sum((arr - u) ** 2))),
        (L1, lambda u: float(np.sum(np.abs(arr - u)))),
    ]:
        tables = CostTables(data, model)
        best = tables.block_error(0, len(xs))
        for u in arr:
            assert best <= loss(u) + 1e-6 * (1.0 + abs(loss(u)))
