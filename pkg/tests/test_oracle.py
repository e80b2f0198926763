import pytest
from hypothesis import given, settings, strategies as st

from src.core.dataset import load_dataset
from src.core.errors import InstanceTooLarge
from src.core.models import FitConfig
from src.fitting.isotonic import pava_fit
from src.fitting.oracle import brute_force


def test_two_blocks_on_five_points(five_points):
    result = brute_force(five_points, FitConfig(K=2))
    assert result.objective == pytest.approx(2 / 3)
    assert result.partition == [0, 2, 5]
    assert result.values == pytest.approx([4.0, 5 / 3])


def test_pooled_fit_is_optimal(make_data):
    result = brute_force(make_data([1, 3, 2]), FitConfig(K=3))
    assert result.objective == pytest.approx(pava_fit([1, 3, 2]).sse)
    assert all(a >= b for a, b in zip(result.values, result.values[1:]))


def test_one_point_per_block_when_relaxed(make_data):
    data = make_data([3, 8, 1, 6])
    result = brute_force(data, FitConfig(K=4, enforce_monotone=False))
    assert result.objective == 0.0
    assert result.n_blocks == 4


def test_guard(make_data):
    with pytest.raises(InstanceTooLarge):
        brute_force(make_data(range(16)), FitConfig(K=2))
    with pytest.raises(InstanceTooLarge):
        brute_force(make_data(range(5)), FitConfig(K=6))


def test_step_min_exempts_last_block(make_data):
    data = make_data([9, 9, 5, 1])
    result = brute_force(data, FitConfig(K=3, step_min=2.0))
    assert result.partition == [0, 2, 4]
    strict = brute_force(data, FitConfig(K=3, step_min=2.0, strict_last_block=True))
    assert strict.partition == [0, 4]
    assert brute_force(data, FitConfig(K=3, step_min=3.0)).partition == [0, 3, 4]


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(0, 10, allow_nan=False), min_size=2, max_size=8),
    st.integers(1, 4),
)
def test_objective_monotone_in_k_and_step_min(xs, K):
    data = load_dataset([(float(i), x) for i, x in enumerate(xs)])
    base = brute_force(data, FitConfig(K=K)).objective
    assert brute_force(data, FitConfig(K=K + 1)).objective <= base
    assert brute_force(data, FitConfig(K=K, step_min=2.0)).objective >= base
