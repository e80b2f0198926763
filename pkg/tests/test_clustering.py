import pytest
from hypothesis import given, settings, strategies as st

from src.core.curve import curve_error
from src.core.errors import EmptyInput
from src.core.models import L1, FitConfig
from src.fitting.clustering import adjacency_cluster, build_upper_bound, partition_of, violates_step_min
from src.fitting.isotonic import isotonic_fit


def test_runs_are_kept_when_few_enough():
    part = adjacency_cluster([9, 9, 5, 5, 5, 1], K=3)
    assert part.boundaries == [0, 2, 5, 6]
    assert part.values == [9.0, 5.0, 1.0]


def test_cheapest_adjacent_merge_wins():
    part = adjacency_cluster([4, 4, 2, 2, 1], K=2)
    assert part.boundaries == [0, 2, 5]
    assert part.values == pytest.approx([4.0, 5 / 3])


def test_single_cluster_is_the_mean():
    part = adjacency_cluster([6, 3, 0], K=1)
    assert part.boundaries == [0, 3]
    assert part.values == [3.0]


def test_ties_merge_leftmost_pair():
    part = adjacency_cluster([3, 2, 1], K=2)
    assert part.boundaries == [0, 2, 3]


def test_weights_enter_the_merge_cost():
    # Unweighted both merges cost 2 and the left one wins; a heavy first point
    # makes it the expensive one
    assert adjacency_cluster([10, 8, 6], K=2).boundaries == [0, 2, 3]
    part = adjacency_cluster([10, 8, 6], K=2, weights=[10, 1, 1])
    assert part.boundaries == [0, 1, 3]
    assert part.values == [10.0, 7.0]


def test_nothing_to_cluster():
    with pytest.raises(EmptyInput):
        adjacency_cluster([], K=2)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=1, max_size=20), st.integers(1, 6))
def test_clusters_of_monotone_values_stay_monotone(xs, K):
    values = sorted(xs, reverse=True)
    part = adjacency_cluster(values, K)
    assert part.n_clusters <= K
    assert part.boundaries[0] == 0 and part.boundaries[-1] == len(values)
    assert all(a > b for a, b in zip(part.values, part.values[1:]))


def test_upper_bound_equals_isotonic_fit_when_runs_fit(make_data):
    data = make_data([5, 5, 3, 3.5, 1])
    curve, ub = build_upper_bound(data, FitConfig(K=3))
    assert ub == isotonic_fit(data).sse
    assert curve.is_non_increasing()


def test_upper_bound_single_block(make_data):
    curve, ub = build_upper_bound(make_data([1, 3, 2]), FitConfig(K=1))
    assert curve.values == (2.0,)
    assert ub == 2.0


def test_upper_bound_respects_step_min(make_data):
    data = make_data([9, 8, 7, 6, 5, 4, 3, 2])
    cfg = FitConfig(K=8, step_min=3.0)
    curve, ub = build_upper_bound(data, cfg)
    bounds = partition_of(data, curve)
    assert not violates_step_min(data, bounds, cfg.step_min)
    assert ub == pytest.approx(curve_error(data, curve))


def test_upper_bound_under_l1_is_rescored(make_data):
    data = make_data([9, 1, 8, 2, 7])
    cfg = FitConfig(K=2, cost_model=L1)
    curve, ub = build_upper_bound(data, cfg)
    assert curve.n_blocks <= 2
    assert ub == pytest.approx(curve_error(data, curve, L1))


def test_violates_step_min_exempts_last_block(make_data):
    data = make_data([3, 2, 1, 0])
    assert not violates_step_min(data, [0, 2, 4], 2.0)
    assert violates_step_min(data, [0, 1, 4], 2.0)
    assert violates_step_min(data, [0, 2, 4], 2.0, strict_last_block=True)
    assert not violates_step_min(data, [0, 1, 4], 0.0)


@pytest.mark.parametrize("values, K, boundaries, expected", [
    ([5, 5, 5, 2], 3, [0, 3, 4], [5.0, 2.0]),
    ([9, 9, 5, 5, 5, 1], 6, [0, 2, 5, 6], [9.0, 5.0, 1.0]),
    ([4, 4], 2, [0, 2], [4.0]),
])
def test_equal_neighbours_are_always_merged(values, K, boundaries, expected):
    part = adjacency_cluster(values, K)
    assert part.boundaries == boundaries
    assert part.values == expected


def test_upper_bound_with_spare_steps_is_the_isotonic_fit(noiseless_small):
    fit = isotonic_fit(noiseless_small)
    curve, ub = build_upper_bound(noiseless_small, FitConfig(K=fit.n_blocks + 2))
    assert partition_of(noiseless_small, curve) == fit.boundaries
    assert ub == fit.sse
