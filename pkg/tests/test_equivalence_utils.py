"""Tests for trace comparison under order contracts."""

import pytest

from src.models import INT, OrderContract, Trace, TraceEvent
from src.utils.equivalence_utils import (
    check_equivalence,
    partition_indices,
    tiled_order,
    tiled_permutation,
)


def make_trace(values, threads=None):
    threads = threads or [None] * len(values)
    return Trace([TraceEvent('body', ((v, INT),), t) for v, t in zip(values, threads)])


def test_tiled_order_two_deep():
    """Test the enumeration visits whole tiles before moving on."""
    order = tiled_order([5, 4], [2, 2])

    assert order[:8] == [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (0, 3), (1, 2), (1, 3)]
    assert order[-2:] == [(4, 2), (4, 3)]
    assert sorted(order) == [(i, j) for i in range(5) for j in range(4)]


def test_tiled_order_edges():
    """Test oversized tiles, empty nests and invalid sizes."""
    assert tiled_order([3], [8]) == [(0,), (1,), (2,)]
    assert tiled_order([0, 4], [2, 2]) == []

    with pytest.raises(ValueError):
        tiled_order([4], [0])
    with pytest.raises(ValueError):
        tiled_order([4, 4], [2])


def test_tiled_permutation():
    """Test row-major positions of a 2x3 nest tiled by 2x2."""
    assert tiled_permutation([2, 3], [2, 2]) == [0, 1, 3, 4, 2, 5]


def test_exact_order_pass_and_fail():
    """Test exact order reports the first divergence."""
    reference = make_trace([0, 1, 2])

    assert check_equivalence(reference, make_trace([0, 1, 2]), OrderContract.exact_order())

    report = check_equivalence(reference, make_trace([0, 2, 1]), OrderContract.exact_order())
    assert not report.passed
    assert report.divergence_index == 1
    assert report.message == "event 1 differs: expected body(1), got body(2)"


def test_exact_order_ignores_thread_tags():
    """Test thread tags are not part of event identity."""
    report = check_equivalence(make_trace([0, 1]), make_trace([0, 1], [0, 1]), OrderContract.exact_order())

    assert report.passed


def test_exact_order_length_mismatch():
    """Test a missing tail event is reported at the shorter length."""
    report = check_equivalence(make_trace([0, 1, 2]), make_trace([0, 1]), OrderContract.exact_order())

    assert report.divergence_index == 2
    assert report.message == "reference has 3 event(s) but candidate has 2"


def test_argument_types_matter():
    """Test equal values of different types are different events."""
    reference = Trace([TraceEvent('body', ((1, INT),))])
    candidate = Trace([TraceEvent('body', ((1, INT.as_unsigned()),))])

    assert not check_equivalence(reference, candidate, OrderContract.exact_order())


def test_multiset_only():
    """Test multisets ignore order but not multiplicity."""
    contract = OrderContract.multiset_only()

    assert check_equivalence(make_trace([0, 1, 2]), make_trace([2, 0, 1]), contract)

    report = check_equivalence(make_trace([0, 1, 1]), make_trace([0, 1, 2]), contract)
    assert not report.passed
    assert report.message == "missing event body(1)"


def test_tiled_contract():
    """Test a tiled candidate is checked against the independent enumeration."""
    reference = make_trace(range(6))
    contract = OrderContract.tiled_order([2, 2], [2, 3])

    assert check_equivalence(reference, make_trace([0, 1, 3, 4, 2, 5]), contract)
    assert not check_equivalence(reference, make_trace(range(6)), contract)


def test_tiled_contract_wrong_iteration_count():
    """Test a reference that does not match the nest size fails."""
    report = check_equivalence(make_trace(range(5)), make_trace(range(5)), OrderContract.tiled_order([2], [6]))

    assert not report.passed
    assert 'the nest has 6 iteration(s)' in report.message


def test_partitioned_contract():
    """Test each thread must run its events in reference order."""
    reference = make_trace([0, 1, 2, 3])
    contract = OrderContract.partitioned(2)

    good = make_trace([2, 3, 0, 1], [1, 1, 0, 0])
    assert check_equivalence(reference, good, contract)

    bad = make_trace([1, 0, 2, 3], [0, 0, 1, 1])
    report = check_equivalence(reference, bad, contract)
    assert not report.passed
    assert report.message == "thread 0 runs event 1 out of logical order"

    stray = make_trace([0, 1, 2, 3], [0, 0, 1, 5])
    assert 'unknown thread 5' in check_equivalence(reference, stray, contract).message


def test_partition_indices():
    """Test positions are grouped per thread."""
    assert partition_indices(make_trace([0, 1, 2], [1, 0, 1])) == {1: [0, 2], 0: [1]}


def test_contract_constructors():
    """Test contract validation and names."""
    assert str(OrderContract.tiled_order([2], [5])) == 'tiled-order(sizes=[2])'
    assert str(OrderContract.partitioned(4)) == 'partitioned(threads=4)'
    assert str(OrderContract.exact_order()) == 'exact-order'

    with pytest.raises(ValueError):
        OrderContract.tiled_order([2, 2], [5])
    with pytest.raises(ValueError):
        OrderContract.partitioned(0)
