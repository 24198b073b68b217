"""Trace comparison under order contracts."""

import logging
from collections import Counter
from itertools import product

from ..models.Trace import EquivalenceReport, OrderContract, Trace

logger = logging.getLogger(__name__)


def tiled_order(trip_counts: list[int], sizes: list[int]) -> list[tuple[int, ...]]:
    """Logical index tuples of a tiled nest, in execution order.

    Enumerates floor tuples, then tile tuples within each floor tuple,
    skipping indices past the trip counts.

    Raises:
        ValueError: If the lengths differ or a size is not positive
    """
    if len(trip_counts) != len(sizes):
        raise ValueError("tiled order needs one tile size per trip count")
    if any(s < 1 for s in sizes):
        raise ValueError(f"Tile sizes must be positive, got {sizes}")
    floors = [range(-(-n // s)) for n, s in zip(trip_counts, sizes)]
    order = []
    for floor in product(*floors):
        tiles = [range(f * s, min(f * s + s, n)) for f, s, n in zip(floor, sizes, trip_counts)]
        order.extend(product(*tiles))
    return order


def tiled_permutation(trip_counts: list[int], sizes: list[int]) -> list[int]:
    """Row-major positions of the tiled order."""
    positions = []
    for indices in tiled_order(trip_counts, sizes):
        linear = 0
        for index, n in zip(indices, trip_counts):
            linear = linear * n + index
        positions.append(linear)
    return positions


def partition_indices(trace: Trace) -> dict[int | None, list[int]]:
    """Positions of each thread's events, in execution order."""
    groups: dict[int | None, list[int]] = {}
    for position, event in enumerate(trace):
        groups.setdefault(event.thread, []).append(position)
    return groups


def _first_difference(reference: list, candidate: list) -> int | None:
    for index, (a, b) in enumerate(zip(reference, candidate)):
        if a != b:
            return index
    if len(reference) != len(candidate):
        return min(len(reference), len(candidate))
    return None


def _exact(reference: list, candidate: list, contract: OrderContract, what: str) -> EquivalenceReport:
    index = _first_difference(reference, candidate)
    if index is None:
        return EquivalenceReport(True, contract, message=f"{len(reference)} event(s) equal in order")
    if index >= min(len(reference), len(candidate)):
        message = f"{what} has {len(reference)} event(s) but candidate has {len(candidate)}"
    else:
        message = f"event {index} differs: expected {_show(reference[index])}, got {_show(candidate[index])}"
    return EquivalenceReport(False, contract, index, message)


def _show(key) -> str:
    callee, args = key
    return f"{callee}({', '.join(str(v) for v, _ in args)})"


def _multiset(reference: list, candidate: list, contract: OrderContract) -> EquivalenceReport:
    expected, actual = Counter(reference), Counter(candidate)
    if expected == actual:
        return EquivalenceReport(True, contract, message=f"{len(reference)} event(s) equal as multisets")
    missing = expected - actual
    extra = actual - expected
    index = _first_difference(reference, candidate)
    if missing:
        message = f"missing event {_show(next(iter(missing)))}"
    else:
        message = f"unexpected event {_show(next(iter(extra)))}"
    return EquivalenceReport(False, contract, index, message)


def check_equivalence(reference: Trace, candidate: Trace, contract: OrderContract) -> EquivalenceReport:
    """Check a transformed trace against the reference trace.

    exact-order compares event for event (thread tags ignored);
    multiset-only compares multisets of ``(callee, args)``; tiled-order
    compares against the reference reordered by an independent tiled
    enumeration; partitioned requires multiset equality plus each thread's
    events appearing in reference order.

    Returns:
        EquivalenceReport: Pass/fail with the first divergence
    """
    ref = [e.key for e in reference]
    cand = [e.key for e in candidate]
    if contract.kind == 'exact-order':
        report = _exact(ref, cand, contract, 'reference')
    elif contract.kind == 'multiset-only':
        report = _multiset(ref, cand, contract)
    elif contract.kind == 'tiled-order':
        total = 1
        for n in contract.trip_counts:
            total *= n
        if total != len(ref):
            report = EquivalenceReport(
                False, contract, None,
                f"reference has {len(ref)} event(s) but the nest has {total} iteration(s)",
            )
        else:
            expected = [ref[p] for p in tiled_permutation(list(contract.trip_counts), list(contract.sizes))]
            report = _exact(expected, cand, contract, 'tiled reference')
    elif contract.kind == 'partitioned':
        report = _multiset(ref, cand, contract)
        if report.passed:
            report = _partition_order(ref, candidate, contract)
    else:
        raise ValueError(f"Unknown order contract: {contract.kind}")
    logger.debug(f"Equivalence {contract}: {'pass' if report.passed else 'fail'} ({report.message})")
    return report


def _partition_order(ref: list, candidate: Trace, contract: OrderContract) -> EquivalenceReport:
    rank: dict = {}
    for position, key in enumerate(ref):
        rank.setdefault(key, []).append(position)
    seen: Counter = Counter()
    groups = partition_indices(candidate)
    for thread, positions in groups.items():
        if thread is not None and not 0 <= thread < contract.threads:
            return EquivalenceReport(False, contract, positions[0], f"event tagged with unknown thread {thread}")
        last = -1
        for position in positions:
            key = candidate[position].key
            order = rank[key][seen[key]]
            seen[key] += 1
            if order < last:
                return EquivalenceReport(
                    False, contract, position,
                    f"thread {thread} runs event {position} out of logical order",
                )
            last = order
    return EquivalenceReport(True, contract, message=f"{len(ref)} event(s) partitioned over {len(groups)} thread(s)")
