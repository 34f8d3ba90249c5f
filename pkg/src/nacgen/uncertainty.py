"""Gradually realized uncertain parameters and the event-count lattice.

An uncertain parameter is observed through an ordered chain of events.
After ``q`` of its events have occurred, the set of possible outcomes is
known only up to a partition into signal blocks; each further event
refines that partition until, after the full chain, every outcome is
distinguished.  The cross product of per-parameter event counts forms a
lattice of information states, enumerated here by descending total count.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import NacgenError, RefinementError

ENDOGENOUS = "endogenous"
EXOGENOUS = "exogenous-scheduled"


@dataclass(frozen=True)
class GradualParameter:
    """One uncertain parameter with its observation chain.

    ``table[q][outcome - 1]`` is the signal id assigned to ``outcome``
    once ``q`` events have occurred.  Signal ids are canonical: each block
    of the level-``q`` partition is labelled by its minimum outcome index,
    so tables built through different routes compare equal.
    """

    id: int
    outcome_count: int
    chain_length: int
    table: tuple[tuple[int, ...], ...]
    kind: str = ENDOGENOUS
    schedule: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.outcome_count < 1:
            raise NacgenError("outcome_count must be >= 1")
        if self.chain_length < 0:
            raise NacgenError("chain_length must be >= 0")
        if len(self.table) != self.chain_length + 1:
            raise NacgenError(
                f"observation table has {len(self.table)} levels, "
                f"expected chain_length + 1 = {self.chain_length + 1}"
            )
        for level in self.table:
            if len(level) != self.outcome_count:
                raise NacgenError("observation table row width != outcome_count")
        if len(set(self.table[0])) != 1:
            raise NacgenError("level 0 must carry no information (single block)")
        if len(set(self.table[-1])) != self.outcome_count:
            raise NacgenError("final level must distinguish every outcome")
        for q in range(1, self.chain_length + 1):
            _check_refines(self.table[q], self.table[q - 1], q)
        if self.kind == EXOGENOUS:
            if self.schedule is None or len(self.schedule) != self.chain_length:
                raise NacgenError("exogenous parameter needs one period per event")
            if any(b < a for a, b in zip(self.schedule, self.schedule[1:])):
                raise NacgenError("event schedule must be non-decreasing")
        elif self.kind == ENDOGENOUS:
            if self.schedule is not None:
                raise NacgenError("endogenous parameter takes no schedule")
        else:
            raise NacgenError(f"unknown parameter kind: {self.kind!r}")

    def signal(self, q: int, outcome: int) -> int:
        """Signal id of ``outcome`` after ``q`` events (both validated)."""
        if not 0 <= q <= self.chain_length:
            raise NacgenError(
                f"event count {q} out of range 0..{self.chain_length}"
            )
        if not 1 <= outcome <= self.outcome_count:
            raise NacgenError(
                f"outcome {outcome} out of range 1..{self.outcome_count}"
            )
        return self.table[q][outcome - 1]


def _check_refines(fine: tuple[int, ...], coarse: tuple[int, ...], level: int):
    """Every block at ``level`` must sit inside one block at ``level - 1``."""
    for a, b in itertools.combinations(range(len(fine)), 2):
        if fine[a] == fine[b] and coarse[a] != coarse[b]:
            raise RefinementError(level, a + 1, b + 1)


def _canonical_row(blocks: list[set[int]], outcome_count: int) -> tuple[int, ...]:
    """Turn a list of blocks into a min-labelled signal row."""
    row = [0] * outcome_count
    seen: set[int] = set()
    for block in blocks:
        if not block:
            raise NacgenError("empty block in partition")
        label = min(block)
        for outcome in block:
            if not 1 <= outcome <= outcome_count:
                raise NacgenError(f"outcome {outcome} outside 1..{outcome_count}")
            if outcome in seen:
                raise NacgenError(f"outcome {outcome} appears in two blocks")
            seen.add(outcome)
            row[outcome - 1] = label
    if len(seen) != outcome_count:
        missing = sorted(set(range(1, outcome_count + 1)) - seen)
        raise NacgenError(f"partition misses outcomes {missing}")
    return tuple(row)


def make_stage_failure_param(stages: int, param_id: int = 0) -> GradualParameter:
    """Parameter for a product revealed stage by stage.

    Outcome ``j <= stages`` means failure at stage ``j``; outcome
    ``stages + 1`` means all stages pass.  Completing stage ``q`` tells
    failures at stages ``1..q`` apart but leaves every survivor of the
    first ``q`` stages in one block, hence ``signal(q, j) = min(j, q + 1)``.
    """
    if stages < 1:
        raise NacgenError("stages must be >= 1")
    outcomes = stages + 1
    table = tuple(
        tuple(min(j, q + 1) for j in range(1, outcomes + 1))
        for q in range(stages + 1)
    )
    return GradualParameter(
        id=param_id, outcome_count=outcomes, chain_length=stages, table=table
    )


def make_split_chain_param(
    partitions: list[list[set[int]]] | list[list[list[int]]],
    param_id: int = 0,
    schedule: list[int] | tuple[int, ...] | None = None,
) -> GradualParameter:
    """Parameter defined by an explicit chain of partitions.

    The first partition must be a single block, the last all singletons,
    and each one must refine its predecessor (violations raise
    :class:`RefinementError` naming the level and outcome pair).  Passing
    ``schedule`` makes the parameter exogenous with one period per event.
    """
    if not partitions:
        raise NacgenError("at least one partition required")
    outcome_count = sum(len(b) for b in partitions[0])
    rows = tuple(
        _canonical_row([set(b) for b in p], outcome_count) for p in partitions
    )
    chain_length = len(partitions) - 1
    kind = ENDOGENOUS if schedule is None else EXOGENOUS
    return GradualParameter(
        id=param_id,
        outcome_count=outcome_count,
        chain_length=chain_length,
        table=rows,
        kind=kind,
        schedule=None if schedule is None else tuple(schedule),
    )


def signal(param: GradualParameter, q: int, outcome: int) -> int:
    """Module-level alias for :meth:`GradualParameter.signal`."""
    return param.signal(q, outcome)


@dataclass(frozen=True, order=True)
class EventVector:
    """Per-parameter event counts: one information state of the system."""

    counts: tuple[int, ...]

    @property
    def order(self) -> int:
        return sum(self.counts)

    def dominates(self, other: "EventVector") -> bool:
        """True if this state is reachable from ``other`` (componentwise >=)."""
        return all(a >= b for a, b in zip(self.counts, other.counts))

    def __str__(self):
        return "(" + ",".join(str(q) for q in self.counts) + ")"


def lattice_size(params: list[GradualParameter]) -> int:
    size = 1
    for p in params:
        size *= p.chain_length + 1
    return size


def enumerate_event_lattice(
    params: list[GradualParameter],
) -> dict[int, list[EventVector]]:
    """All event vectors grouped by descending order.

    Keys run from ``sum(chain_length)`` down to 0; within a group the
    vectors are in lexicographic order, so iteration is deterministic.
    """
    if not params:
        raise NacgenError("parameter list must be non-empty")
    max_order = sum(p.chain_length for p in params)
    groups: dict[int, list[EventVector]] = {k: [] for k in range(max_order, -1, -1)}
    ranges = [range(p.chain_length + 1) for p in params]
    for counts in itertools.product(*ranges):
        groups[sum(counts)].append(EventVector(counts))
    return groups
