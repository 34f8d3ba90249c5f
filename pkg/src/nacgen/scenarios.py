"""Scenario sets, signatures, partitions and differentiator sets.

A scenario fixes one outcome per parameter.  Under an event vector ``c``
each scenario maps to a signature (one signal per parameter); scenarios
sharing a signature are mutually indistinguishable and form one block of
the partition induced by ``c``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import NacgenError, SizeLimitError
from .uncertainty import EXOGENOUS, EventVector, GradualParameter

DEFAULT_SIZE_LIMIT = 2_000_000

NEVER = math.inf  # sentinel for scenario pairs never distinguishable in time


@dataclass(frozen=True)
class Scenario:
    """One outcome vector; ``id`` is its index within its set."""

    id: int
    outcomes: tuple[int, ...]


@dataclass(frozen=True)
class ScenarioSet:
    """An ordered, duplicate-free collection of scenarios.

    Scenarios are kept in lexicographic outcome order with consecutive
    ids, so equal inputs always produce identical sets.  ``origin``
    records how the set was built ("full", "sample(seed=..,count=..)",
    "explicit", or "file").
    """

    params: tuple[GradualParameter, ...]
    scenarios: tuple[Scenario, ...]
    origin: str

    def __post_init__(self):
        seen = set()
        for i, s in enumerate(self.scenarios):
            if s.id != i:
                raise NacgenError("scenario ids must be consecutive from 0")
            if len(s.outcomes) != len(self.params):
                raise NacgenError("outcome vector length != parameter count")
            for p, o in zip(self.params, s.outcomes):
                if not 1 <= o <= p.outcome_count:
                    raise NacgenError(
                        f"outcome {o} out of range for parameter {p.id}"
                    )
            if s.outcomes in seen:
                raise NacgenError(f"duplicate scenario {s.outcomes}")
            seen.add(s.outcomes)

    def __len__(self):
        return len(self.scenarios)

    def outcome_vectors(self) -> list[tuple[int, ...]]:
        return [s.outcomes for s in self.scenarios]


@dataclass(frozen=True)
class Partition:
    """Blocks of mutually indistinguishable scenario ids under one cut."""

    event_vector: EventVector
    blocks: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class DifferentiatorSet:
    """Minimal events whose occurrence tells two scenarios apart.

    At most one event per parameter: the earliest chain position at which
    the two outcome signals diverge.
    """

    events: frozenset[tuple[int, int]]  # (parameter id, event index)


def _from_vectors(params, vectors, origin) -> ScenarioSet:
    ordered = sorted(vectors)
    scenarios = tuple(Scenario(i, v) for i, v in enumerate(ordered))
    return ScenarioSet(tuple(params), scenarios, origin)


def space_size(params: list[GradualParameter]) -> int:
    """Cardinality of the full Cartesian outcome space."""
    size = 1
    for p in params:
        size *= p.outcome_count
    return size


def _unrank(params, index: int) -> tuple[int, ...]:
    """Outcome vector at lexicographic position ``index`` of the product."""
    digits = []
    for p in reversed(params):
        digits.append(index % p.outcome_count + 1)
        index //= p.outcome_count
    return tuple(reversed(digits))


def full_cartesian(
    params: list[GradualParameter], size_limit: int = DEFAULT_SIZE_LIMIT
) -> ScenarioSet:
    """Every outcome combination, in lexicographic order."""
    total = space_size(params)
    if total > size_limit:
        raise SizeLimitError(total, size_limit)
    vectors = [_unrank(params, i) for i in range(total)]
    return _from_vectors(params, vectors, "full")


def sample_scenarios(
    params: list[GradualParameter],
    count: int,
    seed: int,
    size_limit: int = DEFAULT_SIZE_LIMIT,
) -> ScenarioSet:
    """Uniform sample without replacement from the full product.

    Sampling draws positions in the implicit lexicographic enumeration,
    so the product space is never materialized.  The result is sorted and
    re-indexed; equal ``(params, count, seed)`` give identical sets.
    """
    total = space_size(params)
    if not 1 <= count <= total:
        raise NacgenError(
            f"sample count {count} out of range 1..{total} (full space size)"
        )
    if count > size_limit:
        raise SizeLimitError(count, size_limit)
    if count == total:
        return full_cartesian(params, size_limit=size_limit)
    rng = random.Random(seed)
    indices = rng.sample(range(total), count)
    vectors = [_unrank(params, i) for i in indices]
    sset = _from_vectors(params, vectors, f"sample(seed={seed},count={count})")
    return sset


def explicit_set(
    params: list[GradualParameter],
    vectors: list[tuple[int, ...]] | list[list[int]],
    origin: str = "explicit",
) -> ScenarioSet:
    """Scenario set from caller-supplied outcome vectors."""
    return _from_vectors(params, [tuple(v) for v in vectors], origin)


def signature(sset: ScenarioSet, c: EventVector, scenario_id: int) -> tuple[int, ...]:
    """Per-parameter signal vector of one scenario under cut ``c``."""
    s = sset.scenarios[scenario_id]
    return tuple(
        p.signal(q, o) for p, q, o in zip(sset.params, c.counts, s.outcomes)
    )


def signature_table(sset: ScenarioSet, c: EventVector) -> list[tuple[int, ...]]:
    """Signatures of every scenario under ``c`` (index = scenario id)."""
    cols = []
    for i, (p, q) in enumerate(zip(sset.params, c.counts)):
        row = p.table[q]
        cols.append([row[s.outcomes[i] - 1] for s in sset.scenarios])
    return list(zip(*cols))


def partition(sset: ScenarioSet, c: EventVector) -> Partition:
    """Group scenarios by signature; blocks ordered by smallest member id."""
    groups: dict[tuple[int, ...], list[int]] = {}
    for sid, sig in enumerate(signature_table(sset, c)):
        groups.setdefault(sig, []).append(sid)
    blocks = sorted((tuple(g) for g in groups.values()), key=lambda b: b[0])
    return Partition(c, tuple(blocks))


def differentiator_set(sset: ScenarioSet, r: int, s: int) -> DifferentiatorSet:
    """Earliest distinguishing event per parameter where outcomes differ."""
    if r == s:
        raise NacgenError("a scenario has no differentiator against itself")
    a, b = sset.scenarios[r], sset.scenarios[s]
    events = set()
    for p, oa, ob in zip(sset.params, a.outcomes, b.outcomes):
        if oa == ob:
            continue
        for q in range(1, p.chain_length + 1):
            if p.table[q][oa - 1] != p.table[q][ob - 1]:
                events.add((p.id, q))
                break
    return DifferentiatorSet(frozenset(events))


def tau(sset: ScenarioSet, r: int, s: int) -> float:
    """Latest period at which ``r`` and ``s`` look alike exogenously.

    Considers scheduled parameters only: an event counts toward a period
    ``t`` once its scheduled period is <= ``t``.  Returns ``NEVER`` when
    no scheduled parameter ever separates the pair.
    """
    exo = [p for p in sset.params if p.kind == EXOGENOUS]
    if not exo:
        raise NacgenError("tau needs at least one exogenous parameter")
    a, b = sset.scenarios[r], sset.scenarios[s]
    first_split = NEVER
    for i, p in enumerate(sset.params):
        if p.kind != EXOGENOUS:
            continue
        oa, ob = a.outcomes[i], b.outcomes[i]
        if oa == ob:
            continue
        for q in range(1, p.chain_length + 1):
            if p.table[q][oa - 1] != p.table[q][ob - 1]:
                first_split = min(first_split, p.schedule[q - 1])
                break
    if math.isinf(first_split):
        return NEVER
    return first_split - 1


def save_scenarios(sset: ScenarioSet, path: str) -> None:
    """Line format: header ``n_params m_1 .. m_k``, then one scenario per line."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(serialize_scenarios(sset))


def serialize_scenarios(sset: ScenarioSet) -> str:
    header = " ".join(
        [str(len(sset.params))] + [str(p.chain_length) for p in sset.params]
    )
    lines = [header]
    for s in sset.scenarios:
        lines.append(" ".join(str(o) for o in s.outcomes))
    return "\n".join(lines) + "\n"


def parse_scenarios(params: list[GradualParameter], text: str) -> ScenarioSet:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise NacgenError("empty scenario file")
    header = [int(tok) for tok in lines[0].split()]
    expected = [len(params)] + [p.chain_length for p in params]
    if header != expected:
        raise NacgenError(
            f"scenario file header {header} does not match parameters {expected}"
        )
    vectors = [tuple(int(tok) for tok in ln.split()) for ln in lines[1:]]
    return _from_vectors(params, vectors, "file")


def load_scenarios(params: list[GradualParameter], path: str) -> ScenarioSet:
    with open(path, "r", encoding="ascii") as fh:
        return parse_scenarios(params, fh.read())
