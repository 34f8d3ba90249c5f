"""Independent brute-force verification of pair sets.

Everything here re-derives its answers from first principles (partition
connectivity, subset enumeration, counting), deliberately sharing no
logic with the sweep in :mod:`nacgen.snac`, so the two can be played
against each other in tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import NacgenError
from .scenarios import ScenarioSet, partition
from .snac import DisjointSet, NacGraph, components_under
from .uncertainty import EventVector, GradualParameter, enumerate_event_lattice


@dataclass(frozen=True)
class Violation:
    """A block left disconnected, with one witness pair of separated ids."""

    cut: EventVector
    block: tuple[int, ...]
    witness: tuple[int, int]


@dataclass
class VerificationReport:
    sufficient: bool
    violations: list[Violation] = field(default_factory=list)
    necessary_edges: dict[tuple[int, int], bool] | None = None
    minimal: bool | None = None
    min_cardinality: int | None = None

    def all_edges_necessary(self) -> bool:
        if self.necessary_edges is None:
            return False
        return all(self.necessary_edges.values())

    def to_dict(self) -> dict:
        out: dict = {"sufficient": self.sufficient}
        out["violations"] = [
            {
                "cut": list(v.cut.counts),
                "block": list(v.block),
                "witness": list(v.witness),
            }
            for v in self.violations
        ]
        if self.necessary_edges is not None:
            out["necessary_edges"] = {
                f"{r}-{s}": flag for (r, s), flag in sorted(self.necessary_edges.items())
            }
        if self.minimal is not None:
            out["minimal"] = self.minimal
        if self.min_cardinality is not None:
            out["min_cardinality"] = self.min_cardinality
        return out

    def summary_lines(self) -> list[str]:
        lines = [f"sufficient: {'yes' if self.sufficient else 'no'}"]
        for v in self.violations:
            lines.append(
                f"  violation at cut {v.cut}: block {v.block} "
                f"separates {v.witness[0]} from {v.witness[1]}"
            )
        if self.necessary_edges is not None:
            total = len(self.necessary_edges)
            good = sum(self.necessary_edges.values())
            if good == total:
                lines.append(f"all {total} edges necessary")
            else:
                redundant = sorted(
                    e for e, flag in self.necessary_edges.items() if not flag
                )
                lines.append(f"{total - good} redundant edge(s): {redundant}")
        if self.min_cardinality is not None:
            lines.append(f"exhaustive minimum: {self.min_cardinality}")
            lines.append(f"minimal: {'yes' if self.minimal else 'no'}")
        return lines


def all_partitions(params, sset: ScenarioSet):
    """Every cut's partition, deepest cuts first (their blocks fail cheapest)."""
    lattice = enumerate_event_lattice(list(params))
    out = []
    for order in sorted(lattice, reverse=True):
        for cut in lattice[order]:
            out.append(partition(sset, cut))
    return out


def _check_blocks(partitions, edges, fail_fast: bool) -> list[Violation]:
    violations = []
    for part in partitions:
        for block in part.blocks:
            if len(block) == 1:
                continue
            comps = components_under(edges, block)
            if len(comps) > 1:
                violations.append(
                    Violation(part.event_vector, block, (comps[0][0], comps[1][0]))
                )
                if fail_fast:
                    return violations
    return violations


def check_sufficiency(
    params, sset: ScenarioSet, graph: NacGraph, fail_fast: bool = False
) -> VerificationReport:
    """Is every block of every cut connected by the graph's edges?"""
    if graph.n != len(sset):
        raise NacgenError("graph and scenario set sizes differ")
    partitions = all_partitions(params, sset)
    violations = _check_blocks(partitions, graph.edge_list(), fail_fast)
    return VerificationReport(sufficient=not violations, violations=violations)


def check_necessity(params, sset: ScenarioSet, graph: NacGraph) -> VerificationReport:
    """Flag each edge whose removal breaks some block's connectivity.

    Requires a sufficient graph; when it is not, the report carries the
    sufficiency violations and no per-edge flags.
    """
    partitions = all_partitions(params, sset)
    edges = graph.edge_list()
    violations = _check_blocks(partitions, edges, fail_fast=False)
    if violations:
        return VerificationReport(sufficient=False, violations=violations)
    flags: dict[tuple[int, int], bool] = {}
    for drop in edges:
        reduced = [e for e in edges if e != drop]
        flags[drop] = bool(_check_blocks(partitions, reduced, fail_fast=True))
    return VerificationReport(sufficient=True, necessary_edges=flags)


def full_pair_count(n: int) -> int:
    """Number of unordered scenario pairs, the unreduced baseline."""
    if n < 0:
        raise NacgenError("scenario count must be >= 0")
    return n * (n - 1) // 2


def min_pairs_full_grid(params: list[GradualParameter]) -> int:
    """Closed-form minimum pair count for the FULL Cartesian scenario set.

    Fix any parameter i and the outcomes of all others: those scenarios
    form an axis line of the outcome grid.  Each line is itself a block
    (take the cut with every other chain complete and chain i untouched),
    so any sufficient pair set needs at least len(line) - 1 edges whose
    endpoints both lie on that line.  An edge lies on at most one line
    (its endpoints would otherwise differ in two parameters at once), so
    the per-line requirements add up:

        sum_i (|outcomes_i| - 1) * prod_{j != i} |outcomes_j|

    The bound is tight: connecting consecutive outcomes along every line
    satisfies every block of every cut.
    """
    total = 0
    for i, p in enumerate(params):
        others = 1
        for j, q in enumerate(params):
            if j != i:
                others *= q.outcome_count
        total += (p.outcome_count - 1) * others
    return total


def _candidate_pairs(partitions) -> list[tuple[int, int]]:
    """Pairs co-located in at least one block; others can never help."""
    cands = set()
    for part in partitions:
        for block in part.blocks:
            for r, s in itertools.combinations(block, 2):
                cands.add((r, s))
    return sorted(cands)


def _spans(n: int, edges) -> bool:
    dsu = DisjointSet(n)
    merged = 1
    for r, s in edges:
        if dsu.union(r, s):
            merged += 1
    return merged == n


def min_nac_exhaustive(
    params, sset: ScenarioSet, cap: int = 6
) -> tuple[int, list[tuple[int, int]]]:
    """Smallest sufficient pair set by subset enumeration.

    Searches candidate-pair subsets by increasing cardinality, starting
    from the spanning bound set by the no-information block (which always
    holds the whole set), and returns the first sufficient subset found;
    candidate order makes the witness deterministic.
    """
    n = len(sset)
    if n > cap:
        raise NacgenError(f"exhaustive search capped at {cap} scenarios, got {n}")
    if n <= 1:
        return 0, []
    partitions = all_partitions(params, sset)
    candidates = _candidate_pairs(partitions)
    for k in range(n - 1, len(candidates) + 1):
        for combo in itertools.combinations(candidates, k):
            if not _spans(n, combo):
                continue
            if not _check_blocks(partitions, combo, fail_fast=True):
                return k, list(combo)
    raise NacgenError("no sufficient subset found (unreachable for valid sets)")
