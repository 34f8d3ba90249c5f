"""Minimum-cardinality scenario-pair selection (the SNAC sweep).

The sweep walks the event lattice from the deepest information state down
to no information.  At each level it looks at every cut of that order,
splits the scenario set into blocks of indistinguishable scenarios, and
adds just enough edges to make each block connected given the edges
accepted at deeper levels.  Edges produced at one level are buffered and
only become visible when the next level starts, so sibling cuts of equal
order act on the same snapshot; the cycles this can create are kept.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NacgenError
from .scenarios import ScenarioSet, signature_table
from .uncertainty import EventVector, enumerate_event_lattice


class DisjointSet:
    """Union-find over ``0..n-1`` with union by size and path compression."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


@dataclass(frozen=True)
class EdgeInfo:
    """Why an edge exists: the cut and block that forced it, and the level."""

    level: int
    cut: EventVector
    block_min: int


@dataclass
class NacGraph:
    """Scenario pairs selected for constraint enforcement.

    ``edges`` maps ``(r, s)`` with ``r < s`` to provenance.  Treated as
    immutable once returned by :func:`run_snac`.
    """

    n: int
    edges: dict[tuple[int, int], EdgeInfo]

    def __post_init__(self):
        for (r, s) in self.edges:
            if not 0 <= r < s < self.n:
                raise NacgenError(f"bad edge ({r}, {s}) for n={self.n}")

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __len__(self):
        return len(self.edges)


def components_under(
    edges: Iterable[tuple[int, int]], block: Sequence[int]
) -> list[list[int]]:
    """Connected components of the subgraph induced by ``block``.

    Edges with an endpoint outside the block are ignored.  Components are
    returned ordered by minimum member, members ascending.
    """
    members = sorted(set(block))
    index = {sid: i for i, sid in enumerate(members)}
    dsu = DisjointSet(len(members))
    for r, s in edges:
        if r in index and s in index:
            dsu.union(index[r], index[s])
    groups: dict[int, list[int]] = {}
    for sid in members:
        groups.setdefault(dsu.find(index[sid]), []).append(sid)
    return sorted(groups.values(), key=lambda g: g[0])


def connect_components(components: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    """Star edges joining the components: each later representative to the first.

    Representatives are component minima; with components ordered by
    minimum member the first representative is the overall minimum, so
    every returned pair is already ``(small, large)``.
    """
    if not components:
        raise NacgenError("need at least one component")
    root = min(components[0])
    return [(root, min(comp)) for comp in components[1:]]


def run_snac(params, sset: ScenarioSet) -> NacGraph:
    """Build the minimum-cardinality pair set for ``sset``.

    Deterministic: cuts iterate in lexicographic order inside each level,
    blocks in order of minimum member, components likewise, and stars are
    rooted at the first component.
    """
    n = len(sset)
    if n == 0:
        raise NacgenError("scenario set is empty")
    lattice = enumerate_event_lattice(list(params))
    max_order = max(lattice)
    edges: dict[tuple[int, int], EdgeInfo] = {}
    committed: list[tuple[int, int]] = []
    for level in range(max_order, -1, -1):
        if level == max_order:
            # Full realization: every scenario is alone in its block.
            continue
        buffer: dict[tuple[int, int], EdgeInfo] = {}
        for cut in lattice[level]:
            sigs = signature_table(sset, cut)
            block_of: dict[tuple[int, ...], int] = {}
            blocks: list[list[int]] = []
            for sid, sig in enumerate(sigs):
                b = block_of.get(sig)
                if b is None:
                    block_of[sig] = len(blocks)
                    blocks.append([sid])
                else:
                    blocks[b].append(sid)
            if len(blocks) == n:
                continue
            # Bucket snapshot edges whose endpoints share a block of this cut.
            per_block: list[list[tuple[int, int]]] = [[] for _ in blocks]
            for r, s in committed:
                if sigs[r] == sigs[s]:
                    per_block[block_of[sigs[r]]].append((r, s))
            for block, inner in zip(blocks, per_block):
                if len(block) == 1:
                    continue
                comps = components_under(inner, block)
                for edge in connect_components(comps):
                    if edge not in buffer:
                        buffer[edge] = EdgeInfo(level, cut, block[0])
        edges.update(buffer)
        committed.extend(buffer)
    return NacGraph(n, edges)


def serialize_graph(graph: NacGraph, provenance: bool = False) -> str:
    """Header ``n edge_count``, then ``r s level`` per edge.

    With ``provenance`` each line also carries the cut's event counts
    (comma separated) and the block's minimum id.
    """
    lines = [f"{graph.n} {len(graph.edges)}"]
    for (r, s) in graph.edge_list():
        info = graph.edges[(r, s)]
        if provenance:
            counts = ",".join(str(q) for q in info.cut.counts)
            lines.append(f"{r} {s} {info.level} {counts} {info.block_min}")
        else:
            lines.append(f"{r} {s} {info.level}")
    return "\n".join(lines) + "\n"


def save_graph(graph: NacGraph, path: str, provenance: bool = False) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(serialize_graph(graph, provenance=provenance))


def parse_graph(text: str) -> NacGraph:
    """Inverse of :func:`serialize_graph` (provenance lines accepted)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise NacgenError("empty graph file")
    n, m = (int(tok) for tok in lines[0].split())
    if len(lines) - 1 != m:
        raise NacgenError(f"graph file declares {m} edges, has {len(lines) - 1}")
    edges: dict[tuple[int, int], EdgeInfo] = {}
    for ln in lines[1:]:
        toks = ln.split()
        r, s, level = int(toks[0]), int(toks[1]), int(toks[2])
        if len(toks) >= 5:
            cut = EventVector(tuple(int(q) for q in toks[3].split(",")))
            info = EdgeInfo(level, cut, int(toks[4]))
        else:
            info = EdgeInfo(level, EventVector(()), -1)
        edges[(r, s)] = info
    return NacGraph(n, edges)


def load_graph(path: str) -> NacGraph:
    with open(path, "r", encoding="ascii") as fh:
        return parse_graph(fh.read())
