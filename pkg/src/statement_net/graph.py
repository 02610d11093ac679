"""Statement networks and their k-core decomposition.

Every statement sentence naming ``n`` people contributes all ``n*(n-1)/2``
unordered pairs as dated edge events. The simple graph (distinct pairs, no
multiplicity) is what the core decomposition runs on; the event log keeps
multiplicity for per-day counting.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from datetime import date
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import DataError
from .io import atomic_write_text

Pair = tuple[str, str]


def ordered_pair(a: str, b: str) -> Pair:
    if a == b:
        raise ValueError(f"self-loop on {a!r}")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class EdgeEvent:
    a: str
    b: str
    date: date | None
    article_id: str
    sentence_index: int
    source: str = ""

    def __post_init__(self):
        if self.a >= self.b:
            raise ValueError(f"endpoints must be distinct and ordered, got {self.a!r}, {self.b!r}")

    @property
    def endpoints(self) -> Pair:
        return (self.a, self.b)


def _event_key(e: EdgeEvent):
    return (e.date or date.min, e.source, e.article_id, e.sentence_index, e.a, e.b)


def pairs_from_statement(entities: Sequence[str]) -> set[Pair]:
    """All unordered pairs of distinct entities, each stored lexicographically."""
    if len(entities) < 2:
        raise ValueError(f"a statement needs at least 2 entities, got {len(entities)}")
    if len(set(entities)) != len(entities):
        raise ValueError(f"entities are not distinct: {list(entities)!r}")
    return {ordered_pair(a, b) for a, b in combinations(entities, 2)}


@dataclass(frozen=True)
class StatementNetwork:
    nodes: tuple[str, ...] = ()
    simple_edges: tuple[Pair, ...] = ()
    events: tuple[EdgeEvent, ...] = field(default=(), repr=False)

    @classmethod
    def from_events(cls, events: Iterable[EdgeEvent]) -> "StatementNetwork":
        events = tuple(sorted(events, key=_event_key))
        edges = sorted({e.endpoints for e in events})
        nodes = sorted({v for edge in edges for v in edge})
        return cls(tuple(nodes), tuple(edges), events)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str]]) -> "StatementNetwork":
        """Simple graph without an event log (for edge-list files and tests)."""
        simple = sorted({ordered_pair(a, b) for a, b in edges})
        nodes = sorted({v for edge in simple for v in edge})
        return cls(tuple(nodes), tuple(simple), ())

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.nodes}
        for a, b in self.simple_edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def edge_counts(self) -> dict[Pair, int]:
        """Events per simple edge; 1 for every edge when there is no event log."""
        if not self.events:
            return {edge: 1 for edge in self.simple_edges}
        counts = Counter(e.endpoints for e in self.events)
        return {edge: counts[edge] for edge in self.simple_edges}

    def __len__(self) -> int:
        return len(self.nodes)


def statement_events(statement) -> list[EdgeEvent]:
    return [
        EdgeEvent(a, b, statement.published, statement.article_id, statement.sentence_index, statement.source)
        for a, b in sorted(pairs_from_statement(statement.entities))
    ]


def build_network(statements, window: tuple[date, date] | None = None) -> StatementNetwork:
    """Fold statements into a network, keeping those dated within the inclusive ``window``."""
    events: list[EdgeEvent] = []
    for st in statements:
        if window is not None:
            if st.published is None:
                raise DataError(f"statement {st.article_id}#{st.sentence_index} has no date")
            if not (window[0] <= st.published <= window[1]):
                continue
        events.extend(statement_events(st))
    return StatementNetwork.from_events(events)


@dataclass(frozen=True)
class CoreDecomposition:
    core_number: Mapping[str, int]
    max_core: int
    shells: Mapping[int, frozenset[str]]

    @property
    def n_shells(self) -> int:
        """Number of distinct non-empty shells."""
        return len(self.shells)

    def k_core(self, k: int) -> frozenset[str]:
        return frozenset(v for v, c in self.core_number.items() if c >= k)

    def get(self, node: str) -> int:
        return self.core_number.get(node, 0)


def core_numbers(adj: Mapping[str, Iterable[str]]) -> dict[str, int]:
    """Core number of every node by bucket-ordered minimum-degree peeling, O(n + m)."""
    nodes = sorted(adj)
    index = {v: i for i, v in enumerate(nodes)}
    nbrs = [[index[u] for u in sorted(adj[v])] for v in nodes]
    n = len(nodes)
    deg = [len(nb) for nb in nbrs]
    max_deg = max(deg, default=0)

    # vert holds nodes sorted by current degree; bin_start[d] is where degree d begins
    bin_start = [0] * (max_deg + 1)
    for d in deg:
        bin_start[d] += 1
    start = 0
    for d in range(max_deg + 1):
        start, bin_start[d] = start + bin_start[d], start
    pos = [0] * n
    vert = [0] * n
    fill = bin_start[:]
    for v in range(n):
        pos[v] = fill[deg[v]]
        vert[pos[v]] = v
        fill[deg[v]] += 1

    for i in range(n):
        v = vert[i]
        for u in nbrs[v]:
            if deg[u] > deg[v]:
                du, pu = deg[u], pos[u]
                pw = bin_start[du]
                w = vert[pw]
                if u != w:
                    pos[u], pos[w] = pw, pu
                    vert[pu], vert[pw] = w, u
                bin_start[du] += 1
                deg[u] -= 1
    return {nodes[i]: deg[i] for i in range(n)}


def decomposition_from_numbers(numbers: Mapping[str, int]) -> CoreDecomposition:
    core = dict(sorted(numbers.items()))
    shells: dict[int, set[str]] = {}
    for v, k in core.items():
        shells.setdefault(k, set()).add(v)
    return CoreDecomposition(
        core_number=core,
        max_core=max(core.values(), default=0),
        shells={k: frozenset(shells[k]) for k in sorted(shells)},
    )


def k_core_decompose(network: StatementNetwork) -> CoreDecomposition:
    return decomposition_from_numbers(core_numbers(network.adjacency()))


def top_core(decomposition: CoreDecomposition) -> frozenset[str]:
    if not decomposition.core_number:
        raise ValueError("top core of an empty network is undefined")
    return decomposition.shells[decomposition.max_core]


def write_edge_list(network: StatementNetwork, path) -> Path:
    """``nodeA<TAB>nodeB<TAB>event_count`` per simple edge."""
    counts = network.edge_counts()
    lines = [f"{a}\t{b}\t{counts[(a, b)]}\n" for a, b in network.simple_edges]
    return atomic_write_text(path, "".join(lines))


def write_events(network: StatementNetwork, path) -> Path:
    """``nodeA<TAB>nodeB<TAB>date<TAB>article_id`` per edge event."""
    lines = [
        f"{e.a}\t{e.b}\t{'' if e.date is None else e.date.isoformat()}\t{e.article_id}\n"
        for e in network.events
    ]
    return atomic_write_text(path, "".join(lines))


def read_edge_list(path) -> StatementNetwork:
    edges = []
    path = Path(path)
    with path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) < 2 or parts[0] == parts[1]:
                raise DataError(f"{path}: line {lineno}: malformed edge line")
            edges.append((parts[0], parts[1]))
    return StatementNetwork.from_edges(edges)
