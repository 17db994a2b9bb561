"""Validated undirected connected graphs with deterministic traversals.

All tie-breaks are by node id so that every run of every algorithm is
reproducible from its seed alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, List, Set, Tuple

from .leases import LeaseCatalog, Triplet


class GraphError(ValueError):
    pass


class BadNodeId(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class Disconnected(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    node_count: int
    adjacency: Tuple[Tuple[int, ...], ...]  # sorted neighbor list per node

    def nodes(self) -> range:
        return range(self.node_count)

    def neighbors(self, u: int) -> Tuple[int, ...]:
        return self.adjacency[u]

    def closed_neighborhood(self, u: int) -> Tuple[int, ...]:
        """u together with its neighbors, sorted."""
        return tuple(sorted((u, *self.adjacency[u])))

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def edges(self) -> Iterator[Tuple[int, int]]:
        for u in range(self.node_count):
            for v in self.adjacency[u]:
                if u < v:
                    yield (u, v)


def build_graph(n: int, edges: Iterable[Tuple[int, int]]) -> Graph:
    """Validate and build: simple, undirected, connected; node ids in [0, n)."""
    if n < 1:
        raise BadNodeId(f"need at least one node, got n={n}")
    adj: List[Set[int]] = [set() for _ in range(n)]
    seen = set()
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise BadNodeId(f"edge ({u}, {v}) outside [0, {n})")
        if u == v:
            raise SelfLoop(f"self loop at node {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdge(f"edge {key} listed twice")
        seen.add(key)
        adj[u].add(v)
        adj[v].add(u)
    graph = Graph(node_count=n, adjacency=tuple(tuple(sorted(s)) for s in adj))
    reached = connected_component(graph, 0, set(range(n)))
    if len(reached) != n:
        missing = min(set(range(n)) - reached)
        raise Disconnected(f"node {missing} unreachable from node 0")
    return graph


def max_degree(graph: Graph) -> int:
    return max(len(nb) for nb in graph.adjacency)


def bfs_distances(graph: Graph, source: int) -> List[int]:
    dist = [-1] * graph.node_count
    dist[source] = 0
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            for v in graph.adjacency[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist


def all_pairs_distances(graph: Graph) -> List[List[int]]:
    return [bfs_distances(graph, u) for u in graph.nodes()]


def shortest_path(graph: Graph, u: int, v: int) -> List[int]:
    """Minimum-hop path from u to v, ties broken toward the smallest next node id."""
    dist_to_v = bfs_distances(graph, v)
    path = [u]
    cur = u
    while cur != v:
        cur = min(w for w in graph.adjacency[cur] if dist_to_v[w] == dist_to_v[cur] - 1)
        path.append(cur)
    return path


def connected_component(graph: Graph, start: int, allowed: Set[int]) -> Set[int]:
    """Component of ``start`` in the subgraph induced by ``allowed`` (must contain start)."""
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for y in graph.adjacency[x]:
                if y in allowed and y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def components(graph: Graph, allowed: Set[int]) -> List[Set[int]]:
    """Connected components of the induced subgraph, ordered by smallest member."""
    out = []
    left = set(allowed)
    while left:
        start = min(left)
        comp = connected_component(graph, start, left)
        out.append(comp)
        left -= comp
    return out


@dataclass(frozen=True)
class DominatorSet:
    """All t-triplets that can dominate ``target``: closed neighborhood x catalog."""

    target: int
    time: int
    triplets: Tuple[Triplet, ...]  # sorted

    def __len__(self) -> int:
        return len(self.triplets)

    def __iter__(self) -> Iterator[Triplet]:
        return iter(self.triplets)


def dominators(graph: Graph, u: int, t: int, catalog: LeaseCatalog) -> DominatorSet:
    """The (deg(u)+1)·|L| candidate t-triplets on u's closed neighborhood."""
    trs = tuple(
        Triplet(i, lt.index, t - t % lt.duration)
        for i in graph.closed_neighborhood(u)
        for lt in catalog
    )
    return DominatorSet(target=u, time=t, triplets=tuple(sorted(trs)))
