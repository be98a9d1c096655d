"""Dijkstra benchmark: the heap against a quadratic reference solver.

Single-source shortest paths is the classic decrease-key workload.  The
reference solver scans for the closest unvisited vertex each round (no
priority queue at all), so a distance mismatch can only implicate the
heap side.
"""

import random
from dataclasses import dataclass

import numpy as np

from .heap import AMORTIZED, Heap

_MAX_WEIGHT = 1_000_000


def generate_graph(seed, n_vertices, n_edges):
    """Connected undirected multigraph as an edge list (u, v, w).

    A random spanning tree guarantees connectivity; remaining edges are
    uniform random pairs.  Parallel edges are allowed and harmless.
    """
    if n_vertices < 1:
        raise ValueError("need at least one vertex")
    if n_edges < n_vertices - 1:
        raise ValueError("too few edges for a connected graph")
    rng = random.Random(seed)
    edges = []
    for v in range(1, n_vertices):
        edges.append((rng.randrange(v), v, rng.randrange(1, _MAX_WEIGHT)))
    while len(edges) < n_edges:
        u = rng.randrange(n_vertices)
        v = rng.randrange(n_vertices)
        if u == v:
            continue
        edges.append((u, v, rng.randrange(1, _MAX_WEIGHT)))
    return edges


def heap_dijkstra(n_vertices, edges, source=0, strategy=AMORTIZED):
    """Distances from ``source`` using the decrease-key heap."""
    adjacency = [[] for _ in range(n_vertices)]
    for u, v, w in edges:
        adjacency[u].append((v, w))
        adjacency[v].append((u, w))

    heap = Heap(strategy=strategy)
    dist = [None] * n_vertices
    handle_of = [None] * n_vertices
    vertex_of = {}
    done = [False] * n_vertices

    dist[source] = 0
    handle_of[source] = heap.insert(0)
    vertex_of[handle_of[source]] = source

    while (popped := heap.delete_min()) is not None:
        d, handle = popped
        u = vertex_of[handle]
        done[u] = True
        for v, w in adjacency[u]:
            if done[v]:
                continue
            nd = d + w
            if dist[v] is None:
                dist[v] = nd
                handle_of[v] = heap.insert(nd)
                vertex_of[handle_of[v]] = v
            elif nd < dist[v]:
                dist[v] = nd
                heap.decrease_key(handle_of[v], nd)
    return dist, heap.stats_snapshot()


def reference_dijkstra(n_vertices, edges, source=0):
    """Quadratic Dijkstra: closest-unvisited scan, vectorized relaxation."""
    targets = [[] for _ in range(n_vertices)]
    weights = [[] for _ in range(n_vertices)]
    for u, v, w in edges:
        targets[u].append(v)
        weights[u].append(w)
        targets[v].append(u)
        weights[v].append(w)
    nbr_idx = [np.asarray(t, dtype=np.int64) for t in targets]
    nbr_w = [np.asarray(w, dtype=np.float64) for w in weights]

    dist = np.full(n_vertices, np.inf)
    done = np.zeros(n_vertices, dtype=bool)
    dist[source] = 0.0
    for _ in range(n_vertices):
        candidates = np.where(done, np.inf, dist)
        u = int(candidates.argmin())
        if candidates[u] == np.inf:
            break
        done[u] = True
        if nbr_idx[u].size:
            np.minimum.at(dist, nbr_idx[u], dist[u] + nbr_w[u])
    return [None if d == np.inf else int(d) for d in dist]


@dataclass
class BenchVerdict:
    ok: bool
    n_vertices: int
    n_edges: int
    bad_vertex: int = None
    expected: object = None
    got: object = None
    stats: object = None

    def describe(self):
        if self.ok:
            return (
                f"pass ({self.n_vertices} vertices, {self.n_edges} edges)"
            )
        return (
            f"fail at vertex {self.bad_vertex}: expected {self.expected}, "
            f"got {self.got}"
        )


def dijkstra_bench(graph_seed, n_vertices, n_edges, strategy=AMORTIZED):
    """Compare heap-based distances against the quadratic reference."""
    edges = generate_graph(graph_seed, n_vertices, n_edges)
    got, stats = heap_dijkstra(n_vertices, edges, strategy=strategy)
    expected = reference_dijkstra(n_vertices, edges)
    for vertex, (e, g) in enumerate(zip(expected, got)):
        if e != g:
            return BenchVerdict(
                False, n_vertices, n_edges,
                bad_vertex=vertex, expected=e, got=g, stats=stats,
            )
    return BenchVerdict(True, n_vertices, n_edges, stats=stats)
