"""Spatial aggregation vocabulary: fields, neighborhood graphs and the
aggregate / filter / classify / redescribe operators.

Nodes are identified by their index into the point array, never by
coordinates.  Every object here is an immutable value; operators return
new objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree


class InvalidInputError(ValueError):
    """Raised for malformed spatial inputs (non-finite coordinates, duplicates...)."""


class NotAPathError(ValueError):
    """Raised when an equivalence class cannot be redescribed as a curve."""

    def __init__(self, class_index: int, nodes: Sequence[int], reason: str):
        self.class_index = class_index
        self.nodes = tuple(int(n) for n in nodes)
        super().__init__(f"class {class_index} {list(self.nodes)} is not a simple path: {reason}")


def as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[1] < 1:
        raise InvalidInputError(f"points must be an (N, n) array, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise InvalidInputError("points contain non-finite coordinates")
    return pts


@dataclass(frozen=True)
class Field:
    """A sampled mapping from points of R^n to scalar or vector values.

    ``values`` always has shape (N, arity); arity 1 is a scalar field.
    ``shape`` is set for fields living on a regular grid (points in C order).
    """

    points: np.ndarray
    values: np.ndarray
    shape: tuple[int, ...] | None = None

    def __post_init__(self):
        pts = as_points(self.points)
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim == 1:
            vals = vals[:, None]
        if vals.shape[0] != pts.shape[0]:
            raise InvalidInputError(
                f"{pts.shape[0]} points but {vals.shape[0]} values")
        if not np.all(np.isfinite(vals)):
            raise InvalidInputError("field values must be finite")
        if self.shape is not None and int(np.prod(self.shape)) != pts.shape[0]:
            raise InvalidInputError(f"grid shape {self.shape} does not match {pts.shape[0]} points")
        pts.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    @property
    def arity(self) -> int:
        return self.values.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def check_distinct(self) -> None:
        if len(np.unique(self.points, axis=0)) != len(self):
            raise InvalidInputError("field contains duplicate points")


def _canonical_edges(edges, n: int) -> np.ndarray:
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if len(e) == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if e.min() < 0 or e.max() >= n:
        raise InvalidInputError("edge index out of range")
    # sorted, deduplicated (from, to) pairs via a scalar key
    key = np.unique(e[:, 0] * n + e[:, 1])
    return np.stack([key // n, key % n], axis=1)


@dataclass(frozen=True)
class NGraph:
    """Directed neighborhood graph over indexed spatial objects."""

    nodes: np.ndarray
    edges: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=np.int64))

    def __post_init__(self):
        nodes = as_points(self.nodes)
        edges = _canonical_edges(self.edges, nodes.shape[0])
        if len(edges):
            if np.any(edges[:, 0] == edges[:, 1]):
                raise InvalidInputError("self-loops are not allowed")
        nodes.setflags(write=False)
        edges.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    def with_edges(self, edges) -> "NGraph":
        return NGraph(self.nodes, edges)

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(a), int(b)) for a, b in self.edges}

    def out_degree(self) -> np.ndarray:
        return np.bincount(self.edges[:, 0], minlength=self.n_nodes)

    def edge_lengths(self) -> np.ndarray:
        d = self.nodes[self.edges[:, 1]] - self.nodes[self.edges[:, 0]]
        return np.linalg.norm(d, axis=1)


@dataclass(frozen=True)
class EquivalenceClasses:
    """Partition of node indices; ``labels[i]`` is the class of node i."""

    labels: np.ndarray

    @property
    def classes(self) -> list[list[int]]:
        labels = np.asarray(self.labels)
        order = np.argsort(labels, kind="stable")
        cuts = np.flatnonzero(np.diff(labels[order])) + 1
        return [part.tolist() for part in np.split(order, cuts)] if len(labels) else []

    def __len__(self) -> int:
        return len(np.unique(self.labels))


@dataclass(frozen=True)
class Curve:
    """Ordered polyline of node indices together with their coordinates."""

    indices: tuple[int, ...]
    vertices: np.ndarray

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def start(self) -> np.ndarray:
        return self.vertices[0]

    @property
    def end(self) -> np.ndarray:
        return self.vertices[-1]

    def reversed(self) -> "Curve":
        return Curve(self.indices[::-1], self.vertices[::-1])


def aggregate_near(points, radius: float) -> NGraph:
    """Connect every pair of points within ``radius`` (both directions).

    With radius 1.5 on a unit grid this is 8-adjacency (26 in 3-D).
    """
    pts = as_points(points)
    if not radius > 0:
        raise InvalidInputError("radius must be positive")
    pairs = cKDTree(pts).query_pairs(radius, output_type="ndarray")
    if len(pairs):
        d = np.linalg.norm(pts[pairs[:, 0]] - pts[pairs[:, 1]], axis=1)
        if np.any(d == 0):
            raise InvalidInputError("points must be pairwise distinct")
    edges = np.concatenate([pairs, pairs[:, ::-1]]) if len(pairs) else pairs
    return NGraph(pts, edges)


def filter_ngraph(g: NGraph, predicate: Callable) -> NGraph:
    """Keep the edges for which ``predicate`` holds.

    ``predicate`` receives the whole (E, 2) edge array and returns an (E,)
    boolean mask.  Wrap a scalar ``fn(i, j)`` with :func:`per_edge`.
    """
    if len(g.edges) == 0:
        return g
    mask = np.asarray(predicate(g.edges), dtype=bool)
    return g.with_edges(g.edges[mask])


def per_edge(fn: Callable[[int, int], float]) -> Callable[[np.ndarray], np.ndarray]:
    """Lift a scalar ``fn(i, j)`` to the array form expected by the operators."""
    return lambda edges: np.array([fn(int(a), int(b)) for a, b in edges])


def best_neighbors(g: NGraph, metric: Callable) -> NGraph:
    """Keep, for each node, the single outgoing edge with maximal metric.

    Ties go to the lowest destination index.
    """
    if len(g.edges) == 0:
        return g
    m = np.asarray(metric(g.edges), dtype=float)
    if not np.all(np.isfinite(m)):
        raise InvalidInputError("metric must be finite on every edge")
    # sort by source, then metric descending, then destination ascending
    order = np.lexsort((g.edges[:, 1], -m, g.edges[:, 0]))
    src = g.edges[order, 0]
    first = np.ones(len(src), dtype=bool)
    first[1:] = src[1:] != src[:-1]
    return g.with_edges(g.edges[order[first]])


def transpose_ngraph(g: NGraph) -> NGraph:
    return g.with_edges(g.edges[:, ::-1])


def symmetric_closure(g: NGraph) -> NGraph:
    """Union of ``g`` with its transpose."""
    return g.with_edges(np.concatenate([g.edges, g.edges[:, ::-1]]))


def classify_transitive(g: NGraph) -> EquivalenceClasses:
    """Connected components of ``g`` read as an undirected graph.

    Class labels are numbered in order of each class's lowest node.
    """
    n = g.n_nodes
    adj = coo_matrix((np.ones(len(g.edges)), (g.edges[:, 0], g.edges[:, 1])), shape=(n, n))
    _, labels = connected_components(adj, directed=True, connection="weak")
    # relabel by first occurrence so numbering does not depend on the backend
    _, first = np.unique(labels, return_index=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    return EquivalenceClasses(rank[labels])


def redescribe_curves(classes: EquivalenceClasses, g: NGraph) -> list[Curve]:
    """Turn each class that induces a simple path in ``g`` into a Curve.

    Vertices run from the lower-indexed endpoint to the other one.  Raises
    NotAPathError for classes containing a branch node or a cycle.
    """
    n = g.n_nodes
    labels = np.asarray(classes.labels)
    und = np.unique(np.concatenate([g.edges, g.edges[:, ::-1]]), axis=0) if len(g.edges) else g.edges
    und = und[labels[und[:, 0]] == labels[und[:, 1]]]
    deg = np.bincount(und[:, 0], minlength=n)
    members = classes.classes
    bad = np.flatnonzero(deg > 2)
    if len(bad):
        ci = int(labels[bad[0]])
        raise NotAPathError(ci, members[ci], "branch node of degree >= 3")
    nb = np.full((n, 2), -1, dtype=np.int64)
    slot = np.zeros(n, dtype=np.int64)
    for a, b in und.tolist():
        nb[a, slot[a]] = b
        slot[a] += 1
    nb_list = nb.tolist()
    curves = []
    for ci, mem in enumerate(members):
        if len(mem) == 1:
            curves.append(Curve((mem[0],), g.nodes[mem]))
            continue
        ends = [i for i in mem if deg[i] == 1]
        if len(ends) != 2:
            raise NotAPathError(ci, mem, "cycle")
        order = [ends[0]]
        prev, cur = -1, ends[0]
        for _ in range(len(mem) - 1):
            a, b = nb_list[cur]
            nxt = a if a != prev else b
            prev, cur = cur, nxt
            order.append(cur)
        curves.append(Curve(tuple(order), g.nodes[order]))
    return curves
