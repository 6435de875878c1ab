"""Vector-field bundling: the streamline program built from the SAL operators,
plus the ambiguity record that drives focused sampling.

Pipeline (one call to :func:`bundle`):

    aggregate_near -> filter by angle -> best forward neighbour -> transpose
    -> best backward neighbour -> symmetric closure -> classify -> curves
    -> group curves whose flows converge
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.spatial import cKDTree

from . import sal
from .sal import Curve, Field, NGraph


class DegenerateVectorError(ValueError):
    def __init__(self, location, message="zero vector in field"):
        self.location = np.asarray(location, dtype=float)
        super().__init__(f"{message} at {self.location.tolist()}")


@dataclass(frozen=True)
class BundlingParams:
    neighbor_radius: float = 1.5
    angle_similarity: float = 0.7
    distance_penalty: float = 0.2
    ambiguity_margin: float = 0.05

    def __post_init__(self):
        vals = (self.neighbor_radius, self.angle_similarity,
                self.distance_penalty, self.ambiguity_margin)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("bundling parameters must be finite")
        if not 0 < self.angle_similarity < 1:
            raise ValueError("angle_similarity must lie in (0, 1)")
        if self.neighbor_radius <= 0:
            raise ValueError("neighbor_radius must be positive")
        if self.distance_penalty < 0 or self.ambiguity_margin < 0:
            raise ValueError("distance_penalty and ambiguity_margin must be >= 0")


@dataclass(frozen=True)
class AmbiguityDistribution:
    """Spikes where several neighbour choices scored within the margin of the best.

    ``candidates[k]`` holds the node indices that tied at spike k;
    ``passes[k]`` is "forward" or "backward".
    """

    locations: np.ndarray
    counts: np.ndarray
    nodes: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    candidates: tuple = ()
    passes: tuple = ()

    def __post_init__(self):
        loc = np.asarray(self.locations, dtype=float)
        if loc.ndim == 1:
            loc = loc.reshape(len(loc), -1) if len(loc) else loc.reshape(0, 1)
        counts = np.asarray(self.counts, dtype=np.int64).reshape(-1)
        if len(counts) != len(loc):
            raise ValueError("one count per spike location required")
        if np.any(counts < 2):
            raise ValueError("spike counts must be >= 2")
        object.__setattr__(self, "locations", loc)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "nodes", np.asarray(self.nodes, dtype=np.int64).reshape(-1))

    @classmethod
    def empty(cls, dimension: int = 2) -> "AmbiguityDistribution":
        return cls(np.zeros((0, dimension)), np.zeros(0, dtype=np.int64))

    def __len__(self) -> int:
        return len(self.counts)

    @property
    def mass(self) -> int:
        return int(self.counts.sum())

    def subset(self, mask) -> "AmbiguityDistribution":
        mask = np.asarray(mask, dtype=bool)
        keep = np.flatnonzero(mask)
        return AmbiguityDistribution(
            self.locations[mask], self.counts[mask],
            self.nodes[mask] if len(self.nodes) else self.nodes,
            tuple(self.candidates[i] for i in keep) if self.candidates else (),
            tuple(self.passes[i] for i in keep) if self.passes else (),
        )


@dataclass(frozen=True)
class StreamlineSet:
    """Curves oriented along the flow, their convergence groups, and the
    best-forward graph they were built from."""

    curves: list
    groups: list
    curve_of_node: np.ndarray
    flow: NGraph

    def group_of_node(self) -> np.ndarray:
        g = np.empty(len(self.curves), dtype=np.int64)
        for gi, members in enumerate(self.groups):
            g[members] = gi
        return g[self.curve_of_node]


def _unit(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norm = np.linalg.norm(v, axis=-1, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        u = np.where(norm > 0, v / np.where(norm > 0, norm, 1.0), 0.0)
    return u, norm[..., 0]


def edge_angle_score(field: Field, p1: int, p2: int) -> float:
    """Agreement between the mean flow direction at two nodes and the edge
    direction from ``p1`` to ``p2`` (cosine, in [-1, 1])."""
    return float(edge_angle_scores(field.values, field.points, np.array([[p1, p2]]))[0])


def edge_angle_scores(vectors: np.ndarray, points: np.ndarray, edges: np.ndarray) -> np.ndarray:
    vectors = np.asarray(vectors, dtype=float)
    a, b = edges[:, 0], edges[:, 1]
    norms = np.linalg.norm(vectors, axis=1)
    bad = np.flatnonzero((norms[a] == 0) | (norms[b] == 0))
    if len(bad):
        e = edges[bad[0]]
        node = e[0] if norms[e[0]] == 0 else e[1]
        raise DegenerateVectorError(points[node])
    mean_dir, mean_norm = _unit(0.5 * (vectors[a] + vectors[b]))
    edge_dir, edge_len = _unit(points[b] - points[a])
    if np.any(edge_len == 0):
        raise sal.InvalidInputError("edge between coincident points")
    return np.clip(np.einsum("ij,ij->i", mean_dir, edge_dir), -1.0, 1.0)


def grid_unit(points: np.ndarray) -> float:
    """Smallest spacing between distinct points (1.0 for a single point)."""
    if len(points) < 2:
        return 1.0
    d, _ = cKDTree(points).query(points, k=2)
    return float(d[:, 1].min())


def _ties(edges: np.ndarray, metric: np.ndarray, n: int, margin: np.ndarray):
    """For each source node, the candidates whose metric is within margin of the max."""
    if len(edges) == 0:
        return []
    src = edges[:, 0]
    best = np.full(n, -np.inf)
    np.maximum.at(best, src, metric)
    near = metric >= best[src] - margin[src]
    counts = np.bincount(src[near], minlength=n)
    sel = near & (counts[src] >= 2)
    e = edges[sel]
    order = np.lexsort((e[:, 1], e[:, 0]))
    e = e[order]
    cuts = np.flatnonzero(np.diff(e[:, 0])) + 1
    return [(int(part[0, 0]), part[:, 1].copy()) for part in np.split(e, cuts)] if len(e) else []


def _edge_keys(edges: np.ndarray, n: int) -> np.ndarray:
    return edges[:, 0] * n + edges[:, 1]


def _lookup(keys: np.ndarray, values: np.ndarray, query: np.ndarray) -> np.ndarray:
    pos = np.searchsorted(keys, query)
    pos = np.clip(pos, 0, max(len(keys) - 1, 0))
    found = keys[pos] == query if len(keys) else np.zeros(len(query), bool)
    return np.where(found, values[pos] if len(keys) else 0.0, np.nan)


def _break_cycles(g: NGraph, keys: np.ndarray, weight: np.ndarray) -> NGraph:
    """Remove the weakest edge of every cyclic class in a degree<=2 graph."""
    classes = sal.classify_transitive(g)
    und = g.edges[g.edges[:, 0] < g.edges[:, 1]]
    lab = classes.labels[und[:, 0]]
    n_edges = np.bincount(lab, minlength=len(classes))
    n_nodes = np.bincount(classes.labels, minlength=len(classes))
    cyclic = np.flatnonzero((n_edges >= n_nodes) & (n_nodes > 2))
    if len(cyclic) == 0:
        return g
    n = g.n_nodes
    w = np.fmax(_lookup(keys, weight, _edge_keys(und, n)),
                _lookup(keys, weight, _edge_keys(und[:, ::-1], n)))
    w = np.nan_to_num(w, nan=-np.inf)
    drop = []
    for c in cyclic:
        idx = np.flatnonzero(lab == c)
        a, b = und[idx[np.argmin(w[idx])]]
        drop += [a * n + b, b * n + a]
    keep = ~np.isin(_edge_keys(g.edges, n), drop)
    return g.with_edges(g.edges[keep])


def bundle(field: Field, params: BundlingParams = BundlingParams(),
           node_margins=None, edge_filter: Callable | None = None,
           ) -> tuple[StreamlineSet, AmbiguityDistribution]:
    """Bundle a vector field into streamlines and record ambiguous choices.

    Distances (radius, distance penalty) are measured in grid units, the
    smallest spacing between field points.  ``node_margins`` optionally adds
    a per-node amount to ``params.ambiguity_margin``; ``edge_filter`` is an
    extra domain predicate applied to the candidate forward edges.
    """
    if len(field) == 0:
        raise sal.InvalidInputError("field has no points")
    pts = field.points
    n = len(pts)
    vec, norms = _unit(field.values)
    zero = np.flatnonzero(norms == 0)
    if len(zero):
        raise DegenerateVectorError(pts[zero[0]])
    unit = grid_unit(pts)
    margin = np.full(n, params.ambiguity_margin)
    if node_margins is not None:
        margin = margin + np.asarray(node_margins, dtype=float)

    # (b) localize
    near = sal.aggregate_near(pts, params.neighbor_radius * unit * (1 + 1e-9))
    edges = near.edges
    score = edge_angle_scores(vec, pts, edges) if len(edges) else np.zeros(0)
    dist = near.edge_lengths() / unit

    # (c) forward candidates
    keep = score > params.angle_similarity
    if edge_filter is not None and len(edges):
        keep &= np.asarray(edge_filter(edges), dtype=bool)
    fwd_edges, fwd_metric = edges[keep], (score - params.distance_penalty * dist)[keep]
    forward = near.with_edges(fwd_edges)  # already canonical order

    # (d) best forward neighbour
    best_fwd = sal.best_neighbors(forward, lambda e: fwd_metric)
    spikes = [(node, c, "forward") for node, c in _ties(fwd_edges, fwd_metric, n, margin)]

    # (e) transpose, (f) best backward neighbour
    backward = sal.transpose_ngraph(best_fwd)
    fwd_keys = _edge_keys(fwd_edges, n)
    bwd_metric = _lookup(fwd_keys, fwd_metric, _edge_keys(backward.edges[:, ::-1], n))
    best_bwd = sal.best_neighbors(backward, lambda e: bwd_metric)
    spikes += [(node, c, "backward") for node, c in _ties(backward.edges, bwd_metric, n, margin)]

    # (g) classes -> curves
    final = sal.symmetric_closure(best_bwd)
    final = _break_cycles(final, fwd_keys, fwd_metric)
    classes = sal.classify_transitive(final)
    curves = sal.redescribe_curves(classes, final)

    successor = np.full(n, -1, dtype=np.int64)
    successor[best_fwd.edges[:, 0]] = best_fwd.edges[:, 1]
    curves = [_orient(c, successor) for c in curves]
    curve_of_node = np.empty(n, dtype=np.int64)
    for ci, c in enumerate(curves):
        curve_of_node[list(c.indices)] = ci

    # (h) higher level: curves whose flows converge
    groups = group_convergent(curves, field, 0.0, flow=best_fwd, curve_of_node=curve_of_node)

    spikes.sort(key=lambda s: (s[0], s[2]))
    if spikes:
        amb = AmbiguityDistribution(
            pts[[s[0] for s in spikes]], [len(s[1]) for s in spikes],
            [s[0] for s in spikes], tuple(s[1] for s in spikes), tuple(s[2] for s in spikes))
    else:
        amb = AmbiguityDistribution.empty(field.dimension)
    return StreamlineSet(curves, groups, curve_of_node, best_fwd), amb


def _orient(c: Curve, successor: np.ndarray) -> Curve:
    """Order a curve's vertices upstream -> downstream."""
    if len(c) < 2:
        return c
    idx = c.indices
    if successor[idx[0]] == idx[1]:
        return c
    if successor[idx[-1]] == idx[-2]:
        return c.reversed()
    down = sum(successor[a] == b for a, b in zip(idx, idx[1:]))
    up = sum(successor[b] == a for a, b in zip(idx, idx[1:]))
    return c if down >= up else c.reversed()


def group_convergent(curves, field: Field | None, tolerance: float,
                     flow: NGraph | None = None, curve_of_node=None) -> list[list[int]]:
    """Group curves whose flows converge.

    Curves whose terminal vertices lie within ``tolerance`` of one another are
    grouped transitively.  When the best-forward ``flow`` graph is supplied, a
    curve whose terminal vertex flows on into another curve joins that curve's
    group as a tributary.
    """
    if not curves:
        raise ValueError("no curves to group")
    k = len(curves)
    ends = np.array([c.end for c in curves])
    links = []
    if tolerance > 0 and k > 1:
        pairs = cKDTree(ends).query_pairs(tolerance * (1 + 1e-12), output_type="ndarray")
        links.extend(pairs.tolist())
    if flow is not None:
        if curve_of_node is None:
            curve_of_node = np.full(flow.n_nodes, -1, dtype=np.int64)
            for ci, c in enumerate(curves):
                curve_of_node[list(c.indices)] = ci
        successor = np.full(flow.n_nodes, -1, dtype=np.int64)
        successor[flow.edges[:, 0]] = flow.edges[:, 1]
        for ci, c in enumerate(curves):
            nxt = successor[c.indices[-1]]
            if nxt >= 0 and curve_of_node[nxt] != ci:
                links.append((ci, int(curve_of_node[nxt])))
    g = NGraph(np.zeros((k, 1)), np.array(links, dtype=np.int64).reshape(-1, 2))
    return sal.classify_transitive(g).classes
