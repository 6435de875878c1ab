"""Closed-loop pocket mining: fit a surrogate to the samples, mine its gradient
field for pockets, and spend the next sample where the mining was ambiguous.
Also the variance-driven kriging baseline and the comparison report."""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import kriging
from .deboor import PocketFunction, grid_axes, strict_local_minima, true_minima
from .kriging import KrigingModel, OptimizerSettings
from .sal import Field
from .streamlines import AmbiguityDistribution, BundlingParams, StreamlineSet, bundle


class DesignSaturatedError(RuntimeError):
    pass


class InvalidComparisonError(ValueError):
    pass


class MiningError(RuntimeError):
    def __init__(self, round_index: int, cause: Exception):
        self.round_index = round_index
        self.cause = cause
        super().__init__(f"round {round_index}: {type(cause).__name__}: {cause}")


@dataclass(frozen=True)
class MinerSettings:
    """Knobs of the mining loop that are not bundling parameters."""

    points_per_axis: int = 41
    indicator_weight: float = 1.0
    bandwidth_cells: float = 2.0
    exclusion_cells: float = 1.0
    match_cells: float = 3.0
    # spikes only count where the surrogate is still uncertain
    uncertainty_gate: float = 0.8
    uncertainty_margin: float = 0.0
    # focused runs only stop once 2^n pockets have been mined
    require_complete: bool = True
    oracle_resolution: int = 201
    optimizer: OptimizerSettings = OptimizerSettings()

    @property
    def cell(self) -> float:
        return 2.0 / (self.points_per_axis - 1)


@dataclass
class RoundRecord:
    model: dict
    ambiguity: AmbiguityDistribution
    pockets: list
    chosen_sample: np.ndarray | None
    functional_value: float
    n_samples: int

    def to_json(self) -> dict:
        return {
            "n_samples": self.n_samples,
            "model": self.model,
            "ambiguity": {
                "locations": self.ambiguity.locations.tolist(),
                "counts": self.ambiguity.counts.tolist(),
            },
            "pockets": [p.tolist() for p in self.pockets],
            "chosen_sample": None if self.chosen_sample is None else self.chosen_sample.tolist(),
            "functional_value": self.functional_value,
        }


@dataclass
class MiningRun:
    source: PocketFunction
    method: str
    samples: list = field(default_factory=list)
    rounds: list = field(default_factory=list)
    found_pockets: list = field(default_factory=list)
    status: str = "budget_exhausted"
    streamlines: list = field(default_factory=list, repr=False)

    @property
    def n_samples(self) -> int:
        return len(self.samples)

    @property
    def n_initial(self) -> int:
        return 2 * self.source.dimension

    @property
    def sample_points(self) -> np.ndarray:
        return np.array([p for p, _ in self.samples])

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "method": self.method,
            "status": self.status,
            "total_samples": self.n_samples,
            "samples": [{"point": p.tolist(), "value": v} for p, v in self.samples],
            "found_pockets": [p.tolist() for p in self.found_pockets],
            "rounds": [r.to_json() for r in self.rounds],
        }


def initial_design(n: int) -> np.ndarray:
    """The 2n face centres of [-1, 1]^n."""
    if not 1 <= n <= 3:
        raise ValueError("initial design defined for 1 <= n <= 3")
    pts = []
    for d in range(n):
        for s in (1.0, -1.0):
            p = np.zeros(n)
            p[d] = s
            pts.append(p)
    return np.array(pts)


def surrogate_grid(model: KrigingModel, n: int, points_per_axis: int = 41) -> Field:
    if points_per_axis < 3:
        raise ValueError("points_per_axis must be >= 3")
    pts = grid_axes(n, points_per_axis)
    return Field(pts, model.predict(pts), shape=(points_per_axis,) * n)


def gradient_field(f: Field) -> Field:
    """Down-gradient vectors by central differences (one-sided at the faces)."""
    if f.shape is None:
        raise ValueError("gradient_field needs a regular grid field")
    vals = f.values[:, 0].reshape(f.shape)
    n = len(f.shape)
    spacing = []
    for d in range(n):
        ax = np.unique(f.points[:, d])
        spacing.append(ax[1] - ax[0] if len(ax) > 1 else 1.0)
    grads = np.gradient(vals, *spacing) if n > 1 else [np.gradient(vals, spacing[0])]
    vec = -np.stack([g.ravel() for g in grads], axis=1)
    return Field(f.points, vec, shape=f.shape)


def _grid_neighbors(shape):
    """Offsets of the 3^n - 1 grid neighbours as flat-index deltas, with validity masks."""
    n = len(shape)
    idx = np.indices(shape).reshape(n, -1).T
    out = []
    for off in itertools.product((-1, 0, 1), repeat=n):
        if not any(off):
            continue
        nb = idx + np.array(off)
        ok = np.all((nb >= 0) & (nb < np.array(shape)), axis=1)
        flat = np.ravel_multi_index(np.where(ok[:, None], nb, 0).T, shape)
        out.append((flat, ok))
    return out


@dataclass
class MiningState:
    """Everything SAL derived from one surrogate."""

    model: KrigingModel
    grid: Field
    streamlines: StreamlineSet
    raw_ambiguity: AmbiguityDistribution
    ambiguity: AmbiguityDistribution
    fallback: AmbiguityDistribution
    pockets: list
    pocket_nodes: list


def mine_surrogate(model: KrigingModel, n: int, params: BundlingParams,
                   settings: MinerSettings) -> MiningState:
    """Bottom-up SAL pass over the surrogate: streamlines, pockets, ambiguity."""
    grid = surrogate_grid(model, n, settings.points_per_axis)
    vals = grid.values[:, 0]
    vecs = gradient_field(grid).values.copy()
    zero = np.linalg.norm(vecs, axis=1) == 0
    if np.any(zero):
        # flat spot: any direction will do, the descending filter decides
        vecs[zero] = np.eye(n)[0]
    vfield = Field(grid.points, vecs, shape=grid.shape)

    rel_sd = np.sqrt(model.mse_plain(grid.points) / model.sigma2)
    margins = settings.uncertainty_margin * rel_sd if settings.uncertainty_margin else None
    streams, amb = bundle(vfield, params, node_margins=margins,
                          edge_filter=lambda e: vals[e[:, 1]] < vals[e[:, 0]])

    group_of = streams.group_of_node()
    is_min = strict_local_minima(vals.reshape(grid.shape)).ravel()
    pocket_nodes = []
    for members in streams.groups:
        nodes = np.concatenate([streams.curves[c].indices for c in members])
        low = nodes[np.argmin(vals[nodes])]
        if is_min[low]:
            pocket_nodes.append(int(low))
    pocket_nodes.sort()
    pockets = [grid.points[i] for i in pocket_nodes]

    # keep spikes whose tied candidates lead to different pockets/groups and
    # where the surrogate is still uncertain
    splits = np.zeros(len(amb), dtype=bool)
    backward = np.zeros(len(amb), dtype=bool)
    for k in range(len(amb)):
        if amb.passes[k] == "forward":
            splits[k] = len(np.unique(group_of[amb.candidates[k]])) > 1
        else:
            backward[k] = True
    uncertain = rel_sd[amb.nodes] >= settings.uncertainty_gate if len(amb) else splits
    relevant = amb.subset(splits & uncertain)
    fallback = amb.subset(splits) if np.any(splits) else amb
    return MiningState(model, grid, streams, amb, relevant, fallback, pockets, pocket_nodes)


def _excluded(grid_pts: np.ndarray, existing: np.ndarray, radius: float) -> np.ndarray:
    if len(existing) == 0:
        return np.zeros(len(grid_pts), dtype=bool)
    d2 = np.zeros((len(grid_pts), len(existing)))
    for j in range(grid_pts.shape[1]):
        diff = grid_pts[:, j, None] - existing[None, :, j]
        d2 += diff * diff
    return np.any(d2 <= (radius * (1 + 1e-9)) ** 2, axis=1)


def next_sample(model: KrigingModel, ambiguity: AmbiguityDistribution, existing,
                grid: Field, settings: MinerSettings = MinerSettings()) -> tuple[np.ndarray, float]:
    """Grid point maximising inflated variance times ambiguity density.

    Returns the point and the criterion value there.
    """
    if len(ambiguity) == 0:
        raise ValueError("no ambiguity to resolve")
    bw = settings.bandwidth_cells * settings.cell
    inflated = kriging.add_indicator_covariance(model, ambiguity, settings.indicator_weight, bw)
    dens = inflated.ambiguity_density(grid.points)
    crit = inflated.mse(grid.points) * dens
    return _argmax_free(grid.points, crit, existing, settings)


def _argmax_free(pts, crit, existing, settings):
    excl = _excluded(pts, np.asarray(existing, dtype=float).reshape(-1, pts.shape[1]),
                     settings.exclusion_cells * settings.cell)
    crit = np.where(excl, -np.inf, crit)
    if not np.any(np.isfinite(crit)):
        raise DesignSaturatedError("every grid point is excluded")
    i = int(np.argmax(crit))
    return pts[i].copy(), float(crit[i])


def _fit(points, values, settings: MinerSettings) -> KrigingModel:
    return kriging.fit(points, values, settings.optimizer)


def _model_summary(m: KrigingModel) -> dict:
    return {"beta": m.beta, "sigma2": m.sigma2, "corr_params": m.corr_params.tolist()}


def _snap(p, cell):
    return np.round(np.asarray(p) / cell) * cell


def mine_pockets(source: PocketFunction, budget: int, params: BundlingParams = BundlingParams(),
                 settings: MinerSettings = MinerSettings()) -> MiningRun:
    """Focused sampling: add one sample per round where mining is ambiguous,
    until no ambiguity remains or the budget of extra samples is spent."""
    return _loop(source, budget, params, settings, focused=True)


def mine_pockets_baseline(source: PocketFunction, budget: int,
                          params: BundlingParams = BundlingParams(),
                          settings: MinerSettings = MinerSettings()) -> MiningRun:
    """Conventional kriging: sample where the prediction variance is largest.

    Mining runs on every round exactly as in the focused loop, but only to
    decide when to stop: the run converges once the mined pockets match every
    grid-oracle minimum (within ``match_cells``) in two consecutive rounds.
    """
    return _loop(source, budget, params, settings, focused=False)


def match_pockets(found, oracle, radius: float) -> tuple[np.ndarray, np.ndarray]:
    """One-to-one matching of found pockets to oracle minima within ``radius``.

    Returns (found_index, oracle_index) of the accepted pairs; the assignment
    minimises total distance before pairs farther than ``radius`` are dropped.
    """
    found = np.asarray(found, dtype=float)
    oracle = np.asarray(oracle, dtype=float)
    if found.size == 0 or oracle.size == 0:
        return np.zeros(0, dtype=int), np.zeros(0, dtype=int)
    d = np.linalg.norm(found[:, None, :] - oracle[None, :, :], axis=2)
    rows, cols = linear_sum_assignment(d)
    keep = d[rows, cols] <= radius * (1 + 1e-9)
    return rows[keep], cols[keep]


def _covers(found, oracle, radius) -> bool:
    return len(match_pockets(found, oracle, radius)[1]) == len(oracle)


def _loop(source, budget, params, settings, focused):
    if budget < 0:
        raise ValueError("budget must be >= 0")
    n = source.dimension
    run = MiningRun(source, "focused" if focused else "baseline")
    for p in initial_design(n):
        run.samples.append((p, float(source(p))))
    target = 2 ** n
    radius = settings.match_cells * settings.cell
    oracle = None if focused else true_minima(source, settings.oracle_resolution)
    covered_before = False
    extra = 0
    while True:
        r = len(run.rounds)
        try:
            pts = run.sample_points
            vals = np.array([v for _, v in run.samples])
            model = _fit(pts, vals, settings)
            state = mine_surrogate(model, n, params, settings)
        except Exception as exc:  # noqa: BLE001 - re-raised with round context
            raise MiningError(r, exc) from exc
        if focused:
            complete = len(state.pockets) == target or not settings.require_complete
            done = complete and len(state.ambiguity) == 0
        else:
            covered = _covers(state.pockets, oracle, radius)
            done = covered and covered_before
            covered_before = covered
        if done or extra >= budget:
            run.rounds.append(RoundRecord(_model_summary(model), state.ambiguity,
                                          state.pockets, None, 0.0, run.n_samples))
            run.status = "converged" if done else "budget_exhausted"
            run.found_pockets = state.pockets
            run.streamlines = [np.asarray(c.vertices) for c in state.streamlines.curves]
            return run
        try:
            if focused:
                amb = state.ambiguity if len(state.ambiguity) else state.fallback
                if len(amb):
                    x, value = next_sample(model, amb, pts, state.grid, settings)
                else:
                    # smooth surrogate without any spike: fall back to variance
                    x, value = _argmax_free(state.grid.points, model.mse_plain(state.grid.points),
                                            pts, settings)
            else:
                x, value = _argmax_free(state.grid.points, model.mse_plain(state.grid.points),
                                        pts, settings)
        except Exception as exc:  # noqa: BLE001
            raise MiningError(r, exc) from exc
        run.rounds.append(RoundRecord(_model_summary(model), state.ambiguity, state.pockets,
                                      x, value, run.n_samples))
        run.samples.append((x, float(source(x))))
        extra += 1


@dataclass
class ComparisonReport:
    focused_total: int
    baseline_total: int
    savings: float
    focused_found: int
    focused_missed: int
    baseline_found: int
    baseline_missed: int
    match_radius: float

    def to_json(self) -> dict:
        return asdict(self)


def compare_runs(a: MiningRun, b: MiningRun, settings: MinerSettings = MinerSettings(),
                 oracle=None) -> ComparisonReport:
    """Sample totals, pockets found/missed against the grid oracle, and savings (b - a) / b."""
    if a.source != b.source:
        raise InvalidComparisonError("runs mine different sources")
    if oracle is None:
        oracle = true_minima(a.source, settings.oracle_resolution)
    radius = settings.match_cells * settings.cell
    fa = len(match_pockets(a.found_pockets, oracle, radius)[1])
    fb = len(match_pockets(b.found_pockets, oracle, radius)[1])
    savings = (b.n_samples - a.n_samples) / b.n_samples if b.n_samples else 0.0
    return ComparisonReport(a.n_samples, b.n_samples, savings, fa, len(oracle) - fa,
                            fb, len(oracle) - fb, radius)


def samples_csv(run: MiningRun) -> str:
    """One row per sample: index, round it was added in, coordinates, value."""
    n = run.source.dimension
    lines = ["index,round," + ",".join(f"x{d}" for d in range(n)) + ",value"]
    for k, (p, v) in enumerate(run.samples):
        rnd = max(0, k - run.n_initial + 1)
        lines.append(f"{k},{rnd}," + ",".join(repr(float(c)) for c in p) + f",{float(v)!r}")
    return "\n".join(lines) + "\n"


def run_svg(run: MiningRun, size: int = 480) -> str:
    """Terminal streamlines, samples (initial in grey, added in blue) and found pockets.

    Only the first two coordinates are drawn.
    """
    def xy(p):
        x = float(p[0])
        y = float(p[1]) if len(p) > 1 else 0.0
        return (x + 1) / 2 * (size - 20) + 10, (1 - y) / 2 * (size - 20) + 10

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>',
             f'<rect x="10" y="10" width="{size - 20}" height="{size - 20}" fill="none" stroke="#999"/>']
    for line in run.streamlines:
        if len(line) < 2:
            continue
        pts = " ".join("{:.2f},{:.2f}".format(*xy(p)) for p in line)
        parts.append(f'<polyline points="{pts}" fill="none" stroke="#bbb" stroke-width="1"/>')
    for k, (p, _) in enumerate(run.samples):
        x, y = xy(p)
        color = "#777" if k < run.n_initial else "#1f5fbf"
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="{color}"/>')
    for p in run.found_pockets:
        x, y = xy(p)
        parts.append(f'<path d="M{x - 5:.2f},{y - 5:.2f}L{x + 5:.2f},{y + 5:.2f}'
                     f'M{x - 5:.2f},{y + 5:.2f}L{x + 5:.2f},{y - 5:.2f}" stroke="#c0392b" stroke-width="2"/>')
    parts.append(f'<text x="14" y="26" font-family="monospace" font-size="12">{run.method}: '
                 f'{run.n_samples} samples, {len(run.found_pockets)} pockets, {run.status}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
