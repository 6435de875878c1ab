"""Ordinary kriging with a Gaussian (squared-exponential) correlation model.

The correlation between two sites is ``exp(-sum_d C_d (a_d - b_d)**2)``; the
per-axis parameters ``C_d`` are chosen by maximising the concentrated
log-likelihood with a multi-start coordinate pattern search in log space.
A constant trend is estimated by generalised least squares.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import linalg

NUGGET = 1e-10
# Cholesky pivots below this mean R is singular apart from the nugget;
# weights then blow up and site exactness degrades past 1e-6.
MIN_PIVOT = 1e-8
SIGMA2_FLOOR = 1e-12


class IllConditionedError(linalg.LinAlgError):
    pass


class InvalidSitesError(ValueError):
    pass


@dataclass(frozen=True)
class OptimizerSettings:
    lower: float = 1e-3
    upper: float = 1e3
    n_starts: int = 5
    seed: int = 0
    initial_step: float = 1.0  # decades
    min_step: float = 1e-2
    max_evals: int = 2000
    # "dace": -(k ln s2 + ln|R|)/2 ; "literal": -(k/2)(ln s2 + ln|R|)
    likelihood: str = "dace"


def correlation(corr_params, a, b) -> float:
    c = np.asarray(corr_params, dtype=float)
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    if c.shape != d.shape:
        raise ValueError("dimension mismatch")
    return float(np.exp(-np.sum(c * d * d)))


def correlation_matrix(corr_params, xa: np.ndarray, xb: np.ndarray) -> np.ndarray:
    c = np.asarray(corr_params, dtype=float)
    d2 = np.zeros((len(xa), len(xb)))
    for j, cj in enumerate(c):
        diff = xa[:, j, None] - xb[None, :, j]
        d2 += cj * diff * diff
    return np.exp(-d2)


def _check_sites(sites, values):
    x = np.asarray(sites, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    y = np.asarray(values, dtype=float).reshape(-1)
    if len(x) != len(y) or len(x) == 0:
        raise InvalidSitesError("need one value per site and at least one site")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise InvalidSitesError("sites and values must be finite")
    if len(np.unique(x, axis=0)) != len(x):
        raise InvalidSitesError("duplicate sites")
    return x, y


def _gls(x, y, params):
    """Factorise R and return (cho, beta, sigma2, logdet) or raise LinAlgError."""
    k = len(y)
    R = correlation_matrix(params, x, x) + NUGGET * np.eye(k)
    cho = linalg.cho_factor(R, lower=True, check_finite=False)
    if np.min(np.diag(cho[0])) ** 2 < MIN_PIVOT:
        raise linalg.LinAlgError("correlation matrix is nugget-dominated")
    ones = np.ones(k)
    ri1 = linalg.cho_solve(cho, ones, check_finite=False)
    riy = linalg.cho_solve(cho, y, check_finite=False)
    beta = float(ones @ riy / (ones @ ri1))
    resid = y - beta
    sigma2 = float(resid @ linalg.cho_solve(cho, resid, check_finite=False) / k)
    logdet = 2.0 * float(np.sum(np.log(np.diag(cho[0]))))
    if not (np.isfinite(beta) and np.isfinite(sigma2) and np.isfinite(logdet)):
        raise linalg.LinAlgError("non-finite GLS estimates")
    return cho, beta, max(sigma2, SIGMA2_FLOOR), logdet


def concentrated_loglik(sites, values, corr_params, likelihood: str = "dace") -> float:
    """Concentrated log-likelihood of the correlation parameters (-inf if R is singular)."""
    x, y = _check_sites(sites, values)
    try:
        _, _, s2, logdet = _gls(x, y, corr_params)
    except linalg.LinAlgError:
        return -np.inf
    k = len(y)
    if likelihood == "literal":
        return -0.5 * k * (np.log(s2) + logdet)
    return -0.5 * (k * np.log(s2) + logdet)


@dataclass(frozen=True)
class KrigingModel:
    sites: np.ndarray
    values: np.ndarray
    beta: float
    sigma2: float
    corr_params: np.ndarray
    indicator_weight: float = 0.0
    spike_locations: np.ndarray | None = None
    spike_counts: np.ndarray | None = None
    bandwidth: float = 0.1
    trace: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        x, y = _check_sites(self.sites, self.values)
        c = np.asarray(self.corr_params, dtype=float).reshape(-1)
        if len(c) != x.shape[1] or np.any(c < 0):
            raise ValueError("need one non-negative correlation parameter per dimension")
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be positive")
        object.__setattr__(self, "sites", x)
        object.__setattr__(self, "values", y)
        object.__setattr__(self, "corr_params", c)
        R = correlation_matrix(c, x, x) + NUGGET * np.eye(len(y))
        try:
            cho = linalg.cho_factor(R, lower=True, check_finite=False)
        except linalg.LinAlgError as exc:
            raise IllConditionedError(f"correlation matrix is singular: {exc}") from None
        ones = np.ones(len(y))
        ri1 = linalg.cho_solve(cho, ones, check_finite=False)
        object.__setattr__(self, "_cho", cho)
        object.__setattr__(self, "_ri1", ri1)
        object.__setattr__(self, "_one_ri_one", float(ones @ ri1))
        object.__setattr__(self, "_weights",
                           linalg.cho_solve(cho, y - self.beta, check_finite=False))

    @property
    def dimension(self) -> int:
        return self.sites.shape[1]

    @property
    def k(self) -> int:
        return len(self.values)

    def _r(self, x: np.ndarray) -> np.ndarray:
        r = correlation_matrix(self.corr_params, x, self.sites)
        # nugget belongs to the zero-lag correlation, keeping sites exact
        hit = np.all(x[:, None, :] == self.sites[None, :, :], axis=2)
        return r + NUGGET * hit

    def predict(self, x) -> np.ndarray | float:
        pts, scalar = _as_query(x, self.dimension)
        out = self.beta + self._r(pts) @ self._weights
        return float(out[0]) if scalar else out

    def mse_plain(self, x) -> np.ndarray | float:
        pts, scalar = _as_query(x, self.dimension)
        r = self._r(pts)
        rir = linalg.cho_solve(self._cho, r.T, check_finite=False)
        quad = np.einsum("ij,ji->i", r, rir)
        u = 1.0 - r @ self._ri1
        out = self.sigma2 * (1.0 + NUGGET - quad + u * u / self._one_ri_one)
        out = np.maximum(out, 0.0)
        return float(out[0]) if scalar else out

    def ambiguity_density(self, x) -> np.ndarray | float:
        """Mass-normalised Gaussian kernel density of the indicator spikes, in [0, 1]."""
        pts, scalar = _as_query(x, self.dimension)
        if self.spike_locations is None or len(self.spike_locations) == 0:
            out = np.zeros(len(pts))
        else:
            out = spike_density(pts, self.spike_locations, self.spike_counts, self.bandwidth)
        return float(out[0]) if scalar else out

    def mse(self, x) -> np.ndarray | float:
        """Kriging variance, inflated near ambiguity spikes when an indicator term is set."""
        base = self.mse_plain(x)
        if self.indicator_weight == 0 or self.spike_locations is None or len(self.spike_locations) == 0:
            return base
        return base * (1.0 + self.indicator_weight * self.ambiguity_density(x))

    def to_json(self) -> dict:
        return {
            "sites": self.sites.tolist(),
            "values": self.values.tolist(),
            "beta": self.beta,
            "sigma2": self.sigma2,
            "corr_params": self.corr_params.tolist(),
            "indicator_weight": self.indicator_weight,
            "spikes": None if self.spike_locations is None else {
                "locations": np.asarray(self.spike_locations).tolist(),
                "counts": np.asarray(self.spike_counts).tolist(),
                "bandwidth": self.bandwidth,
            },
        }

    @classmethod
    def from_json(cls, doc) -> "KrigingModel":
        if isinstance(doc, str):
            doc = json.loads(doc)
        spikes = doc.get("spikes")
        return cls(
            np.array(doc["sites"]), np.array(doc["values"]), doc["beta"], doc["sigma2"],
            np.array(doc["corr_params"]), doc.get("indicator_weight", 0.0),
            None if spikes is None else np.array(spikes["locations"], dtype=float).reshape(
                -1, len(doc["corr_params"])),
            None if spikes is None else np.array(spikes["counts"], dtype=float),
            0.1 if spikes is None else spikes["bandwidth"],
        )


def _tensor_axes(pts: np.ndarray):
    """Per-axis coordinates if ``pts`` is a full C-ordered tensor grid, else None."""
    axes = [np.unique(pts[:, j]) for j in range(pts.shape[1])]
    if int(np.prod([len(a) for a in axes])) != len(pts):
        return None
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, pts.shape[1])
    return axes if np.array_equal(mesh, pts) else None


def _separable_density(axes, loc, w, bandwidth) -> np.ndarray:
    """Kernel sum on a tensor grid: the Gaussian factorises per axis, so the
    spike-count histogram is contracted with one small kernel matrix per axis."""
    spike_axes, inverse = zip(*(np.unique(loc[:, j], return_inverse=True) for j in range(loc.shape[1])))
    hist = np.zeros([len(a) for a in spike_axes])
    np.add.at(hist, tuple(np.ravel(i) for i in inverse), w)
    out = hist
    for j, (ax, sax) in enumerate(zip(axes, spike_axes)):
        k = np.exp(-0.5 * (ax[:, None] - sax[None, :]) ** 2 / bandwidth ** 2)
        out = np.moveaxis(np.tensordot(k, out, axes=([1], [j])), 0, j)
    return out.ravel()


def spike_density(pts, locations, counts, bandwidth, chunk_cells: int = 1 << 22) -> np.ndarray:
    """Count-weighted Gaussian kernel sum, normalised by total count.

    On a tensor grid with grid-aligned spikes the separable form is used;
    otherwise pairs are evaluated in row blocks of at most ``chunk_cells``
    point-spike pairs so large 3-D spike sets fit in memory.
    """
    loc = np.asarray(locations, dtype=float)
    w = np.asarray(counts, dtype=float)
    pts = np.asarray(pts, dtype=float)
    if len(pts) > 1 and len(loc) > 64:
        axes = _tensor_axes(pts)
        if axes is not None:
            n_spike_cells = np.prod([len(np.unique(loc[:, j])) for j in range(loc.shape[1])])
            if n_spike_cells <= 4 * len(pts):
                return _separable_density(axes, loc, w, bandwidth) / w.sum()
    out = np.empty(len(pts))
    step = max(1, chunk_cells // max(len(loc), 1))
    for lo in range(0, len(pts), step):
        block = pts[lo:lo + step]
        d2 = np.zeros((len(block), len(loc)))
        for j in range(loc.shape[1]):
            diff = block[:, j, None] - loc[None, :, j]
            d2 += diff * diff
        out[lo:lo + step] = np.exp(-0.5 * d2 / bandwidth ** 2) @ w
    return out / w.sum()


def _as_query(x, dim):
    a = np.asarray(x, dtype=float)
    scalar = a.ndim <= 1 and (a.size == dim)
    a = a.reshape(-1, dim)
    return a, scalar


def _pattern_search(objective, start, lo, hi, settings, budget):
    """Coordinate pattern search maximising ``objective`` in log10 space."""
    best_x = np.array(start, dtype=float)
    best_f = objective(best_x)
    step = settings.initial_step
    while step >= settings.min_step and budget[0] > 0:
        improved = False
        for j in range(len(best_x)):
            for sgn in (1.0, -1.0):
                cand = best_x.copy()
                cand[j] = np.clip(cand[j] + sgn * step, lo, hi)
                if cand[j] == best_x[j]:
                    continue
                f = objective(cand)
                if f > best_f:
                    best_x, best_f, improved = cand, f, True
                    break
        if not improved:
            step *= 0.5
    return best_x, best_f


def fit(sites, values, search: OptimizerSettings = OptimizerSettings()) -> KrigingModel:
    """Fit correlation parameters by maximum likelihood, then the GLS trend and variance.

    The returned model carries ``trace``: every probed (log10 params, loglik)
    in evaluation order.
    """
    x, y = _check_sites(sites, values)
    k, n = x.shape
    if k < 2:
        raise InvalidSitesError("fit needs at least two sites")
    lo, hi = np.log10(search.lower), np.log10(search.upper)
    trace: list[tuple[tuple[float, ...], float]] = []
    budget = [search.max_evals]

    def objective(logc):
        budget[0] -= 1
        f = concentrated_loglik(x, y, 10.0 ** logc, search.likelihood)
        trace.append((tuple(float(v) for v in logc), float(f)))
        return f

    rng = np.random.default_rng(search.seed)
    starts = [np.zeros(n)]
    starts += [rng.uniform(lo, hi, size=n) for _ in range(search.n_starts - 1)]
    best_x, best_f = None, -np.inf
    for s in starts:
        xs, fs = _pattern_search(objective, s, lo, hi, search, budget)
        if fs > best_f or best_x is None:
            best_x, best_f = xs, fs
    if not np.isfinite(best_f):
        # every start sat in the singular region; R tends to I at the upper corner
        best_x, best_f = _pattern_search(objective, np.full(n, hi), lo, hi, search,
                                         [search.max_evals])
    if not np.isfinite(best_f):
        raise IllConditionedError("correlation matrix singular for every probed parameter")
    params = 10.0 ** best_x
    try:
        _, beta, sigma2, _ = _gls(x, y, params)
    except linalg.LinAlgError as exc:
        raise IllConditionedError(str(exc)) from None
    return KrigingModel(x, y, beta, sigma2, params, trace=tuple(trace))


def model_with_params(sites, values, corr_params) -> KrigingModel:
    """Build a model for fixed correlation parameters (k = 1 allowed)."""
    x, y = _check_sites(sites, values)
    if len(y) == 1:
        return KrigingModel(x, y, float(y[0]), 1.0, corr_params)
    try:
        _, beta, sigma2, _ = _gls(x, y, corr_params)
    except linalg.LinAlgError as exc:
        raise IllConditionedError(str(exc)) from None
    return KrigingModel(x, y, beta, sigma2, corr_params)


def add_indicator_covariance(model: KrigingModel, ambiguity, weight: float,
                             bandwidth: float | None = None) -> KrigingModel:
    """Attach ambiguity spikes as a variance-inflating indicator term.

    ``mse`` becomes ``mse * (1 + weight * density)``; ``predict`` is unchanged.
    """
    if weight < 0:
        raise ValueError("weight must be >= 0")
    if weight == 0 or len(ambiguity) == 0:
        return model
    return replace(
        model,
        indicator_weight=float(weight),
        spike_locations=np.asarray(ambiguity.locations, dtype=float),
        spike_counts=np.asarray(ambiguity.counts, dtype=float),
        bandwidth=model.bandwidth if bandwidth is None else float(bandwidth),
    )
