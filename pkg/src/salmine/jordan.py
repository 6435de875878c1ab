"""Qualitative Jordan structure from perturbed spectra.

A multiplicity-rho eigenvalue splits under a small perturbation of size d into
rho points on a circle of radius ~d^(1/rho); flipping the sign of the
perturbation turns that rho-gon by pi/rho, so a +E/-E pair superimposes into a
regular 2rho-gon.  The miner collects such pairs, aggregates each pair's
eigenvalues into triangles, finds congruent triangles by hashing their side
lengths, abstracts the congruences into rotations about a centre, and scores
how well each rotation by pi/rho maps the point cloud onto itself.  Scores
from successive rounds update a posterior over (centre, rho) models.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .eigen import ConvergenceError, as_matrix, eigenvalues, format_complex, parse_complex

RHO_MAX = 5
SCORE_FLOOR = 1e-3
CONVERGED_PROBABILITY = 0.9
AMBIGUOUS_GAP = 0.1
TRIANGLE_CAP = 220
INITIAL_LEVELS = (-50.0, -40.0)
FINE_LEVELS = (-53.0, -50.0)


class InsufficientPointsError(ValueError):
    pass


class UndeterminedCenterError(ValueError):
    pass


class SpectrumError(RuntimeError):
    def __init__(self, level: float, seed: int, cause: Exception):
        self.level, self.seed, self.cause = level, seed, cause
        super().__init__(f"eigensolve failed at level {level:.3g}, seed {seed}: {cause}")


@dataclass(frozen=True)
class Region:
    """Closed disc in the complex plane."""

    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("region radius must be positive")

    def contains(self, z) -> np.ndarray:
        return np.abs(np.asarray(z) - self.center) <= self.radius

    def shifted(self, c: complex) -> "Region":
        return Region(self.center + c, self.radius)

    @classmethod
    def parse(cls, text: str) -> "Region":
        """Parse "re+imi:radius", e.g. "7+0i:0.5"."""
        try:
            center, radius = text.rsplit(":", 1)
            return cls(parse_complex(center), float(radius))
        except ValueError as exc:
            raise ValueError(f"bad region {text!r}; expected re+imi:radius") from exc

    def __str__(self) -> str:
        return f"{format_complex(self.center)}:{self.radius!r}"


@dataclass(frozen=True)
class PerturbationSample:
    level: float
    seed: int
    eigenvalues: np.ndarray
    # +1 / -1 for the two halves of an antithetic pair
    sign: int = 1

    def __post_init__(self):
        if not self.level > 0:
            raise ValueError("perturbation level must be positive")
        object.__setattr__(self, "eigenvalues", np.asarray(self.eigenvalues, dtype=complex).ravel())


@dataclass(frozen=True)
class Triangle:
    """Counter-clockwise triangle; ``opposite[k]`` is the side facing vertex k."""

    vertices: tuple
    group: int = 0

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=complex)
        if _signed_area(v) < 0:
            v = v[[0, 2, 1]]
        object.__setattr__(self, "vertices", tuple(complex(z) for z in v))

    @property
    def opposite(self) -> np.ndarray:
        v = np.asarray(self.vertices)
        return np.abs(np.array([v[1] - v[2], v[2] - v[0], v[0] - v[1]]))

    @property
    def side_lengths(self) -> np.ndarray:
        return np.sort(self.opposite)


@dataclass(frozen=True)
class TriangleMatch:
    """Orientation-preserving congruence: vertex k of ``i`` maps to vertex (k + shift) % 3 of ``j``."""

    i: int
    j: int
    shift: int
    source: tuple
    target: tuple


@dataclass(frozen=True)
class RotationModel:
    center: complex
    multiplicity: int
    support: int
    score: float

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")
        if not 0.0 <= self.score <= 1.0:
            raise ValueError("score must lie in [0, 1]")

    def to_json(self) -> dict:
        return {"center": [self.center.real, self.center.imag], "multiplicity": self.multiplicity,
                "support": self.support, "score": self.score}


@dataclass(frozen=True)
class JordanPosterior:
    models: tuple = ()
    probabilities: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if len(p) != len(self.models):
            raise ValueError("one probability per model")
        if len(p) and (np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12):
            raise ValueError("probabilities must be nonnegative and sum to 1")
        object.__setattr__(self, "models", tuple(self.models))
        object.__setattr__(self, "probabilities", p)

    @classmethod
    def uniform(cls, models) -> "JordanPosterior":
        models = tuple(models)
        return cls(models, np.full(len(models), 1.0 / len(models)) if models else np.zeros(0))

    def ranked(self) -> list[tuple[RotationModel, float]]:
        order = sorted(range(len(self.models)), key=lambda k: (-self.probabilities[k], k))
        return [(self.models[k], float(self.probabilities[k])) for k in order]

    def top(self) -> tuple[RotationModel, float] | None:
        r = self.ranked()
        return r[0] if r else None


def _signed_area(v) -> float:
    a, b, c = v
    return 0.5 * ((b - a).conjugate() * (c - a)).imag


def _sub_seed(*parts: int) -> int:
    return int(np.random.SeedSequence([int(p) & 0xFFFFFFFF for p in parts]).generate_state(1)[0])


def perturbation_direction(shape, seed: int, complex_entries: bool) -> np.ndarray:
    """Seeded Gaussian matrix scaled to unit Frobenius norm."""
    rng = np.random.default_rng([0x70657274, seed])
    e = rng.standard_normal(shape)
    if complex_entries:
        e = e + 1j * rng.standard_normal(shape)
    return e / np.linalg.norm(e)


def perturb(a, level: float, seed: int, sign: int = 1) -> np.ndarray:
    """A + sign * level * ||A||_F * E with a seeded unit-norm E.

    E is real for real A, so the perturbed spectrum stays conjugate-symmetric.
    """
    if not level > 0:
        raise ValueError("perturbation level must be positive")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    m = np.asarray(a)
    real = not np.iscomplexobj(m) or np.all(np.imag(m) == 0)
    m = as_matrix(m)
    if real:
        m = m.real
    e = perturbation_direction(m.shape, seed, not real)
    return m + sign * level * np.linalg.norm(m) * e


def _spectrum(a, level, seed, sign, region) -> PerturbationSample:
    try:
        ev = eigenvalues(perturb(a, level, seed, sign))
    except ConvergenceError as exc:
        raise SpectrumError(level, seed, exc) from exc
    return PerturbationSample(level, seed, ev[region.contains(ev)], sign)


def collect_spectra(a, region: Region, levels, per_level: int, seed: int,
                    antithetic: bool = True) -> list[PerturbationSample]:
    """Perturbed spectra restricted to ``region``.

    For each level, ``per_level`` perturbation directions are drawn; with
    ``antithetic`` each direction is applied with both signs, and the two
    samples sit next to each other in the output.
    """
    if per_level < 1:
        raise ValueError("per_level must be >= 1")
    levels = [float(l) for l in levels]
    if any(not l > 0 for l in levels):
        raise ValueError("levels must be positive")
    out = []
    for li, level in enumerate(levels):
        for k in range(per_level):
            s = _sub_seed(seed, li, k)
            for sign in ((1, -1) if antithetic else (1,)):
                out.append(_spectrum(a, level, s, sign, region))
    return out


def pair_groups(samples) -> list[list[int]]:
    """Indices of samples sharing (level, seed): an antithetic pair or a lone sample."""
    groups: dict = {}
    for k, s in enumerate(samples):
        groups.setdefault((s.level, s.seed), []).append(k)
    return list(groups.values())


def _union(samples, idx) -> np.ndarray:
    return np.concatenate([samples[k].eigenvalues for k in idx]) if idx else np.zeros(0, complex)


def sample_triangles(sample, seed: int = 0, group: int = 0) -> list[Triangle]:
    """Triangles over the eigenvalues of one sample (or a merged pair).

    All triples up to 12 points, otherwise a seeded subsample of 220 distinct
    triples.  Degenerate triples (shortest side <= 1e-14 * longest, or zero
    area) are dropped.
    """
    z = sample.eigenvalues if isinstance(sample, PerturbationSample) else np.asarray(sample, complex)
    m = len(z)
    if m < 3:
        raise InsufficientPointsError(f"need >= 3 eigenvalues, got {m}")
    triples = list(itertools.combinations(range(m), 3))
    if len(triples) > TRIANGLE_CAP and m > 12:
        rng = np.random.default_rng([0x74726931, seed])
        pick = np.sort(rng.choice(len(triples), TRIANGLE_CAP, replace=False))
        triples = [triples[k] for k in pick]
    out = []
    for t in triples:
        v = z[list(t)]
        sides = np.abs(np.array([v[1] - v[2], v[2] - v[0], v[0] - v[1]]))
        if sides.min() <= 1e-14 * sides.max() or abs(_signed_area(v)) <= 1e-14 * sides.max() ** 2:
            continue
        out.append(Triangle(tuple(v), group))
    if not out:
        raise InsufficientPointsError("every triple is degenerate")
    return out


def _close(a, b, tol) -> bool:
    return bool(np.all(np.abs(a - b) <= tol * np.maximum(a, b)))


def congruent_triangles(ts, tol: float) -> list[TriangleMatch]:
    """Pairs i < j of congruent triangles related by a rotation (no reflections).

    Sorted side triples are hashed into cubic buckets of width
    tol * (median side); candidates from the buckets a match could fall in
    are then verified exactly against the relative tolerance.  An equilateral
    pair yields one match per valid vertex shift.
    """
    if not 0 < tol < 1:
        raise ValueError("tol must lie in (0, 1)")
    ts = list(ts)
    if len(ts) < 2:
        return []
    sorted_sides = np.array([t.side_lengths for t in ts])
    opposite = [t.opposite for t in ts]
    width = tol * float(np.median(sorted_sides))
    keys = np.floor(sorted_sides / width).astype(np.int64)
    buckets: dict = {}
    for k, key in enumerate(map(tuple, keys)):
        buckets.setdefault(key, []).append(k)
    out = []
    for i in range(len(ts)):
        lo = np.floor(sorted_sides[i] * (1 - tol) / width).astype(np.int64)
        hi = np.floor(sorted_sides[i] / (1 - tol) / width).astype(np.int64)
        span = int(np.prod(hi - lo + 1))
        if span <= len(buckets):
            cells = itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))
            cand = [j for c in cells for j in buckets.get(c, ())]
        else:
            cand = [j for c, js in buckets.items()
                    if all(a <= x <= b for a, x, b in zip(lo, c, hi)) for j in js]
        for j in sorted(c for c in cand if c > i):
            if not _close(sorted_sides[i], sorted_sides[j], tol):
                continue
            for shift in range(3):
                if _close(opposite[i], np.roll(opposite[j], -shift), tol):
                    tgt = tuple(ts[j].vertices[(k + shift) % 3] for k in range(3))
                    out.append(TriangleMatch(i, j, shift, ts[i].vertices, tgt))
    return out


def _rotate(z, center, angle):
    return center + np.exp(1j * angle) * (np.asarray(z) - center)


def _center_rows(matches, rho, tol):
    """Fixed-point equations (1 - w) c = t - w s for matches whose rotation snaps to k*pi/rho."""
    step = math.pi / rho
    rows_a, rows_b = [], []
    for m in matches:
        s = np.asarray(m.source)
        t = np.asarray(m.target)
        phi = np.angle(np.sum((t - t.mean()) * np.conj(s - s.mean())))
        k = int(round(phi / step)) % (2 * rho)
        err = abs((phi - k * step + math.pi) % (2 * math.pi) - math.pi)
        if k == 0 or err > min(tol, step / 2):
            continue
        w = np.exp(1j * k * step)
        rows_a.extend([1 - w] * 3)
        rows_b.extend(t - w * s)
    return np.array(rows_a, complex), np.array(rows_b, complex)


def _solve_center(a, b) -> complex:
    norm = np.sum(np.abs(a) ** 2)
    if not norm > 0:
        raise UndeterminedCenterError("no usable correspondences")
    c = np.sum(np.conj(a) * b) / norm
    # one trimming pass against stray coincidental congruences
    resid = np.abs(a * c - b) / np.abs(a)
    keep = resid <= 3 * np.median(resid) + 1e-300
    if 0 < keep.sum() < len(a):
        c = np.sum(np.conj(a[keep]) * b[keep]) / np.sum(np.abs(a[keep]) ** 2)
    return complex(c)


def _half_scale(r, sign) -> np.ndarray:
    """Factors bringing each half of a pair to the pair's mean radius."""
    scale = np.ones(len(r))
    for sg in set(sign):
        scale[sign == sg] = r.mean() / r[sign == sg].mean()
    return scale


def point_scores(samples, center: complex, rho: int, tol: float) -> np.ndarray:
    """Per-eigenvalue soft hit: 1 - d / (tol * r), clipped at 0.

    r is the eigenvalue's distance from ``center`` and d the distance from its
    image under rotation by pi/rho to the nearest eigenvalue of the other
    half of its antithetic pair (the sign flip is what turns a rho-gon by
    pi/rho).  Each half is first rescaled to the pair's mean radius:
    higher-order terms make +E and -E polygons differ in size by a few
    percent, which says nothing about the angular structure.  A lone sample
    is matched against its own other eigenvalues.
    """
    out = []
    for idx in pair_groups(samples):
        z = _union(samples, idx)
        if len(z) == 0:
            continue
        sign = np.concatenate([[samples[k].sign] * len(samples[k].eigenvalues) for k in idx])
        paired = len(set(sign)) > 1
        r = np.abs(z - center)
        if paired and np.all(r > 0):
            z = center + (z - center) * _half_scale(r, sign)
            r = np.abs(z - center)
        img = _rotate(z, center, math.pi / rho)
        d = np.abs(img[:, None] - z[None, :])
        if paired:
            d[sign[:, None] == sign[None, :]] = np.inf
        else:
            np.fill_diagonal(d, np.inf)
        nearest = d.min(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.where(r > 0, 1.0 - nearest / (tol * r), 0.0)
        out.append(np.clip(s, 0.0, 1.0))
    return np.concatenate(out) if out else np.zeros(0)


def fit_rotation(matches, samples, rho: int, tol: float = 0.1) -> RotationModel:
    """Rotation model for multiplicity ``rho``.

    The centre is the least-squares fixed point of the rotations implied by
    the triangle matches whose angle is a nonzero multiple of pi/rho.  With
    no such match (for instance fewer than three eigenvalues per pair) the
    centroid of the pooled pairs is used, which is where a +E/-E pair of
    rho-gons is centred.  The score is the mean soft hit over all sample
    eigenvalues; support counts the eigenvalues with a hit above 1/2.
    """
    if rho < 1:
        raise ValueError("rho must be >= 1")
    samples = list(samples)
    a, b = _center_rows(matches, rho, tol)
    if len(a):
        center = _solve_center(a, b)
    else:
        groups = [_union(samples, g) for g in pair_groups(samples)]
        groups = [g for g in groups if len(g)]
        if not groups:
            raise UndeterminedCenterError("no matches and no eigenvalues")
        center = complex(np.mean([g.mean() for g in groups]))
    hits = point_scores(samples, center, rho, tol)
    score = float(hits.mean()) if len(hits) else 0.0
    return RotationModel(center, rho, int(np.sum(hits > 0.5)), min(max(score, 0.0), 1.0))


def specific_scores(hits: dict) -> dict:
    """Discount each multiplicity by the symmetry of its multiples, point by point.

    A 2rho-gon is also symmetric under pi/rho' for every divisor rho' of rho,
    so an eigenvalue only supports rho to the extent that rotating it by
    pi/(m rho) misses.  ``hits`` maps rho to the per-eigenvalue soft hits
    (same eigenvalue order for every rho); returns the mean discounted hit.
    """
    out = {}
    for rho, h in hits.items():
        f = np.asarray(h, dtype=float).copy()
        m = 2 * rho
        while m in hits:
            f *= 1.0 - np.asarray(hits[m])
            m += rho
        out[rho] = float(f.mean()) if len(f) else 0.0
    return out


def update_posterior(prior: JordanPosterior, round_models, merge_radius: float,
                     floor: float = SCORE_FLOOR) -> JordanPosterior:
    """Multiply by (score + floor) and renormalise.

    A round model with the multiplicity of an existing model and a centre
    within ``merge_radius`` of it is merged into it (support-weighted centre,
    support summed).  Other round models join with a uniform prior share.
    Existing models that the round does not propose are scored zero.
    """
    models = list(prior.models)
    weights = list(prior.probabilities)
    likelihood = [floor] * len(models)
    for rm in round_models:
        hit = None
        for k, m in enumerate(models):
            if m.multiplicity == rm.multiplicity and abs(m.center - rm.center) <= merge_radius:
                if hit is None or abs(m.center - rm.center) < abs(models[hit].center - rm.center):
                    hit = k
        if hit is None:
            models.append(rm)
            weights.append(None)
            likelihood.append(rm.score + floor)
            continue
        m = models[hit]
        total = m.support + rm.support
        center = ((m.center * m.support + rm.center * rm.support) / total if total
                  else 0.5 * (m.center + rm.center))
        models[hit] = RotationModel(center, m.multiplicity, total, rm.score)
        likelihood[hit] = max(likelihood[hit], rm.score + floor)
    share = 1.0 / len(models) if models else 0.0
    w = np.array([share if x is None else x for x in weights], dtype=float)
    if w.sum() > 0:
        w = w / w.sum()
    post = w * np.array(likelihood)
    if not len(post) or post.sum() <= 0:
        return JordanPosterior.uniform(models)
    post = post / post.sum()
    return JordanPosterior(tuple(models), post)


@dataclass
class RoundSummary:
    levels: list
    exponent_range: tuple
    n_eigenvalues: int
    raw_scores: dict
    scores: dict
    top_probability: float

    def to_json(self) -> dict:
        return {"levels": self.levels, "exponent_range": list(self.exponent_range),
                "n_eigenvalues": self.n_eigenvalues,
                "raw_scores": {str(k): v for k, v in self.raw_scores.items()},
                "scores": {str(k): v for k, v in self.scores.items()},
                "top_probability": self.top_probability}


@dataclass
class JordanReport:
    region: Region
    tol: float
    seed: int
    status: str
    posterior: JordanPosterior
    rounds: list
    samples: list = field(default_factory=list, repr=False)

    @property
    def rounds_used(self) -> int:
        return len(self.rounds)

    @property
    def top_model(self) -> RotationModel | None:
        t = self.posterior.top()
        return t[0] if t else None

    @property
    def top_probability(self) -> float:
        t = self.posterior.top()
        return t[1] if t else 0.0

    def to_json(self) -> dict:
        top = self.top_model
        return {
            "region": str(self.region),
            "tol": self.tol,
            "seed": self.seed,
            "status": self.status,
            "rounds_used": self.rounds_used,
            "top_model": None if top is None else top.to_json(),
            "top_probability": self.top_probability,
            "posterior": [dict(m.to_json(), probability=p) for m, p in self.posterior.ranked()],
            "rounds": [r.to_json() for r in self.rounds],
        }


def round_models(samples, tol: float, rho_max: int = RHO_MAX, seed: int = 0):
    """Fit one rotation model per multiplicity from one round of samples.

    Returns (models, raw scores, specificity-adjusted scores); the models
    carry the adjusted score.
    """
    matches = []
    for g, idx in enumerate(pair_groups(samples)):
        z = _union(samples, idx)
        if len(z) < 3:
            continue
        try:
            tris = sample_triangles(z, seed=_sub_seed(seed, g), group=g)
        except InsufficientPointsError:
            continue
        matches.extend(congruent_triangles(tris, tol))
    fitted = {}
    for rho in range(1, rho_max + 1):
        try:
            fitted[rho] = fit_rotation(matches, samples, rho, tol)
        except UndeterminedCenterError:
            continue
    raw = {rho: m.score for rho, m in fitted.items()}
    adj = specific_scores({rho: point_scores(samples, m.center, rho, tol) for rho, m in fitted.items()})
    models = [replace(m, score=adj[rho]) for rho, m in fitted.items()]
    return models, raw, adj


def mine_jordan(a, region: Region, tol: float = 0.1, max_rounds: int = 5, seed: int = 0,
                rho_max: int = RHO_MAX) -> JordanReport:
    """Round-based posterior over (eigenvalue, multiplicity) inside ``region``.

    Each round draws 3 or 4 antithetic perturbation pairs (6 to 8 spectra) at
    levels log-uniform in 2^[-50, -40], or in 2^[-53, -50] after a round whose
    two best models were within 0.1 of each other.  Stops when the best model
    reaches probability 0.9.
    """
    if not 0.1 <= tol <= 0.5:
        raise ValueError("tol must lie in [0.1, 0.5]")
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    a = np.asarray(a)
    posterior = JordanPosterior()
    rounds, all_samples = [], []
    exponents = INITIAL_LEVELS
    merge_radius = 0.1 * region.radius
    status = "inconclusive"
    for r in range(max_rounds):
        rng = np.random.default_rng([0x726E64, seed, r])
        pairs = int(rng.integers(3, 5))
        levels = [float(2.0 ** rng.uniform(*exponents)) for _ in range(pairs)]
        samples = []
        for k, level in enumerate(levels):
            s = _sub_seed(seed, r, k)
            samples.append(_spectrum(a, level, s, 1, region))
            samples.append(_spectrum(a, level, s, -1, region))
        all_samples.extend(samples)
        models, raw, adj = round_models(samples, tol, rho_max, seed=_sub_seed(seed, r, 0x747269))
        if models:
            posterior = update_posterior(posterior, models, merge_radius)
        ranked = posterior.ranked()
        top_p = ranked[0][1] if ranked else 0.0
        rounds.append(RoundSummary(levels, exponents, int(sum(len(s.eigenvalues) for s in samples)),
                                   raw, adj, top_p))
        if ranked and top_p >= CONVERGED_PROBABILITY:
            status = "converged"
            break
        if len(ranked) > 1 and ranked[0][1] - ranked[1][1] <= AMBIGUOUS_GAP:
            exponents = FINE_LEVELS
    return JordanReport(region, tol, seed, status, posterior, rounds, all_samples)


def spectra_svg(report: JordanReport, size: int = 480) -> str:
    """Scatter of all collected eigenvalues, colour by sign, with the top model's centre."""
    z = np.concatenate([s.eigenvalues for s in report.samples]) if report.samples else np.zeros(0)
    signs = np.concatenate([[s.sign] * len(s.eigenvalues) for s in report.samples]) if report.samples else []
    top = report.top_model
    c = top.center if top is not None else report.region.center
    half = float(np.abs(z - c).max()) * 1.15 if len(z) else report.region.radius
    half = half if half > 0 else 1.0

    def xy(w):
        return (size / 2 + (w.real - c.real) / half * size / 2,
                size / 2 - (w.imag - c.imag) / half * size / 2)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>']
    for w, sg in zip(z, signs):
        x, y = xy(w)
        color = "#1f5fbf" if sg > 0 else "#c0392b"
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2.5" fill="{color}"/>')
    x, y = xy(c)
    parts.append(f'<path d="M{x - 6:.2f},{y:.2f}H{x + 6:.2f}M{x:.2f},{y - 6:.2f}V{y + 6:.2f}" '
                 f'stroke="black"/>')
    label = "no model" if top is None else f"rho={top.multiplicity} center={format_complex(c)}"
    parts.append(f'<text x="8" y="18" font-family="monospace" font-size="12">{label} '
                 f'(half-width {half:.3g})</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# name -> (Jordan structure, region, expected multiplicity of the region's eigenvalue)
FIXTURES = {
    "single-5x3": ([(5.0, 3)], Region(5.0, 0.5), 3),
    "mixed-2x2": ([(2.0, 2), (-1.0, 1), (3.0, 1)], Region(2.0, 0.5), 2),
    "diagonal": ([(1.0, 1), (2.0, 1), (3.0, 1)], Region(2.0, 0.5), 1),
    "half-x4": ([(0.5, 4), (-3.0, 1)], Region(0.5, 0.4), 4),
    "brunet-analog": ([(-1.0, 1), (-2.0, 1), (7.0, 3), (7.0, 3)], Region(7.0, 0.5), 3),
}
