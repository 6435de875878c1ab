"""de Boor's pocket function on [-1, 1]^n, seeded smooth warps of it, and a
brute-force grid oracle for its pockets (local minima)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    pass


def _pts(x) -> tuple[np.ndarray, bool]:
    a = np.asarray(x, dtype=float)
    single = a.ndim <= 1
    return np.atleast_2d(a) if a.ndim else a.reshape(1, 1), single


def sign_plus(x):
    """sign with sign(0) = +1."""
    return np.where(np.asarray(x) >= 0, 1.0, -1.0)


def alpha(x):
    """cos(sum_i 2^i (1 + sign x_i)) - 2; depends only on the sign vector."""
    a, single = _pts(x)
    powers = 2.0 ** np.arange(1, a.shape[1] + 1)
    out = np.cos((powers * (1.0 + sign_plus(a))).sum(axis=1)) - 2.0
    return float(out[0]) if single else out


def delta(x):
    """Euclidean distance to (0.5, ..., 0.5)."""
    a, single = _pts(x)
    out = np.linalg.norm(a - 0.5, axis=1)
    return float(out[0]) if single else out


def pocket(x):
    a, single = _pts(x)
    if np.any(np.abs(a) > 1.0) or not np.all(np.isfinite(a)):
        raise DomainError("pocket function is defined on [-1, 1]^n")
    d = delta(a)
    out = alpha(a) * (1.0 - d * d * (3.0 - 2.0 * d)) + 1.0
    return float(out[0]) if single else out


@dataclass(frozen=True)
class PocketFunction:
    """de Boor's function, optionally evaluated through a seeded smooth warp.

    The warp moves each coordinate by ``amplitude * sin(w_d . x + phi_d) * (1 - x_d^2)``;
    the taper keeps the cube mapped into itself, so no clamping plateaus
    appear near the faces.  Seeds whose warped function loses a pocket are
    rejected at construction.
    """

    dimension: int
    warp_seed: int | None = None
    warp_amplitude: float = 0.0
    validate: bool = True

    def __post_init__(self):
        if not 1 <= self.dimension <= 30:
            raise ValueError("dimension must be in 1..30")
        if not 0.0 <= self.warp_amplitude <= 0.25:
            raise ValueError("warp_amplitude must lie in [0, 0.25]")
        if self.warp_seed is not None and self.warp_amplitude > 0:
            rng = np.random.default_rng([0x706F636B, self.warp_seed])
            n = self.dimension
            freq = rng.uniform(1.0, 2.0, size=(n, n)) * rng.choice([-1.0, 1.0], size=(n, n))
            phase = rng.uniform(0.0, 2 * np.pi, size=n)
            object.__setattr__(self, "_freq", freq)
            object.__setattr__(self, "_phase", phase)
            if self.validate and self.dimension <= 3:
                res = 101 if self.dimension <= 2 else 41
                found = true_minima(self, res)
                if len(found) != 2 ** self.dimension:
                    raise ValueError(
                        f"warp seed {self.warp_seed} keeps {len(found)} of "
                        f"{2 ** self.dimension} pockets")

    @property
    def warped(self) -> bool:
        return hasattr(self, "_freq")

    def warp(self, x) -> np.ndarray:
        a, _ = _pts(x)
        if not self.warped:
            return a.copy()
        w = self.warp_amplitude * np.sin(a @ self._freq.T + self._phase) * (1.0 - a * a)
        return np.clip(a + w, -1.0, 1.0)

    def __call__(self, x):
        a, single = _pts(x)
        if a.shape[1] != self.dimension:
            raise ValueError(f"expected {self.dimension}-dimensional points")
        if np.any(np.abs(a) > 1.0):
            raise DomainError("pocket function is defined on [-1, 1]^n")
        out = pocket(self.warp(a))
        out = np.atleast_1d(out)
        return float(out[0]) if single else out

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "warp_seed": self.warp_seed,
                "warp_amplitude": self.warp_amplitude}


def perturbed_pocket(fn: PocketFunction, x):
    return fn(x)


def grid_axes(n: int, points_per_axis: int) -> np.ndarray:
    """All points of the uniform grid on [-1, 1]^n, C order (last axis fastest)."""
    ax = np.linspace(-1.0, 1.0, points_per_axis)
    ax[np.abs(ax) < 1e-15] = 0.0
    mesh = np.meshgrid(*([ax] * n), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def strict_local_minima(values: np.ndarray) -> np.ndarray:
    """Boolean mask of grid cells strictly lower than all 3^n - 1 neighbours."""
    v = np.asarray(values, dtype=float)
    padded = np.pad(v, 1, mode="constant", constant_values=np.inf)
    mask = np.ones(v.shape, dtype=bool)
    core = tuple(slice(1, s + 1) for s in v.shape)
    for off in itertools.product((-1, 0, 1), repeat=v.ndim):
        if not any(off):
            continue
        sl = tuple(slice(1 + o, s + 1 + o) for o, s in zip(off, v.shape))
        mask &= padded[core] < padded[sl]
    return mask


def true_minima(fn, resolution: int = 201, dimension: int | None = None) -> list[np.ndarray]:
    """Lowest strict grid-local minimum in each orthant (sign(0) = +1).

    For a warped function the orthant is taken in warped coordinates, since
    that is where the sign pattern of the pocket function lives; a point just
    across a warped axis belongs to the neighbouring pocket.  Orthants are
    visited in lexicographic sign order (-1 before +1); ties in value go to
    the first grid point in C order.
    """
    n = dimension if dimension is not None else fn.dimension
    if resolution < 3:
        raise ValueError("resolution too small")
    pts = grid_axes(n, resolution)
    vals = np.asarray(fn(pts), dtype=float).reshape((resolution,) * n)
    mins = np.flatnonzero(strict_local_minima(vals).ravel())
    if len(mins) == 0:
        return []
    mp = pts[mins]
    mv = vals.ravel()[mins]
    warp = getattr(fn, "warp", None)
    signs = sign_plus(warp(mp) if warp is not None else mp)
    key = (signs > 0).astype(int) @ (2 ** np.arange(n)[::-1])
    out = []
    for orth in np.unique(key):
        sel = np.flatnonzero(key == orth)
        out.append(mp[sel[np.argmin(mv[sel])]])
    return out
