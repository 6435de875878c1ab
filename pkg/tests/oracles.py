"""Independent reference implementations used as test oracles."""

import itertools

import numpy as np


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def components(n, edges):
    uf = UnionFind(n)
    for a, b in edges:
        uf.union(int(a), int(b))
    groups = {}
    for i in range(n):
        groups.setdefault(uf.find(i), []).append(i)
    return sorted(sorted(g) for g in groups.values())


def brute_near(points, radius):
    pts = np.asarray(points, dtype=float)
    out = set()
    for i, j in itertools.permutations(range(len(pts)), 2):
        d = np.sqrt(np.sum((pts[i] - pts[j]) ** 2))
        if 0 < d <= radius:
            out.add((i, j))
    return out


def brute_strict_minima(values):
    """Indices (C order) of cells strictly below every neighbour, by explicit loops."""
    v = np.asarray(values)
    out = []
    for idx in itertools.product(*(range(s) for s in v.shape)):
        ok = True
        for off in itertools.product((-1, 0, 1), repeat=v.ndim):
            if not any(off):
                continue
            nb = tuple(i + o for i, o in zip(idx, off))
            if all(0 <= x < s for x, s in zip(nb, v.shape)) and not v[idx] < v[nb]:
                ok = False
                break
        if ok:
            out.append(np.ravel_multi_index(idx, v.shape))
    return out


def dace_predict(sites, values, corr_params, x, nugget=1e-10):
    """Textbook ordinary kriging predictor and variance via dense inverses."""
    s = np.asarray(sites, dtype=float)
    y = np.asarray(values, dtype=float)
    c = np.asarray(corr_params, dtype=float)
    k = len(y)

    def corr(a, b):
        return np.exp(-np.sum(c * (a[:, None, :] - b[None, :, :]) ** 2, axis=2))

    R = corr(s, s) + nugget * np.eye(k)
    Ri = np.linalg.inv(R)
    one = np.ones(k)
    beta = one @ Ri @ y / (one @ Ri @ one)
    resid = y - beta
    sigma2 = max(resid @ Ri @ resid / k, 1e-12)
    r = corr(np.atleast_2d(x), s)
    pred = beta + r @ Ri @ resid
    u = 1 - r @ Ri @ one
    mse = sigma2 * (1 - np.einsum("ij,jk,ik->i", r, Ri, r) + u ** 2 / (one @ Ri @ one))
    return pred, np.maximum(mse, 0.0), beta, sigma2
