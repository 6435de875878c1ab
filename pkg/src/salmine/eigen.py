"""Dense nonsymmetric eigenvalues: Householder reduction to Hessenberg form
followed by single-shift complex QR with Wilkinson shifts and deflation.

Also builds Jordan-structured test matrices and reads/writes the matrix CSV
format used by the command line ("re+imi" cells, row-major).
"""

from __future__ import annotations

import csv
import re
from pathlib import Path
from typing import Sequence

import numpy as np

EPS = np.finfo(float).eps


class ConvergenceError(RuntimeError):
    """QR iteration hit its cap; ``partial`` holds the eigenvalues deflated so far."""

    def __init__(self, partial, iterations: int):
        self.partial = np.asarray(partial, dtype=complex)
        self.iterations = iterations
        super().__init__(f"QR did not converge after {iterations} iterations "
                         f"({len(self.partial)} eigenvalues deflated)")


class ConstructionError(ValueError):
    pass


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def hessenberg(a) -> np.ndarray:
    """Upper Hessenberg matrix unitarily similar to ``a`` (Householder)."""
    h = as_matrix(a).copy()
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        # H <- P H P with P = I - 2 v v^*
        h[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h


def _wilkinson(a, b, c, d):
    """Eigenvalue of [[a, b], [c, d]] closer to d."""
    half = 0.5 * (a - d)
    root = np.sqrt(half * half + b * c)
    m1 = 0.5 * (a + d) + root
    m2 = 0.5 * (a + d) - root
    return m1 if abs(m1 - d) <= abs(m2 - d) else m2


def _qr_sweep(h: np.ndarray, lo: int, hi: int, mu: complex) -> None:
    """One shifted QR step on the active window h[lo:hi+1, lo:hi+1], in place."""
    w = h[lo:hi + 1, lo:hi + 1]
    m = w.shape[0]
    w[np.diag_indices(m)] -= mu
    rots = []
    for k in range(m - 1):
        x, y = w[k, k], w[k + 1, k]
        r = np.hypot(abs(x), abs(y))
        if r == 0.0:
            c, s = 1.0, 0.0
        else:
            c, s = x / r, y / r
        # G = [[c*, s*], [-s, c]] zeroes w[k+1, k]
        rows = w[k:k + 2, k:].copy()
        w[k, k:] = np.conj(c) * rows[0] + np.conj(s) * rows[1]
        w[k + 1, k:] = -s * rows[0] + c * rows[1]
        rots.append((c, s))
    for k, (c, s) in enumerate(rots):
        top = min(k + 2, m - 1) + 1
        cols = w[:top, k:k + 2].copy()
        w[:top, k] = cols[:, 0] * c + cols[:, 1] * s
        w[:top, k + 1] = -cols[:, 0] * np.conj(s) + cols[:, 1] * np.conj(c)
    w[np.diag_indices(m)] += mu


def eigenvalues(a, max_iter: int | None = None) -> np.ndarray:
    """All n eigenvalues of a square matrix (with multiplicity, unordered).

    Raises ConvergenceError after ``max_iter`` QR sweeps (default 40 n).
    """
    h = hessenberg(a)
    n = h.shape[0]
    cap = 40 * n if max_iter is None else max_iter
    scale = max(np.abs(h).max(), np.finfo(float).tiny)
    eig = np.zeros(n, dtype=complex)
    hi = n - 1
    iters = since = 0
    while hi >= 0:
        if hi == 0:
            eig[0] = h[0, 0]
            break
        lo = hi
        while lo > 0:
            sub = abs(h[lo, lo - 1])
            if sub <= EPS * (abs(h[lo, lo]) + abs(h[lo - 1, lo - 1])) or sub <= EPS * EPS * scale:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eig[hi] = h[hi, hi]
            hi -= 1
            since = 0
            continue
        if iters >= cap:
            raise ConvergenceError(eig[hi + 1:], iters)
        if since and since % 10 == 0:
            # exceptional shift to break cycles
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1])
        else:
            mu = _wilkinson(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
        _qr_sweep(h, lo, hi, mu)
        iters += 1
        since += 1
    return eig


def jordan_matrix(structure: Sequence[tuple[complex, int]]) -> np.ndarray:
    """Block-diagonal Jordan matrix: one upper-bidiagonal block per (eigenvalue, size)."""
    sizes = [int(r) for _, r in structure]
    if not sizes or min(sizes) < 1:
        raise ValueError("structure needs at least one block of size >= 1")
    n = sum(sizes)
    j = np.zeros((n, n), dtype=complex)
    at = 0
    for lam, r in zip((complex(l) for l, _ in structure), sizes):
        for i in range(r):
            j[at + i, at + i] = lam
            if i + 1 < r:
                j[at + i, at + i + 1] = 1.0
        at += r
    return j


def jordan_test_matrix(structure: Sequence[tuple[complex, int]], seed: int | None = 0,
                       cond_cap: float = 100.0, max_tries: int = 20) -> np.ndarray:
    """B J B^-1 for the Jordan matrix J of ``structure``.

    B is real, seeded, with condition number at most ``cond_cap``: random
    orthogonal factors around log-uniform singular values in
    [1, min(cond_cap, 10)].  ``seed=None`` uses B = I.  The result is real
    whenever every eigenvalue in ``structure`` is real.
    """
    if cond_cap < 1:
        raise ValueError("cond_cap must be >= 1")
    j = jordan_matrix(structure)
    n = j.shape[0]
    if seed is None:
        b = np.eye(n)
    else:
        rng = np.random.default_rng([0x6A6F7264, seed])
        for _ in range(max_tries):
            u, _r = np.linalg.qr(rng.standard_normal((n, n)))
            v, _r = np.linalg.qr(rng.standard_normal((n, n)))
            s = np.exp(rng.uniform(0.0, np.log(min(cond_cap, 10.0)), size=n))
            b = (u * s) @ v.T
            if np.linalg.cond(b) <= cond_cap:
                break
        else:
            raise ConstructionError(f"no basis with cond <= {cond_cap} after {max_tries} tries")
    a = b @ j @ np.linalg.inv(b)
    if np.all(j.imag == 0):
        return a.real
    return a


def parse_complex(text: str) -> complex:
    """Parse "re+imi", "re-imi", "re" or "imi" (a trailing "j" is accepted too)."""
    t = text.strip().replace(" ", "").replace("i", "j")
    # a bare unit imaginary part ("2+j") needs an explicit coefficient
    t = re.sub(r"(^|[+-])j$", r"\g<1>1j", t)
    try:
        return complex(t)
    except ValueError:
        raise ValueError(f"cannot parse complex cell {text!r}") from None


def format_complex(z: complex) -> str:
    z = complex(z)
    sign = "-" if np.signbit(z.imag) else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def read_matrix_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = [[parse_complex(c) for c in row] for row in csv.reader(fh) if row]
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ValueError(f"{path}: matrix CSV must be square")
    m = np.array(rows, dtype=complex)
    return m.real if np.all(m.imag == 0) else m


def write_matrix_csv(path, a) -> None:
    m = as_matrix(a)
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in m:
            w.writerow([format_complex(z) for z in row])
