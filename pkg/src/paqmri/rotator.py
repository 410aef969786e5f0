"""Near-identity random rotation of the coefficient space.

The rotator is Q = I + S with S = D - D^T skew-symmetric, where D is
strictly lower-triangular with Gaussian N(0, epsilon^2) entries. D is kept
sparse (a fixed number of entries per row) so that applying Q costs
O(n * nnz_per_row); setting ``nnz_per_row = n - 1`` reproduces the fully
dense triangular draw for small-n cross-checks. Entries are real; complex
vectors are rotated componentwise (real and imaginary parts independently),
so the adjoint is the plain transpose Q^T = I - S.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import NumericalError

__all__ = ["Rotator", "build_rotator", "hard_threshold"]


@dataclass(frozen=True, eq=False)
class Rotator:
    """Immutable rotator defined by its strictly-lower-triangular entries."""

    n: int
    epsilon: float
    nnz_per_row: int
    seed: int
    entry_rows: np.ndarray
    entry_cols: np.ndarray
    entry_values: np.ndarray
    _skew: sp.csr_matrix = field(init=False, repr=False)

    def __post_init__(self):
        rows = np.asarray(self.entry_rows, dtype=np.int64).ravel()
        cols = np.asarray(self.entry_cols, dtype=np.int64).ravel()
        vals = np.asarray(self.entry_values, dtype=np.float64).ravel()
        if not (rows.shape == cols.shape == vals.shape):
            raise ValueError("entry arrays must have identical length")
        if rows.size:
            if not np.all(rows > cols):
                raise ValueError("entries must be strictly lower-triangular (i > j)")
            if rows.max() >= self.n or cols.min() < 0:
                raise ValueError("entry index out of range")
        object.__setattr__(self, "entry_rows", rows)
        object.__setattr__(self, "entry_cols", cols)
        object.__setattr__(self, "entry_values", vals)
        lower = sp.coo_matrix((vals, (rows, cols)), shape=(self.n, self.n))
        object.__setattr__(self, "_skew", (lower - lower.T).tocsr())

    def _check(self, v) -> np.ndarray:
        v = np.asarray(v)
        if v.shape != (self.n,):
            raise ValueError(f"expected a length-{self.n} vector, got shape {v.shape}")
        return v

    def apply(self, v) -> np.ndarray:
        """Compute (I + S) v in O(n * nnz_per_row)."""
        v = self._check(v)
        return v + self._skew @ v

    def apply_adjoint(self, v) -> np.ndarray:
        """Compute (I + S)^T v = (I - S) v; exact adjoint of :meth:`apply`."""
        v = self._check(v)
        return v - self._skew @ v

    def solve(self, w, tol: float = 1e-10, max_iters: int = 200) -> np.ndarray:
        """Invert: return v with apply(v) = w, by the fixed point x <- w - S x.

        Converges while ||S|| < 1, which holds throughout the small-epsilon
        regime the rotator is designed for. Intended for tests and analysis
        only, never for reconstruction hot loops.
        """
        w = self._check(w)
        wn = np.linalg.norm(w)
        if wn == 0.0:
            return np.zeros_like(w)
        x = w.copy()
        for _ in range(max_iters):
            sx = self._skew @ x
            if np.linalg.norm(x + sx - w) <= tol * wn:
                return x
            x = w - sx
        raise NumericalError(
            f"rotator solve missed {tol} relative residual after {max_iters} "
            "iterations; the perturbation is too large for the fixed-point regime"
        )

    def to_dense(self) -> np.ndarray:
        """Dense Q = I + S, for small-n spectral checks."""
        return np.eye(self.n) + self._skew.toarray()


def build_rotator(n: int, epsilon: float, nnz_per_row: int = 8, seed: int = 0) -> Rotator:
    """Draw the perturbation row by row with a seeded generator.

    Row i receives min(nnz_per_row, i) distinct columns j < i with values
    from N(0, epsilon^2). epsilon = 0 or nnz_per_row = 0 yields Q = I.
    Identical arguments reproduce identical entries.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    if not 0 <= nnz_per_row < n:
        raise ValueError(f"nnz_per_row must be in [0, n), got {nnz_per_row}")
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    vals: list[np.ndarray] = []
    if epsilon > 0 and nnz_per_row > 0:
        rng = np.random.default_rng(seed)
        for i in range(1, n):
            k = min(nnz_per_row, i)
            rows.append(np.full(k, i, dtype=np.int64))
            cols.append(rng.choice(i, size=k, replace=False).astype(np.int64))
            vals.append(rng.normal(0.0, epsilon, size=k))
    empty_i = np.zeros(0, dtype=np.int64)
    return Rotator(
        n=int(n),
        epsilon=float(epsilon),
        nnz_per_row=int(nnz_per_row),
        seed=int(seed),
        entry_rows=np.concatenate(rows) if rows else empty_i,
        entry_cols=np.concatenate(cols) if cols else empty_i,
        entry_values=np.concatenate(vals) if vals else np.zeros(0),
    )


def hard_threshold(v, t: int) -> np.ndarray:
    """Keep the t largest-magnitude entries, zero the rest.

    Ties are broken toward the lowest index (stable sort).
    """
    v = np.asarray(v)
    if not 0 <= t <= v.size:
        raise ValueError(f"t must be in [0, {v.size}], got {t}")
    out = np.zeros_like(v)
    if t:
        keep = np.argsort(-np.abs(v), kind="stable")[:t]
        out[keep] = v[keep]
    return out
