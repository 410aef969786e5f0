"""Mutual-coherence measurement of probed dictionaries.

The dictionary D has one column per coefficient basis vector: column j is
the effective forward operator applied to e_j. Columns are probed on the
fly (the operator layer never materializes D); inner products are evaluated
blockwise. Columns with norm below ``NULL_COLUMN_NORM`` fall inside the
undersampling null space, where the normalized inner product is undefined;
they are excluded from the statistics and counted separately.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResourceBudgetError

__all__ = [
    "CoherenceReport",
    "GramSpectrum",
    "dictionary_column",
    "mutual_coherence_exact",
    "mutual_coherence_sampled",
    "gram_spectrum",
]

HISTOGRAM_BINS = 50
EXACT_COLUMN_GUARD = 4096
NULL_COLUMN_NORM = 1e-12


@dataclass(frozen=True, eq=False)
class CoherenceReport:
    """Coherence statistics over (a sample of) normalized column pairs."""

    mu: float
    argmax_pair: tuple[int, int]
    offdiag_histogram: np.ndarray
    bin_edges: np.ndarray
    mean_offdiag: float
    n_columns_sampled: int
    n_pairs: int
    null_columns: int
    exact: bool

    def tail_fraction(self, threshold: float = 0.5) -> float:
        """Fraction of evaluated pairs with |g_ij| above ``threshold``."""
        if self.n_pairs == 0:
            return 0.0
        mass = self.offdiag_histogram[self.bin_edges[:-1] >= threshold].sum()
        return float(mass) / self.n_pairs


@dataclass(frozen=True, eq=False)
class GramSpectrum:
    """Eigenvalues (ascending) and the condition ratio over the numerical rank."""

    eigenvalues: np.ndarray
    condition_ratio: float


def dictionary_column(op, j: int) -> np.ndarray:
    """Column j of the effective dictionary: forward applied to e_j."""
    if not 0 <= j < op.n:
        raise IndexError(f"column index {j} out of range [0, {op.n})")
    e = np.zeros(op.n, dtype=np.complex128)
    e[j] = 1.0
    return op.forward(e)


def _probe_all_columns(op) -> np.ndarray:
    d = np.empty((op.m, op.n), dtype=np.complex128)
    e = np.zeros(op.n, dtype=np.complex128)
    for j in range(op.n):
        e[j] = 1.0
        d[:, j] = op.forward(e)
        e[j] = 0.0
    return d


def _normalize_columns(d: np.ndarray):
    norms = np.linalg.norm(d, axis=0)
    keep = norms > NULL_COLUMN_NORM
    idx = np.flatnonzero(keep)
    dn = d[:, idx] / norms[idx]
    return dn, idx, int((~keep).sum())


def mutual_coherence_exact(op, column_guard: int = EXACT_COLUMN_GUARD, block: int = 256) -> CoherenceReport:
    """Exact maximum |normalized inner product| over all distinct column pairs.

    Probes all N columns and evaluates every pair blockwise. Guarded to
    N <= ``column_guard`` columns; beyond that the exact evaluation is
    O(N^2 M) and :func:`mutual_coherence_sampled` should be used instead.
    """
    n = op.n
    if n > column_guard:
        raise ResourceBudgetError(
            f"exact coherence over {n} columns exceeds the guard "
            f"({column_guard}); use mutual_coherence_sampled instead"
        )
    dn, idx, null_columns = _normalize_columns(_probe_all_columns(op))
    k = idx.size
    edges = np.linspace(0.0, 1.0, HISTOGRAM_BINS + 1)
    hist = np.zeros(HISTOGRAM_BINS, dtype=np.int64)
    best = -1.0
    best_pair = (-1, -1)
    total = 0
    off_sum = 0.0
    col_ids = np.arange(k)
    for start in range(0, k, block):
        stop = min(start + block, k)
        g = np.abs(dn[:, start:stop].conj().T @ dn)
        upper = col_ids[None, :] > np.arange(start, stop)[:, None]
        vals = g[upper]
        if vals.size == 0:
            continue
        masked = np.where(upper, g, -1.0)
        r, c = np.unravel_index(int(np.argmax(masked)), masked.shape)
        if masked[r, c] > best:
            best = float(masked[r, c])
            best_pair = (int(idx[start + r]), int(idx[c]))
        total += vals.size
        off_sum += float(vals.sum())
        hist += np.histogram(np.clip(vals, 0.0, 1.0), bins=edges)[0]
    return CoherenceReport(
        mu=max(best, 0.0),
        argmax_pair=best_pair,
        offdiag_histogram=hist,
        bin_edges=edges,
        mean_offdiag=off_sum / total if total else 0.0,
        n_columns_sampled=k,
        n_pairs=total,
        null_columns=null_columns,
        exact=True,
    )


def mutual_coherence_sampled(op, n_pairs: int, seed: int) -> CoherenceReport:
    """Coherence maximum over a seeded random sample of column pairs.

    A lower bound on the exact coherence; deterministic given the seed.
    Pairs are drawn uniformly with replacement and deduplicated, so the
    number of evaluated pairs can be below ``n_pairs``. When ``n_pairs``
    covers all N(N-1)/2 distinct pairs, every pair is enumerated once and
    the report is exact.
    """
    if n_pairs < 1:
        raise ValueError(f"n_pairs must be >= 1, got {n_pairs}")
    n = op.n
    total_pairs = n * (n - 1) // 2
    if n_pairs >= total_pairs:
        iu, ju = np.triu_indices(n, k=1)
        pairs = np.column_stack([iu, ju])
        exhaustive = True
    else:
        rng = np.random.default_rng(seed)
        raw = rng.integers(0, n, size=(n_pairs, 2))
        raw = raw[raw[:, 0] != raw[:, 1]]
        lo = np.minimum(raw[:, 0], raw[:, 1])
        hi = np.maximum(raw[:, 0], raw[:, 1])
        pairs = np.unique(np.column_stack([lo, hi]), axis=0)
        exhaustive = False
    used = np.unique(pairs)
    d = np.empty((op.m, used.size), dtype=np.complex128)
    for pos, j in enumerate(used):
        d[:, pos] = dictionary_column(op, int(j))
    norms = np.linalg.norm(d, axis=0)
    ok = norms > NULL_COLUMN_NORM
    null_columns = int((~ok).sum())
    pos_of = {int(j): pos for pos, j in enumerate(used)}
    li = np.array([pos_of[int(i)] for i in pairs[:, 0]], dtype=np.int64)
    rj = np.array([pos_of[int(j)] for j in pairs[:, 1]], dtype=np.int64)
    valid = ok[li] & ok[rj]
    li, rj = li[valid], rj[valid]
    kept_pairs = pairs[valid]
    edges = np.linspace(0.0, 1.0, HISTOGRAM_BINS + 1)
    hist = np.zeros(HISTOGRAM_BINS, dtype=np.int64)
    mu = 0.0
    best_pair = (-1, -1)
    val_sum = 0.0
    chunk = 8192
    for start in range(0, li.size, chunk):
        a, bb = li[start : start + chunk], rj[start : start + chunk]
        vals = np.abs(np.sum(d[:, a].conj() * d[:, bb], axis=0)) / (norms[a] * norms[bb])
        hist += np.histogram(np.clip(vals, 0.0, 1.0), bins=edges)[0]
        val_sum += float(vals.sum())
        top = int(np.argmax(vals))
        if vals[top] > mu or best_pair == (-1, -1):
            mu = float(vals[top])
            best_pair = (
                int(kept_pairs[start + top, 0]),
                int(kept_pairs[start + top, 1]),
            )
    n_valid = int(li.size)
    return CoherenceReport(
        mu=mu,
        argmax_pair=best_pair,
        offdiag_histogram=hist,
        bin_edges=edges,
        mean_offdiag=val_sum / n_valid if n_valid else 0.0,
        n_columns_sampled=int(ok.sum()),
        n_pairs=n_valid,
        null_columns=null_columns,
        exact=exhaustive,
    )


def gram_spectrum(mat, hermitian_tol: float = 1e-6, rank_threshold: float = 1e-10) -> GramSpectrum:
    """Eigenvalues of a Hermitian matrix and its numerical condition ratio.

    The ratio is lambda_max / lambda_min over eigenvalues above
    ``rank_threshold * lambda_max``. Inputs that deviate from Hermitian
    symmetry by more than ``hermitian_tol`` are rejected.
    """
    mat = np.asarray(mat, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    asym = float(np.abs(mat - mat.conj().T).max())
    if asym > hermitian_tol:
        raise ValueError(
            f"matrix deviates from Hermitian symmetry by {asym:.3e} "
            f"(tolerance {hermitian_tol})"
        )
    w = np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))
    lam_max = float(w[-1])
    nz = w[w > rank_threshold * lam_max] if lam_max > 0 else w[:0]
    ratio = float(nz[-1] / nz[0]) if nz.size else float("nan")
    return GramSpectrum(eigenvalues=w, condition_ratio=ratio)
