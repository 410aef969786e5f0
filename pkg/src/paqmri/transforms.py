"""Unitary 2-D Fourier/DCT transforms and Cartesian line masks.

Signals live in one of three domains tied to a common grid: DCT
coefficients, spatial images, and k-space. All three are stored as flat,
row-major, length ``rows*cols`` complex128 vectors. The DC row of k-space
is row 0 (no fftshift); center bands wrap around row 0. Real images are
embedded as complex vectors with zero imaginary part so that every
operator maps complex to complex.

All functions here are pure and the mask type is immutable, so everything
is safe to use concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft

__all__ = [
    "GridShape",
    "SamplingMask",
    "as_vector",
    "fft2_unitary",
    "ifft2_unitary",
    "dct2_unitary",
    "dct2_adjoint",
    "make_mask",
    "apply_mask",
    "mask_to_compact",
    "compact_to_mask",
]


def _is_pow2(k: int) -> bool:
    return k >= 1 and (k & (k - 1)) == 0


@dataclass(frozen=True)
class GridShape:
    """Image grid geometry; rows and cols must be powers of two."""

    rows: int
    cols: int

    def __post_init__(self):
        if not (_is_pow2(self.rows) and _is_pow2(self.cols)):
            raise ValueError(
                f"grid dimensions must be powers of two, got {self.rows}x{self.cols}"
            )

    @property
    def n(self) -> int:
        return self.rows * self.cols


def as_vector(data, shape: GridShape) -> np.ndarray:
    """Coerce input to a flat complex128 vector of length ``shape.n``."""
    v = np.asarray(data, dtype=np.complex128).ravel()
    if v.size != shape.n:
        raise ValueError(
            f"expected a length-{shape.n} vector for a {shape.rows}x{shape.cols} "
            f"grid, got length {v.size}"
        )
    return v


def _as_grid(data, shape: GridShape) -> np.ndarray:
    return as_vector(data, shape).reshape(shape.rows, shape.cols)


def fft2_unitary(x, shape: GridShape) -> np.ndarray:
    """2-D DFT scaled by 1/sqrt(N) (image -> k-space).

    The scaling makes the transform unitary, so ``ifft2_unitary`` inverts
    it exactly (to floating tolerance) and norms are preserved.
    """
    return np.fft.fft2(_as_grid(x, shape), norm="ortho").ravel()


def ifft2_unitary(y, shape: GridShape) -> np.ndarray:
    """Inverse (= adjoint) of :func:`fft2_unitary`, same unitary scaling."""
    return np.fft.ifft2(_as_grid(y, shape), norm="ortho").ravel()


def dct2_unitary(c, shape: GridShape) -> np.ndarray:
    """Synthesize an image from orthonormal DCT-II coefficients.

    Applied separably along rows and columns. Together with
    :func:`dct2_adjoint` this forms a real-orthogonal (hence unitary) pair:
    analysis of a synthesis is the identity.
    """
    return scipy.fft.idctn(_as_grid(c, shape), type=2, norm="ortho").ravel()


def dct2_adjoint(x, shape: GridShape) -> np.ndarray:
    """Analyze an image into orthonormal DCT-II coefficients.

    Exact adjoint and inverse of :func:`dct2_unitary`.
    """
    return scipy.fft.dctn(_as_grid(x, shape), type=2, norm="ortho").ravel()


@dataclass(frozen=True)
class SamplingMask:
    """Cartesian phase-encode mask: full k-space rows kept, the rest zeroed.

    ``lines`` holds the sampled row indices, sorted ascending. The compact
    measurement ordering is ascending row, then ascending column, which
    fixes the canonical basis used everywhere downstream.
    """

    shape: GridShape
    lines: tuple[int, ...]
    fraction: float
    center_fraction: float
    seed: int

    def __post_init__(self):
        lines = tuple(int(r) for r in self.lines)
        if list(lines) != sorted(set(lines)):
            raise ValueError("mask lines must be sorted and unique")
        if lines and (lines[0] < 0 or lines[-1] >= self.shape.rows):
            raise ValueError("mask line index out of range")
        object.__setattr__(self, "lines", lines)

    @property
    def n_measurements(self) -> int:
        return len(self.lines) * self.shape.cols

    def line_flags(self) -> np.ndarray:
        """Boolean per-row sampling flags."""
        flags = np.zeros(self.shape.rows, dtype=bool)
        flags[list(self.lines)] = True
        return flags

    def to_array(self) -> np.ndarray:
        """Full boolean (rows, cols) sampling pattern."""
        return np.repeat(self.line_flags()[:, None], self.shape.cols, axis=1)


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def make_mask(
    shape: GridShape, fraction: float, center_fraction: float, seed: int
) -> SamplingMask:
    """Select ``round(fraction*rows)`` full k-space rows.

    A band of ``round(center_fraction*rows)`` contiguous rows around the DC
    row (row 0, wrapping at the grid edge) is always included; the remaining
    budget is drawn uniformly at random without replacement from the other
    rows using ``seed``. Identical arguments produce identical masks.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    if not 0.0 <= center_fraction <= fraction:
        raise ValueError(
            f"center_fraction must be in [0, fraction], got {center_fraction}"
        )
    rows = shape.rows
    n_lines = _round_half_up(fraction * rows)
    n_center = _round_half_up(center_fraction * rows)
    if n_center > n_lines:
        raise ValueError(
            f"center band ({n_center} rows) exceeds the line budget ({n_lines})"
        )
    center = {off % rows for off in range(-(n_center // 2), n_center - n_center // 2)}
    rest = np.setdiff1d(np.arange(rows), np.array(sorted(center), dtype=int))
    rng = np.random.default_rng(seed)
    n_extra = n_lines - len(center)
    extra = rng.choice(rest, size=n_extra, replace=False) if n_extra > 0 else []
    lines = tuple(sorted(center | {int(r) for r in extra}))
    return SamplingMask(shape, lines, float(fraction), float(center_fraction), int(seed))


def apply_mask(mask: SamplingMask, y) -> np.ndarray:
    """Zero every k-space entry whose row is not sampled.

    An orthogonal projection: idempotent and self-adjoint.
    """
    grid = _as_grid(y, mask.shape).copy()
    grid[~mask.line_flags(), :] = 0.0
    return grid.ravel()


def mask_to_compact(mask: SamplingMask, y) -> np.ndarray:
    """Extract the M sampled entries in canonical order (row asc, col asc)."""
    grid = _as_grid(y, mask.shape)
    return grid[list(mask.lines), :].ravel()


def compact_to_mask(mask: SamplingMask, v) -> np.ndarray:
    """Scatter a compact length-M vector back onto the k-space grid.

    Unsampled entries are zero; inverse of :func:`mask_to_compact` on
    masked vectors.
    """
    v = np.asarray(v, dtype=np.complex128).ravel()
    if v.size != mask.n_measurements:
        raise ValueError(
            f"expected {mask.n_measurements} measurements, got {v.size}"
        )
    grid = np.zeros((mask.shape.rows, mask.shape.cols), dtype=np.complex128)
    grid[list(mask.lines), :] = v.reshape(len(mask.lines), mask.shape.cols)
    return grid.ravel()
