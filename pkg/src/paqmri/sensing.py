"""Matrix-free sensing operators mapping coefficients to compact measurements.

The base operator chains DCT synthesis, unitary 2-D FFT, line masking and
compaction. The effective operator wraps it with a measurement-space
projector P (dense M x M) and a coefficient-space rotator Q; the dense
projector is the only materialized matrix. Operators are immutable after
construction and safe for concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rotator import Rotator
from .transforms import (
    GridShape,
    SamplingMask,
    as_vector,
    compact_to_mask,
    dct2_adjoint,
    dct2_unitary,
    fft2_unitary,
    ifft2_unitary,
    mask_to_compact,
)

__all__ = ["SensingOperator", "EffectiveOperator"]


@dataclass(frozen=True)
class SensingOperator:
    """Undersampled Fourier measurement of DCT coefficients.

    ``forward`` synthesizes an image from coefficients, transforms to
    k-space, and extracts the sampled lines in canonical compact order;
    ``adjoint`` is its exact adjoint (scatter, inverse FFT, DCT analysis).
    """

    mask: SamplingMask

    @property
    def shape(self) -> GridShape:
        return self.mask.shape

    @property
    def n(self) -> int:
        return self.mask.shape.n

    @property
    def m(self) -> int:
        return self.mask.n_measurements

    def forward(self, c) -> np.ndarray:
        shape = self.mask.shape
        return mask_to_compact(self.mask, fft2_unitary(dct2_unitary(c, shape), shape))

    def adjoint(self, y) -> np.ndarray:
        shape = self.mask.shape
        return dct2_adjoint(ifft2_unitary(compact_to_mask(self.mask, y), shape), shape)


@dataclass(frozen=True)
class EffectiveOperator:
    """Preconditioned operator: forward = P @ base(Q c), adjoint = Q^T base*(P^H y).

    ``projector`` is a dense M x M complex matrix or None for identity;
    ``rotator`` is a :class:`Rotator` or None for identity. With both None
    the operator coincides with ``base`` bit for bit.
    """

    base: SensingOperator
    projector: np.ndarray | None = None
    rotator: Rotator | None = None

    def __post_init__(self):
        if self.projector is not None:
            p = np.asarray(self.projector, dtype=np.complex128)
            m = self.base.m
            if p.shape != (m, m):
                raise ValueError(
                    f"projector must be {m}x{m} for this mask, got {p.shape}"
                )
            object.__setattr__(self, "projector", p)
        if self.rotator is not None and self.rotator.n != self.base.n:
            raise ValueError(
                f"rotator dimension {self.rotator.n} does not match "
                f"coefficient dimension {self.base.n}"
            )

    @property
    def shape(self) -> GridShape:
        return self.base.shape

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def m(self) -> int:
        return self.base.m

    def forward(self, c) -> np.ndarray:
        c = as_vector(c, self.base.shape)
        if self.rotator is not None:
            c = self.rotator.apply(c)
        y = self.base.forward(c)
        if self.projector is not None:
            y = self.projector @ y
        return y

    def adjoint(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=np.complex128).ravel()
        if y.size != self.m:
            raise ValueError(f"expected {self.m} measurements, got {y.size}")
        if self.projector is not None:
            y = self.projector.conj().T @ y
        c = self.base.adjoint(y)
        if self.rotator is not None:
            c = self.rotator.apply_adjoint(c)
        return c
