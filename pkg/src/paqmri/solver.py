"""ISTA sparse reconstruction over any forward/adjoint operator pair.

The iteration is the proximal-gradient step for
0.5 ||A c - y||_2^2 + lambda ||c||_1: a gradient step of size eta followed
by complex soft-thresholding at eta * lambda. With the automatic step
(0.99 / rho(A* A) from power iteration) the recorded composite objective is
non-increasing. A single reconstruction is sequential; independent
reconstructions can run concurrently on their immutable operators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .transforms import dct2_unitary

__all__ = ["IstaConfig", "ReconResult", "soft_threshold", "estimate_step", "ista_reconstruct"]


@dataclass(frozen=True)
class IstaConfig:
    """Solver settings; ``step`` is a positive float or "auto"."""

    lam: float
    max_iters: int = 200
    step: float | str = "auto"
    tol: float = 1e-6
    record_curve: bool = False

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")
        if self.max_iters < 0:
            raise ValueError(f"max_iters must be >= 0, got {self.max_iters}")
        if self.tol < 0:
            raise ValueError(f"tol must be >= 0, got {self.tol}")
        if isinstance(self.step, str):
            if self.step != "auto":
                raise ValueError(f'step must be positive or "auto", got {self.step!r}')
        elif not self.step > 0:
            raise ValueError(f"step must be > 0, got {self.step}")


@dataclass
class ReconResult:
    """Final coefficients, the synthesized image, and convergence info.

    When curves are recorded, entry k of ``objective_curve`` is the
    composite objective at iterate k and ``residual_curve`` holds the
    matching data-fidelity norms ||A c_k - y||.
    """

    coefficients: np.ndarray
    image: np.ndarray
    iterations: int
    converged: bool
    step: float
    lam: float
    objective_curve: np.ndarray | None = None
    residual_curve: np.ndarray | None = None


def soft_threshold(v, lam: float) -> np.ndarray:
    """Complex magnitude shrinkage: zero entries with |v| <= lam, else
    shrink the magnitude by lam while preserving the phase. lam = 0 is the
    identity."""
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    v = np.asarray(v)
    if lam == 0:
        return v.copy()
    mag = np.abs(v)
    scale = np.maximum(mag - lam, 0.0) / np.where(mag > 0, mag, 1.0)
    return v * scale


def estimate_step(op, iters: int = 50, seed: int = 0) -> float:
    """Step size 0.99 / rho(A* A), with the spectral radius of the normal
    map estimated by power iteration from a seeded random start."""
    if iters < 1:
        raise ValueError("iters must be >= 1")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(op.n) + 1j * rng.standard_normal(op.n)
    v /= np.linalg.norm(v)
    rho = 0.0
    for _ in range(iters):
        w = op.adjoint(op.forward(v))
        nw = float(np.linalg.norm(w))
        if not np.isfinite(nw):
            raise NumericalError("power iteration on the normal map diverged")
        if nw == 0.0:
            raise NumericalError("operator is numerically zero; no usable step size")
        rho = nw
        v = w / nw
    return 0.99 / rho


def _curve_point(op, c, y, lam: float) -> tuple[float, float]:
    r = op.forward(c) - y
    resid = float(np.linalg.norm(r))
    return 0.5 * resid * resid + lam * float(np.abs(c).sum()), resid


def ista_reconstruct(op, y, cfg: IstaConfig) -> ReconResult:
    """Iterate soft-thresholded gradient steps from c0 = A*(y).

    Stops when the relative iterate change drops below ``cfg.tol`` or at
    ``cfg.max_iters``. The returned image is the DCT synthesis of the
    rotated coefficients (Q c) when the operator carries a rotator, of c
    itself otherwise, so that it lives in the physical image domain.
    """
    y = np.asarray(y, dtype=np.complex128).ravel()
    if y.size != op.m:
        raise ValueError(f"expected {op.m} measurements, got {y.size}")
    step = float(cfg.step) if not isinstance(cfg.step, str) else estimate_step(op)
    thresh = step * cfg.lam
    c = op.adjoint(y)
    curve: list[float] | None = None
    residuals: list[float] | None = None
    if cfg.record_curve:
        obj, resid = _curve_point(op, c, y, cfg.lam)
        curve, residuals = [obj], [resid]
    iterations = 0
    converged = False
    for iterations in range(1, cfg.max_iters + 1):
        # Overflow here is handled by the finiteness check below.
        with np.errstate(over="ignore", invalid="ignore"):
            r = op.forward(c) - y
            c_new = soft_threshold(c - step * op.adjoint(r), thresh)
        if not np.all(np.isfinite(c_new)):
            raise NumericalError(
                "ISTA iterate became non-finite; the step size is too large"
            )
        delta = float(np.linalg.norm(c_new - c))
        base = max(float(np.linalg.norm(c)), 1e-30)
        c = c_new
        if curve is not None and residuals is not None:
            obj, resid = _curve_point(op, c, y, cfg.lam)
            curve.append(obj)
            residuals.append(resid)
        if delta / base < cfg.tol:
            converged = True
            break
    rot = getattr(op, "rotator", None)
    physical = rot.apply(c) if rot is not None else c
    image = dct2_unitary(physical, op.shape)
    return ReconResult(
        coefficients=c,
        image=image,
        iterations=iterations,
        converged=converged,
        step=step,
        lam=cfg.lam,
        objective_curve=np.asarray(curve) if curve is not None else None,
        residual_curve=np.asarray(residuals) if residuals is not None else None,
    )
