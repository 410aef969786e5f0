"""Dual-Gram extraction by impulse probing and whitening-projector optimization.

The dual Gram B collects forward(adjoint(e_i)) over the compact measurement
basis, one column per canonical unit vector, and is symmetrized to remove
floating-point asymmetry. The projector P minimizes the whitening objective
J(P) = ||P B P^H - I||_F^2 by gradient descent from P = I with a
power-iteration step size and a backtracking safeguard that makes the
recorded objective trace non-increasing by construction.

Column probing is embarrassingly parallel in principle; the implementation
is sequential but pure, and the resulting DualGram/Projector values are
immutable and shareable across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ResourceBudgetError

__all__ = [
    "DualGram",
    "OptimizationTrace",
    "Projector",
    "GRADIENT_MODES",
    "probe_dual_gram",
    "objective",
    "gradient",
    "spectral_radius",
    "estimate_lipschitz",
    "optimize_projector",
]

DEFAULT_MEMORY_BUDGET = 2 << 30  # 2 GiB for the dense M x M Gram
GRADIENT_MODES = ("chain-corrected", "t-state")
HERMITIAN_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class DualGram:
    """Dense Hermitian M x M dual Gram matrix."""

    data: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.data, dtype=np.complex128)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise ValueError(f"dual Gram must be square, got shape {b.shape}")
        asym = float(np.abs(b - b.conj().T).max()) if b.size else 0.0
        if asym > HERMITIAN_TOL:
            raise ValueError(
                f"dual Gram must be Hermitian within {HERMITIAN_TOL}, "
                f"max asymmetry {asym:.3e}"
            )
        object.__setattr__(self, "data", b)

    @property
    def m(self) -> int:
        return self.data.shape[0]


@dataclass
class OptimizationTrace:
    """Per-iteration record of the projector optimization."""

    objective_values: list[float]
    step_sizes: list[float]
    lipschitz_estimate: float
    lipschitz_method: str
    iterations: int
    converged: bool


@dataclass(frozen=True, eq=False)
class Projector:
    """Optimized whitening projector with its optimization trace."""

    data: np.ndarray
    trace: OptimizationTrace

    @property
    def m(self) -> int:
        return self.data.shape[0]


def probe_dual_gram(op, memory_budget_bytes: int = DEFAULT_MEMORY_BUDGET) -> DualGram:
    """Build B column by column: B[:, i] = forward(adjoint(e_i)).

    ``op`` is any object exposing ``m``, ``forward`` and ``adjoint`` over the
    compact measurement space. The result is symmetrized as (B + B^H)/2.
    Raises :class:`ResourceBudgetError` when the dense M x M matrix would
    not fit the memory budget.
    """
    m = op.m
    required = m * m * 16
    if required > memory_budget_bytes:
        raise ResourceBudgetError(
            f"dual Gram for M={m} needs {required} bytes, "
            f"exceeding the budget of {memory_budget_bytes} bytes"
        )
    cols = np.empty((m, m), dtype=np.complex128)
    e = np.zeros(m, dtype=np.complex128)
    for i in range(m):
        e[i] = 1.0
        cols[:, i] = op.forward(op.adjoint(e))
        e[i] = 0.0
    return DualGram(0.5 * (cols + cols.conj().T))


def _check_pair(p, b: DualGram) -> np.ndarray:
    p = np.asarray(p, dtype=np.complex128)
    if p.shape != (b.m, b.m):
        raise ValueError(f"projector must be {b.m}x{b.m}, got shape {p.shape}")
    return p


def objective(p, b: DualGram) -> float:
    """Whitening objective ||P B P^H - I||_F^2."""
    p = _check_pair(p, b)
    r = p @ b.data @ p.conj().T - np.eye(b.m)
    return float(np.real(np.vdot(r, r)))


def gradient(p, b: DualGram, mode: str = "chain-corrected") -> np.ndarray:
    """Gradient of the whitening objective with respect to P.

    chain-corrected
        The full derivative through both occurrences of P, which for
        Hermitian B is 4 (P B P^H - I) P B. Matches componentwise central
        finite differences of :func:`objective`.
    t-state
        Differentiates ||T T^H - I||_F^2 in the product T = P B only and
        returns 2 (T T^H - I) T. Kept selectable for comparison; its
        stationary points differ from those of the objective.
    """
    p = _check_pair(p, b)
    if mode == "chain-corrected":
        pb = p @ b.data
        return 4.0 * (pb @ p.conj().T - np.eye(b.m)) @ pb
    if mode == "t-state":
        t = p @ b.data
        return 2.0 * (t @ t.conj().T - np.eye(b.m)) @ t
    raise ValueError(f"unknown gradient mode {mode!r}; expected one of {GRADIENT_MODES}")


def spectral_radius(mat, iters: int = 100, seed: int = 0) -> float:
    """Largest-magnitude eigenvalue of a Hermitian matrix by power iteration."""
    mat = np.asarray(mat)
    if iters < 1:
        raise ValueError("iters must be >= 1")
    rng = np.random.default_rng(seed)
    n = mat.shape[0]
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    rho = 0.0
    for _ in range(iters):
        w = mat @ v
        nw = float(np.linalg.norm(w))
        if not np.isfinite(nw):
            raise NumericalError("power iteration produced a non-finite iterate")
        if nw == 0.0:
            return 0.0
        rho = nw
        v = w / nw
    return rho


def estimate_lipschitz(b: DualGram, p=None, iters: int = 100, seed: int = 0) -> float:
    """Curvature bound for the gradient step: 8 * rho(B)^2.

    The objective is quartic in P; near a whitened point the dominant
    curvature is bounded by 8 ||B||_2^2, with rho(B) estimated by power
    iteration. The estimate does not depend on the current P; the method
    used is recorded in the optimization trace.
    """
    rho = spectral_radius(b.data, iters=iters, seed=seed)
    return max(8.0 * rho * rho, np.finfo(float).tiny)


LIPSCHITZ_METHOD = "power-iteration: 8*rho(B)^2"


def optimize_projector(
    b: DualGram,
    max_iters: int = 2000,
    tol: float = 1e-8,
    mode: str = "chain-corrected",
    shrink: float = 0.5,
    max_halvings: int = 30,
    power_iters: int = 100,
) -> Projector:
    """Gradient descent on the whitening objective from P = I.

    Every step starts at alpha = 1/L and is halved (up to ``max_halvings``)
    whenever it would increase the objective, so the recorded trace is
    non-increasing by construction. Stops when the relative objective change
    drops below ``tol``, when no step size makes progress, or at
    ``max_iters``. For rank-deficient B the infimum of the objective may be
    positive, so convergence is judged on the relative change, never on the
    objective reaching zero.
    """
    if mode not in GRADIENT_MODES:
        raise ValueError(f"unknown gradient mode {mode!r}; expected one of {GRADIENT_MODES}")
    if max_iters < 0 or max_halvings < 0:
        raise ValueError("max_iters and max_halvings must be >= 0")
    if not 0.0 < shrink < 1.0:
        raise ValueError(f"shrink must be in (0, 1), got {shrink}")
    p = np.eye(b.m, dtype=np.complex128)
    lipschitz = estimate_lipschitz(b, p, iters=power_iters)
    alpha0 = 1.0 / lipschitz
    j_prev = objective(p, b)
    if not np.isfinite(j_prev):
        raise NumericalError("whitening objective is non-finite at the start")
    objective_values = [j_prev]
    step_sizes: list[float] = []
    iterations = 0
    converged = False
    for _ in range(max_iters):
        g = gradient(p, b, mode)
        alpha = alpha0
        accepted = False
        for _ in range(max_halvings + 1):
            p_new = p - alpha * g
            j_new = objective(p_new, b)
            if np.isfinite(j_new) and j_new <= j_prev:
                accepted = True
                break
            alpha *= shrink
        if not accepted:
            # No step size makes progress: stationary to working precision.
            converged = True
            break
        iterations += 1
        p = p_new
        objective_values.append(j_new)
        step_sizes.append(alpha)
        if abs(j_new - j_prev) / max(j_prev, 1e-30) < tol:
            converged = True
            j_prev = j_new
            break
        j_prev = j_new
    trace = OptimizationTrace(
        objective_values=objective_values,
        step_sizes=step_sizes,
        lipschitz_estimate=lipschitz,
        lipschitz_method=LIPSCHITZ_METHOD,
        iterations=iterations,
        converged=converged,
    )
    return Projector(np.ascontiguousarray(p), trace)
