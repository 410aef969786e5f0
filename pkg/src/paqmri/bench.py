"""Synthetic phantoms, noise injection, PSNR, and the benchmark harness.

The harness reconstructs every phantom under each requested operator
configuration (baseline, q-only, p-only, paq) from byte-identical simulated
measurements: data is always generated with the physical operator, and the
projector is applied to it exactly once inside the preconditioned solver
paths. The whitening projector is cached per mask since its precomputation
is an offline step.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .projector import optimize_projector, probe_dual_gram
from .rotator import build_rotator
from .sensing import EffectiveOperator, SensingOperator
from .solver import IstaConfig, ista_reconstruct
from .transforms import GridShape, dct2_adjoint, dct2_unitary, make_mask

__all__ = [
    "CONFIG_NAMES",
    "PSNR_CAP_DB",
    "Phantom",
    "MaskSpec",
    "RotatorSpec",
    "SolverSpec",
    "BenchCase",
    "BenchResult",
    "psnr",
    "make_phantom",
    "add_noise",
    "resolve_lambda",
    "run_benchmark",
]

CONFIG_NAMES = ("baseline", "q-only", "p-only", "paq")
PSNR_CAP_DB = 200.0
PHANTOM_KINDS = ("dct_sparse", "shepp_logan_like", "file")

# Fixed analytic ellipse composite: (cx, cy, a, b, angle_rad, additive value)
# on [-1, 1]^2 coordinates. Values accumulate and are clipped to [0, 1].
_ELLIPSES = (
    (0.0, 0.0, 0.92, 0.78, 0.0, 1.0),
    (0.0, 0.0, 0.85, 0.70, 0.0, -0.55),
    (-0.25, 0.05, 0.28, 0.12, 0.4, -0.25),
    (0.25, 0.05, 0.28, 0.12, -0.4, -0.25),
    (0.0, -0.35, 0.18, 0.22, 0.0, 0.30),
    (-0.08, 0.45, 0.05, 0.05, 0.0, 0.35),
    (0.12, 0.42, 0.04, 0.06, 0.0, 0.35),
    (0.0, 0.1, 0.05, 0.03, 0.0, -0.15),
)


@dataclass(frozen=True, eq=False)
class Phantom:
    """Real-valued test image in [0, 1], flat row-major storage.

    For ``dct_sparse`` phantoms, ``coefficients`` holds the seeded sparse
    coefficient vector before the [0, 1] rescale (exactly K nonzeros); the
    rescale itself shifts the DC coefficient.
    """

    kind: str
    shape: GridShape
    sparsity_k: int | None
    seed: int
    image: np.ndarray
    coefficients: np.ndarray | None = None


def psnr(reference, test, peak: float = 1.0) -> float:
    """10 log10(peak^2 / MSE) in dB, comparing magnitudes.

    Complex inputs are compared by magnitude. A zero MSE returns the
    documented cap of 200 dB.
    """
    ref = np.asarray(reference)
    tst = np.asarray(test)
    if ref.shape != tst.shape:
        raise ValueError(f"shape mismatch: {ref.shape} vs {tst.shape}")
    if not peak > 0:
        raise ValueError(f"peak must be > 0, got {peak}")
    err = np.abs(ref) - np.abs(tst)
    mse = float(np.mean(np.square(err)))
    if mse == 0.0:
        return PSNR_CAP_DB
    return float(10.0 * np.log10(peak * peak / mse))


def _render_ellipses(shape: GridShape) -> np.ndarray:
    ys = (2.0 * np.arange(shape.rows) + 1.0) / shape.rows - 1.0
    xs = (2.0 * np.arange(shape.cols) + 1.0) / shape.cols - 1.0
    x, y = np.meshgrid(xs, ys)
    img = np.zeros((shape.rows, shape.cols))
    for cx, cy, a, b, ang, val in _ELLIPSES:
        ca, sa = np.cos(ang), np.sin(ang)
        u = (x - cx) * ca + (y - cy) * sa
        v = -(x - cx) * sa + (y - cy) * ca
        img[(u / a) ** 2 + (v / b) ** 2 <= 1.0] += val
    return np.clip(img, 0.0, 1.0).ravel()


def make_phantom(
    kind: str,
    shape: GridShape,
    sparsity_k: int | None = None,
    seed: int = 0,
    path=None,
) -> Phantom:
    """Create a deterministic test image.

    dct_sparse
        K seeded support indices with Gaussian magnitudes, synthesized via
        the orthonormal DCT and min-max rescaled into [0, 1].
    shepp_logan_like
        A fixed analytic ellipse composite (seed ignored).
    file
        An 8- or 16-bit PGM loaded from ``path`` and normalized by its
        maxval; dimensions must match ``shape``.
    """
    if kind not in PHANTOM_KINDS:
        raise ValueError(f"unknown phantom kind {kind!r}; expected one of {PHANTOM_KINDS}")
    coefficients = None
    if kind == "dct_sparse":
        if sparsity_k is None or not 1 <= sparsity_k <= shape.n:
            raise ValueError(
                f"dct_sparse needs sparsity_k in [1, {shape.n}], got {sparsity_k}"
            )
        rng = np.random.default_rng(seed)
        support = rng.choice(shape.n, size=sparsity_k, replace=False)
        coefficients = np.zeros(shape.n)
        coefficients[support] = rng.normal(0.0, 1.0, size=sparsity_k)
        raw = dct2_unitary(coefficients, shape).real
        lo, hi = raw.min(), raw.max()
        image = (raw - lo) / (hi - lo) if hi > lo else np.zeros(shape.n)
    elif kind == "shepp_logan_like":
        image = _render_ellipses(shape)
    else:
        if path is None:
            raise ValueError("file phantoms need a path")
        from .formats import read_pgm

        data, maxval = read_pgm(path)
        if data.shape != (shape.rows, shape.cols):
            raise ValueError(
                f"image is {data.shape[0]}x{data.shape[1]}, expected "
                f"{shape.rows}x{shape.cols}"
            )
        image = (data.astype(float) / maxval).ravel()
    return Phantom(
        kind=kind,
        shape=shape,
        sparsity_k=sparsity_k,
        seed=int(seed),
        image=np.clip(image, 0.0, 1.0),
        coefficients=coefficients,
    )


def add_noise(y, sigma: float, seed: int) -> np.ndarray:
    """Add i.i.d. complex Gaussian noise: real and imaginary parts each
    N(0, sigma^2 / 2), so the per-entry noise power is sigma^2. sigma = 0
    returns an unchanged copy."""
    y = np.asarray(y, dtype=np.complex128)
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return y.copy()
    rng = np.random.default_rng(seed)
    scale = sigma / np.sqrt(2.0)
    noise = rng.normal(0.0, scale, size=y.shape) + 1j * rng.normal(0.0, scale, size=y.shape)
    return y + noise


@dataclass(frozen=True)
class MaskSpec:
    fraction: float = 0.2
    center_fraction: float = 0.0625


@dataclass(frozen=True)
class RotatorSpec:
    epsilon: float = 0.005
    nnz_per_row: int = 8


@dataclass(frozen=True)
class SolverSpec:
    """ISTA settings plus the threshold rule.

    lambda_rule "relative" sets lam = lambda_value * max|A~*(y)| per
    instance; "absolute" uses lambda_value directly. The lambda actually
    used is recorded in every result row.
    """

    lambda_rule: str = "relative"
    lambda_value: float = 1e-3
    max_iters: int = 200
    tol: float = 1e-6
    step: float | str = "auto"

    def __post_init__(self):
        if self.lambda_rule not in ("relative", "absolute"):
            raise ValueError(f"unknown lambda_rule {self.lambda_rule!r}")
        if self.lambda_value < 0:
            raise ValueError("lambda_value must be >= 0")


@dataclass
class BenchCase:
    phantom_id: str
    config: str
    seed: int
    psnr_db: float
    runtime_s: float
    iterations: int
    lam: float
    converged: bool
    error: str | None = None


@dataclass
class BenchResult:
    per_case: list[BenchCase] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    peak: float = 1.0


def resolve_lambda(spec: SolverSpec, op, y) -> float:
    if spec.lambda_rule == "absolute":
        return spec.lambda_value
    return spec.lambda_value * float(np.abs(op.adjoint(y)).max())


def _case_noise_seed(seed: int, phantom_index: int) -> int:
    return (seed * 1_000_003 + phantom_index) & ((1 << 63) - 1)


def _run_case(args) -> BenchCase:
    phantom, phantom_id, seed, cfg_name, base, p_use, q_use, y, solver_spec, peak = args
    try:
        op = EffectiveOperator(base, p_use, q_use)
        y_eff = p_use @ y if p_use is not None else y
        lam = resolve_lambda(solver_spec, op, y_eff)
        ista_cfg = IstaConfig(
            lam=lam,
            max_iters=solver_spec.max_iters,
            step=solver_spec.step,
            tol=solver_spec.tol,
        )
        t0 = time.perf_counter()
        recon = ista_reconstruct(op, y_eff, ista_cfg)
        runtime = time.perf_counter() - t0
        return BenchCase(
            phantom_id=phantom_id,
            config=cfg_name,
            seed=seed,
            psnr_db=psnr(phantom.image, recon.image, peak),
            runtime_s=runtime,
            iterations=recon.iterations,
            lam=lam,
            converged=recon.converged,
        )
    except Exception as exc:  # record, keep the batch going
        return BenchCase(
            phantom_id=phantom_id,
            config=cfg_name,
            seed=seed,
            psnr_db=float("nan"),
            runtime_s=0.0,
            iterations=0,
            lam=float("nan"),
            converged=False,
            error=f"{type(exc).__name__}: {exc}",
        )


def run_benchmark(
    phantoms,
    mask_spec: MaskSpec,
    solver_spec: SolverSpec,
    configs=CONFIG_NAMES,
    seeds=(0,),
    rotator_spec: RotatorSpec = RotatorSpec(),
    sigma: float = 0.0,
    projector_max_iters: int = 2000,
    projector_tol: float = 1e-8,
    gradient_mode: str = "chain-corrected",
    max_workers: int | None = None,
) -> BenchResult:
    """Reconstruct every phantom under every configuration and seed.

    Masks, rotators, measurements, and the per-mask optimized projector are
    prepared up front (the offline phase); the reconstructions then run
    concurrently on a small thread pool over immutable inputs, so results
    are identical to a serial run and keep submission order. Per-case
    failures are recorded on the result row (psnr as NaN) without aborting
    the batch.
    """
    if not phantoms:
        raise ValueError("need at least one phantom")
    if not seeds:
        raise ValueError("need at least one seed")
    for cfg_name in configs:
        if cfg_name not in CONFIG_NAMES:
            raise ValueError(f"unknown config {cfg_name!r}; expected one of {CONFIG_NAMES}")
    result = BenchResult()
    need_p = any(c in ("p-only", "paq") for c in configs)
    need_q = any(c in ("q-only", "paq") for c in configs)
    projector_cache: dict = {}
    operator_cache: dict = {}
    case_inputs = []
    for seed in seeds:
        for pi, phantom in enumerate(phantoms):
            shape = phantom.shape
            op_key = (seed, shape)
            if op_key not in operator_cache:
                mask = make_mask(shape, mask_spec.fraction, mask_spec.center_fraction, seed)
                base = SensingOperator(mask)
                p_data = None
                if need_p:
                    key = (shape, mask.lines)
                    if key not in projector_cache:
                        gram = probe_dual_gram(base)
                        projector_cache[key] = optimize_projector(
                            gram,
                            max_iters=projector_max_iters,
                            tol=projector_tol,
                            mode=gradient_mode,
                        ).data
                    p_data = projector_cache[key]
                rot = (
                    build_rotator(shape.n, rotator_spec.epsilon, rotator_spec.nnz_per_row, seed)
                    if need_q
                    else None
                )
                operator_cache[op_key] = (base, p_data, rot)
            base, p_data, rot = operator_cache[op_key]
            phantom_id = f"{pi:02d}-{phantom.kind}-s{phantom.seed}"
            c_true = dct2_adjoint(phantom.image.astype(np.complex128), shape)
            y = add_noise(base.forward(c_true), sigma, _case_noise_seed(seed, pi))
            for cfg_name in configs:
                case_inputs.append(
                    (
                        phantom,
                        phantom_id,
                        seed,
                        cfg_name,
                        base,
                        p_data if cfg_name in ("p-only", "paq") else None,
                        rot if cfg_name in ("q-only", "paq") else None,
                        y,
                        solver_spec,
                        result.peak,
                    )
                )
    workers = max_workers if max_workers is not None else min(4, len(case_inputs))
    if workers <= 1:
        result.per_case = [_run_case(args) for args in case_inputs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            result.per_case = list(pool.map(_run_case, case_inputs))
    for cfg_name in configs:
        rows = [c for c in result.per_case if c.config == cfg_name and c.error is None]
        vals = np.array([c.psnr_db for c in rows])
        result.summary[cfg_name] = {
            "n": len(rows),
            "psnr_mean": float(vals.mean()) if rows else float("nan"),
            "psnr_std": float(vals.std()) if rows else float("nan"),
            "runtime_mean": float(np.mean([c.runtime_s for c in rows])) if rows else float("nan"),
            "iterations_mean": float(np.mean([c.iterations for c in rows])) if rows else float("nan"),
        }
    return result
