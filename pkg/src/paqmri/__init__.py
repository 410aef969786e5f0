"""Preconditioned compressed-sensing MRI toolkit.

Matrix-free Fourier/DCT sensing operators over Cartesian line masks, a
measurement-space whitening projector optimized on the impulse-probed dual
Gram matrix, a near-identity random rotator for the coefficient space,
mutual-coherence reports, an ISTA solver, and a PSNR benchmark harness.
"""

from .bench import (
    BenchCase,
    BenchResult,
    MaskSpec,
    Phantom,
    RotatorSpec,
    SolverSpec,
    add_noise,
    make_phantom,
    psnr,
    run_benchmark,
)
from .coherence import (
    CoherenceReport,
    GramSpectrum,
    dictionary_column,
    gram_spectrum,
    mutual_coherence_exact,
    mutual_coherence_sampled,
)
from .errors import ConfigError, NumericalError, ResourceBudgetError
from .projector import (
    DualGram,
    OptimizationTrace,
    Projector,
    estimate_lipschitz,
    gradient,
    objective,
    optimize_projector,
    probe_dual_gram,
    spectral_radius,
)
from .rotator import Rotator, build_rotator, hard_threshold
from .sensing import EffectiveOperator, SensingOperator
from .solver import IstaConfig, ReconResult, estimate_step, ista_reconstruct, soft_threshold
from .transforms import (
    GridShape,
    SamplingMask,
    apply_mask,
    compact_to_mask,
    dct2_adjoint,
    dct2_unitary,
    fft2_unitary,
    ifft2_unitary,
    make_mask,
    mask_to_compact,
)

__version__ = "0.1.0"

__all__ = [
    "BenchCase",
    "BenchResult",
    "CoherenceReport",
    "ConfigError",
    "DualGram",
    "EffectiveOperator",
    "GramSpectrum",
    "GridShape",
    "IstaConfig",
    "MaskSpec",
    "NumericalError",
    "OptimizationTrace",
    "Phantom",
    "Projector",
    "ReconResult",
    "ResourceBudgetError",
    "Rotator",
    "RotatorSpec",
    "SamplingMask",
    "SensingOperator",
    "SolverSpec",
    "add_noise",
    "apply_mask",
    "build_rotator",
    "compact_to_mask",
    "dct2_adjoint",
    "dct2_unitary",
    "dictionary_column",
    "estimate_lipschitz",
    "estimate_step",
    "fft2_unitary",
    "gradient",
    "gram_spectrum",
    "hard_threshold",
    "ifft2_unitary",
    "ista_reconstruct",
    "make_mask",
    "make_phantom",
    "mask_to_compact",
    "mutual_coherence_exact",
    "mutual_coherence_sampled",
    "objective",
    "optimize_projector",
    "probe_dual_gram",
    "psnr",
    "run_benchmark",
    "soft_threshold",
    "spectral_radius",
]
