import numpy as np
import pytest

from paqmri.bench import (
    MaskSpec,
    RotatorSpec,
    SolverSpec,
    add_noise,
    make_phantom,
    psnr,
    run_benchmark,
)
from paqmri.transforms import GridShape, dct2_adjoint, dct2_unitary


def test_psnr_closed_forms():
    ref = np.zeros((8, 8))
    assert psnr(ref, ref + 1.0, peak=255.0) == pytest.approx(20 * np.log10(255.0), abs=1e-10)
    assert psnr(ref, ref + 0.1, peak=1.0) == pytest.approx(20.0, abs=1e-10)


def test_psnr_identical_images_hit_cap():
    img = np.random.default_rng(0).uniform(0, 1, 64)
    assert psnr(img, img) == 200.0


def test_psnr_error_sign_symmetry():
    rng = np.random.default_rng(1)
    x = rng.uniform(0.3, 0.7, 128)
    e = rng.uniform(-0.05, 0.05, 128)
    assert psnr(x, x + e) == pytest.approx(psnr(x, x - e), abs=1e-12)


def test_psnr_validation():
    with pytest.raises(ValueError):
        psnr(np.zeros(4), np.zeros(5))
    with pytest.raises(ValueError):
        psnr(np.zeros(4), np.zeros(4), peak=0.0)


def test_dct_sparse_phantom_has_exact_support():
    shape = GridShape(16, 16)
    phantom = make_phantom("dct_sparse", shape, sparsity_k=10, seed=3)
    assert phantom.coefficients is not None
    assert int((phantom.coefficients != 0).sum()) == 10
    # analysis of the pre-rescale synthesis returns the stored coefficients
    back = dct2_adjoint(dct2_unitary(phantom.coefficients, shape), shape)
    np.testing.assert_allclose(back.real, phantom.coefficients, atol=1e-12)
    assert phantom.image.min() >= 0.0 and phantom.image.max() <= 1.0


def test_dct_sparse_phantom_determinism():
    shape = GridShape(16, 16)
    a = make_phantom("dct_sparse", shape, sparsity_k=5, seed=4)
    b = make_phantom("dct_sparse", shape, sparsity_k=5, seed=4)
    np.testing.assert_array_equal(a.image, b.image)
    c = make_phantom("dct_sparse", shape, sparsity_k=5, seed=5)
    assert not np.array_equal(a.image, c.image)


def test_dct_sparse_dc_only_phantom_is_constant():
    # seed 27 places the single support entry on the DC coefficient
    shape = GridShape(8, 8)
    phantom = make_phantom("dct_sparse", shape, sparsity_k=1, seed=27)
    assert np.flatnonzero(phantom.coefficients).tolist() == [0]
    assert np.ptp(phantom.image) == 0.0


def test_shepp_logan_like_phantom():
    shape = GridShape(32, 32)
    a = make_phantom("shepp_logan_like", shape)
    b = make_phantom("shepp_logan_like", shape, seed=99)
    np.testing.assert_array_equal(a.image, b.image)  # fixed composite, seed ignored
    assert a.image.min() >= 0.0 and a.image.max() <= 1.0
    assert np.ptp(a.image) > 0.5


def test_file_phantom_roundtrip(tmp_path):
    from paqmri.formats import write_pgm

    shape = GridShape(8, 8)
    codes = np.arange(64, dtype=np.uint8).reshape(8, 8)
    path = tmp_path / "img.pgm"
    write_pgm(path, codes, maxval=255)
    phantom = make_phantom("file", shape, path=path)
    np.testing.assert_allclose(phantom.image, codes.ravel() / 255.0, atol=1e-12)
    with pytest.raises(ValueError):
        make_phantom("file", GridShape(4, 4), path=path)


def test_phantom_validation():
    shape = GridShape(8, 8)
    with pytest.raises(ValueError):
        make_phantom("bogus", shape)
    with pytest.raises(ValueError):
        make_phantom("dct_sparse", shape, sparsity_k=0)
    with pytest.raises(ValueError):
        make_phantom("dct_sparse", shape, sparsity_k=65)
    with pytest.raises(ValueError):
        make_phantom("file", shape)


def test_add_noise_zero_sigma_and_determinism():
    y = np.ones(32, complex)
    np.testing.assert_array_equal(add_noise(y, 0.0, seed=0), y)
    a = add_noise(y, 0.5, seed=1)
    b = add_noise(y, 0.5, seed=1)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, add_noise(y, 0.5, seed=2))


def test_add_noise_power():
    y = np.zeros(4096, complex)
    sigma = 0.7
    noisy = add_noise(y, sigma, seed=3)
    power = float(np.mean(np.abs(noisy) ** 2))
    assert abs(power - sigma**2) <= 0.05 * sigma**2


def test_add_noise_validation():
    with pytest.raises(ValueError):
        add_noise(np.zeros(4, complex), -0.1, seed=0)


def test_run_benchmark_full_mask_near_exact():
    shape = GridShape(16, 16)
    phantoms = [make_phantom("dct_sparse", shape, sparsity_k=8, seed=0)]
    result = run_benchmark(
        phantoms,
        MaskSpec(fraction=1.0, center_fraction=0.0),
        SolverSpec(lambda_rule="absolute", lambda_value=0.0, max_iters=20),
        configs=("baseline",),
        seeds=(0,),
    )
    assert result.summary["baseline"]["psnr_mean"] >= 100.0


def test_run_benchmark_determinism_and_layout():
    shape = GridShape(16, 16)
    phantoms = [make_phantom("dct_sparse", shape, sparsity_k=8, seed=s) for s in (0, 1)]
    kwargs = dict(
        mask_spec=MaskSpec(fraction=0.5, center_fraction=0.125),
        solver_spec=SolverSpec(max_iters=30),
        configs=("baseline", "q-only", "p-only", "paq"),
        seeds=(0,),
        rotator_spec=RotatorSpec(epsilon=0.005, nnz_per_row=8),
        sigma=0.05,
    )
    a = run_benchmark(phantoms, **kwargs)
    b = run_benchmark(phantoms, **kwargs)
    assert len(a.per_case) == 8  # 2 phantoms x 4 configs
    for ca, cb in zip(a.per_case, b.per_case):
        assert ca.phantom_id == cb.phantom_id and ca.config == cb.config
        assert ca.psnr_db == cb.psnr_db and ca.lam == cb.lam
        assert ca.iterations == cb.iterations
        assert ca.error is None
    ids = {c.phantom_id for c in a.per_case}
    for pid in ids:
        assert {c.config for c in a.per_case if c.phantom_id == pid} == {
            "baseline",
            "q-only",
            "p-only",
            "paq",
        }


def test_run_benchmark_records_per_case_failures():
    shape = GridShape(16, 16)
    phantoms = [make_phantom("dct_sparse", shape, sparsity_k=8, seed=0)]
    result = run_benchmark(
        phantoms,
        MaskSpec(fraction=0.5, center_fraction=0.125),
        SolverSpec(lambda_rule="absolute", lambda_value=0.0, max_iters=200, step=1e9, tol=0.0),
        configs=("baseline",),
        seeds=(0,),
    )
    case = result.per_case[0]
    assert case.error is not None and "NumericalError" in case.error
    assert np.isnan(case.psnr_db)


def test_run_benchmark_validation():
    shape = GridShape(16, 16)
    phantom = make_phantom("dct_sparse", shape, sparsity_k=4, seed=0)
    with pytest.raises(ValueError):
        run_benchmark([], MaskSpec(), SolverSpec())
    with pytest.raises(ValueError):
        run_benchmark([phantom], MaskSpec(), SolverSpec(), seeds=())
    with pytest.raises(ValueError):
        run_benchmark([phantom], MaskSpec(), SolverSpec(), configs=("bogus",))
