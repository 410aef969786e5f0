import numpy as np
import pytest

from paqmri.transforms import (
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

from oracles import dct2_synthesis_matrix, dft2_matrix


def test_grid_shape_requires_powers_of_two():
    GridShape(4, 8)
    with pytest.raises(ValueError):
        GridShape(3, 8)
    with pytest.raises(ValueError):
        GridShape(4, 0)


def test_fft_constant_image_has_single_dc_entry():
    shape = GridShape(4, 4)
    y = fft2_unitary(np.ones(16), shape)
    expected = np.zeros(16, complex)
    expected[0] = 4.0  # sqrt(N) * mean
    np.testing.assert_allclose(y, expected, atol=1e-12)


def test_fft_zero_image():
    shape = GridShape(4, 4)
    np.testing.assert_array_equal(fft2_unitary(np.zeros(16), shape), np.zeros(16))


def test_ifft_dc_impulse_gives_constant_image():
    shape = GridShape(2, 2)
    y = np.zeros(4, complex)
    y[0] = 2.0  # sqrt(N)
    np.testing.assert_allclose(ifft2_unitary(y, shape), np.ones(4), atol=1e-12)


def test_fft_roundtrips():
    shape = GridShape(8, 4)
    rng = np.random.default_rng(0)
    x = rng.standard_normal(shape.n) + 1j * rng.standard_normal(shape.n)
    back = ifft2_unitary(fft2_unitary(x, shape), shape)
    assert np.linalg.norm(back - x) <= 1e-12 * np.linalg.norm(x)
    y = rng.standard_normal(shape.n) + 1j * rng.standard_normal(shape.n)
    again = fft2_unitary(ifft2_unitary(y, shape), shape)
    assert np.linalg.norm(again - y) <= 1e-12 * np.linalg.norm(y)


def test_dct_dc_atom_is_constant_over_sqrt_n():
    shape = GridShape(4, 4)
    c = np.zeros(16, complex)
    c[0] = 1.0
    np.testing.assert_allclose(dct2_unitary(c, shape), np.full(16, 0.25), atol=1e-12)


def test_dct_zero_and_roundtrip():
    shape = GridShape(4, 8)
    np.testing.assert_array_equal(dct2_unitary(np.zeros(32), shape), np.zeros(32))
    rng = np.random.default_rng(1)
    c = rng.standard_normal(shape.n) + 1j * rng.standard_normal(shape.n)
    back = dct2_adjoint(dct2_unitary(c, shape), shape)
    assert np.linalg.norm(back - c) <= 1e-12 * np.linalg.norm(c)


@pytest.mark.parametrize("rows,cols", [(2, 2), (4, 4), (8, 8), (4, 8)])
def test_transforms_match_direct_summation_oracle(rows, cols):
    shape = GridShape(rows, cols)
    rng = np.random.default_rng(rows * 100 + cols)
    x = rng.standard_normal(shape.n) + 1j * rng.standard_normal(shape.n)
    f = dft2_matrix(rows, cols)
    np.testing.assert_allclose(fft2_unitary(x, shape), f @ x, atol=1e-10)
    np.testing.assert_allclose(ifft2_unitary(x, shape), f.conj().T @ x, atol=1e-10)
    psi = dct2_synthesis_matrix(rows, cols)
    np.testing.assert_allclose(dct2_unitary(x, shape), psi @ x, atol=1e-10)
    np.testing.assert_allclose(dct2_adjoint(x, shape), psi.T @ x, atol=1e-10)


def test_unitarity_preserves_norms():
    shape = GridShape(16, 16)
    rng = np.random.default_rng(2)
    for _ in range(20):
        x = rng.standard_normal(shape.n) + 1j * rng.standard_normal(shape.n)
        nx = np.linalg.norm(x)
        assert abs(np.linalg.norm(fft2_unitary(x, shape)) - nx) <= 1e-10 * nx
        assert abs(np.linalg.norm(dct2_adjoint(x, shape)) - nx) <= 1e-10 * nx


def test_adjoint_inner_product_identities():
    shape = GridShape(8, 8)
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = rng.standard_normal(shape.n) + 1j * rng.standard_normal(shape.n)
        y = rng.standard_normal(shape.n) + 1j * rng.standard_normal(shape.n)
        scale = np.linalg.norm(x) * np.linalg.norm(y)
        lhs = np.vdot(y, fft2_unitary(x, shape))
        rhs = np.vdot(ifft2_unitary(y, shape), x)
        assert abs(lhs - rhs) <= 1e-10 * scale
        lhs = np.vdot(y, dct2_unitary(x, shape))
        rhs = np.vdot(dct2_adjoint(y, shape), x)
        assert abs(lhs - rhs) <= 1e-10 * scale


def test_shape_mismatch_rejected():
    shape = GridShape(4, 4)
    with pytest.raises(ValueError):
        fft2_unitary(np.ones(15), shape)
    with pytest.raises(ValueError):
        dct2_adjoint(np.ones(17), shape)


def test_make_mask_full_fraction_samples_everything():
    shape = GridShape(8, 8)
    mask = make_mask(shape, 1.0, 0.25, seed=0)
    assert mask.lines == tuple(range(8))
    assert mask.to_array().all()


def test_make_mask_counts_and_center_band():
    shape = GridShape(32, 32)
    mask = make_mask(shape, 0.25, 0.125, seed=5)
    assert len(mask.lines) == 8
    center = {30, 31, 0, 1}  # 4 rows wrapping around DC row 0
    assert center <= set(mask.lines)
    assert len(set(mask.lines) - center) == 4


def test_make_mask_determinism_and_seed_sensitivity():
    shape = GridShape(32, 32)
    a = make_mask(shape, 0.5, 0.0625, seed=9)
    b = make_mask(shape, 0.5, 0.0625, seed=9)
    assert a.lines == b.lines
    c = make_mask(shape, 0.5, 0.0625, seed=10)
    assert a.lines != c.lines


def test_make_mask_rejects_bad_fractions():
    shape = GridShape(8, 8)
    with pytest.raises(ValueError):
        make_mask(shape, 0.0, 0.0, seed=0)
    with pytest.raises(ValueError):
        make_mask(shape, 1.5, 0.0, seed=0)
    with pytest.raises(ValueError):
        make_mask(shape, 0.25, 0.5, seed=0)


def test_apply_mask_full_is_identity():
    shape = GridShape(4, 4)
    mask = make_mask(shape, 1.0, 0.0, seed=0)
    rng = np.random.default_rng(4)
    y = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    np.testing.assert_array_equal(apply_mask(mask, y), y)


def test_apply_mask_zeroes_unsampled_rows():
    shape = GridShape(4, 4)
    mask = SamplingMask(shape, (0, 2), 0.5, 0.0, seed=0)
    y = np.arange(16, dtype=complex)
    out = apply_mask(mask, y).reshape(4, 4)
    np.testing.assert_array_equal(out[0], np.arange(4))
    np.testing.assert_array_equal(out[2], np.arange(8, 12))
    assert not out[1].any() and not out[3].any()


def test_apply_mask_projection_properties():
    shape = GridShape(8, 8)
    mask = make_mask(shape, 0.5, 0.125, seed=6)
    rng = np.random.default_rng(7)
    x = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    y = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    once = apply_mask(mask, x)
    np.testing.assert_array_equal(apply_mask(mask, once), once)  # idempotent
    lhs = np.vdot(y, apply_mask(mask, x))
    rhs = np.vdot(apply_mask(mask, y), x)
    assert abs(lhs - rhs) <= 1e-12 * np.linalg.norm(x) * np.linalg.norm(y)


def test_compact_canonical_order_and_roundtrip():
    shape = GridShape(4, 4)
    mask = SamplingMask(shape, (0, 2), 0.5, 0.0, seed=0)
    y = np.arange(16, dtype=complex)
    compact = mask_to_compact(mask, y)
    np.testing.assert_array_equal(compact, np.array([0, 1, 2, 3, 8, 9, 10, 11], dtype=complex))
    scattered = compact_to_mask(mask, compact)
    np.testing.assert_array_equal(scattered, apply_mask(mask, y))
    np.testing.assert_array_equal(mask_to_compact(mask, scattered), compact)


def test_compact_full_mask_is_plain_copy():
    shape = GridShape(4, 4)
    mask = make_mask(shape, 1.0, 0.0, seed=0)
    y = np.arange(16, dtype=complex)
    np.testing.assert_array_equal(mask_to_compact(mask, y), y)


def test_compact_length_validation():
    shape = GridShape(4, 4)
    mask = SamplingMask(shape, (0, 2), 0.5, 0.0, seed=0)
    with pytest.raises(ValueError):
        compact_to_mask(mask, np.ones(7))
