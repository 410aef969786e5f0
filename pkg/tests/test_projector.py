import numpy as np
import pytest

from paqmri.errors import ResourceBudgetError
from paqmri.projector import (
    DualGram,
    estimate_lipschitz,
    gradient,
    objective,
    optimize_projector,
    probe_dual_gram,
    spectral_radius,
)
from paqmri.sensing import SensingOperator
from paqmri.transforms import GridShape, SamplingMask, make_mask

from oracles import dense_forward_matrix, fd_gradient, random_hermitian_pd


def test_dual_gram_requires_hermitian():
    DualGram(np.eye(3))
    bad = np.eye(3, dtype=complex)
    bad[0, 1] = 1.0
    with pytest.raises(ValueError):
        DualGram(bad)
    with pytest.raises(ValueError):
        DualGram(np.ones((2, 3)))


def test_probe_full_mask_gives_identity():
    base = SensingOperator(make_mask(GridShape(8, 8), 1.0, 0.125, seed=0))
    gram = probe_dual_gram(base)
    assert np.abs(gram.data - np.eye(base.m)).max() <= 1e-10


def test_probe_single_line_diagonal_and_oracle():
    mask = SamplingMask(GridShape(4, 4), (1,), 0.25, 0.0, seed=0)
    base = SensingOperator(mask)
    gram = probe_dual_gram(base)
    np.testing.assert_allclose(np.diag(gram.data).real, np.ones(4), atol=1e-10)
    a = dense_forward_matrix(mask)
    np.testing.assert_allclose(gram.data, a @ a.conj().T, atol=1e-10)


def test_probe_matches_dense_oracle_random_masks():
    for seed in range(3):
        mask = make_mask(GridShape(8, 8), 0.5, 0.125, seed=seed)
        base = SensingOperator(mask)
        gram = probe_dual_gram(base)
        a = dense_forward_matrix(mask)
        np.testing.assert_allclose(gram.data, a @ a.conj().T, atol=1e-10)
        assert np.abs(gram.data - gram.data.conj().T).max() <= 1e-10


def test_probe_memory_budget():
    base = SensingOperator(make_mask(GridShape(8, 8), 0.5, 0.125, seed=0))
    with pytest.raises(ResourceBudgetError, match="bytes"):
        probe_dual_gram(base, memory_budget_bytes=100)


def test_objective_hand_values():
    assert objective(np.eye(2), DualGram(np.eye(2))) == 0.0
    assert objective(np.zeros((3, 3)), DualGram(np.eye(3))) == pytest.approx(3.0)
    b = DualGram(np.diag([2.0, 1.0]))
    assert objective(np.eye(2), b) == pytest.approx(1.0)


def test_gradient_zero_at_whitened_point():
    b = DualGram(np.eye(4))
    p = np.eye(4, dtype=complex)
    np.testing.assert_array_equal(gradient(p, b, "chain-corrected"), np.zeros((4, 4)))
    np.testing.assert_array_equal(gradient(p, b, "t-state"), np.zeros((4, 4)))


def test_gradient_scalar_case():
    b = DualGram(np.array([[2.0]]))
    p = np.array([[1.0]], dtype=complex)
    assert objective(p, b) == pytest.approx(1.0)
    g = gradient(p, b, "chain-corrected")
    assert g[0, 0] == pytest.approx(8.0)  # 4 * (2 - 1) * 1 * 2
    fd = fd_gradient(lambda q: objective(q, b), p)
    np.testing.assert_allclose(g, fd, rtol=1e-6)


def test_chain_corrected_gradient_matches_finite_differences():
    rng = np.random.default_rng(0)
    for trial in range(20):
        m = int(rng.integers(2, 13))
        b = DualGram(random_hermitian_pd(m, seed=100 + trial))
        p = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        g = gradient(p, b, "chain-corrected")
        fd = fd_gradient(lambda q: objective(q, b), p)
        rel = np.linalg.norm(g - fd) / np.linalg.norm(fd)
        assert rel <= 1e-5


def test_t_state_gradient_is_not_the_objective_gradient():
    rng = np.random.default_rng(1)
    m = 6
    b = DualGram(random_hermitian_pd(m, seed=2))
    p = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    fd = fd_gradient(lambda q: objective(q, b), p)
    rel = np.linalg.norm(gradient(p, b, "t-state") - fd) / np.linalg.norm(fd)
    assert rel > 1e-3  # structurally different from the true gradient


def test_gradient_mode_validation():
    b = DualGram(np.eye(2))
    with pytest.raises(ValueError):
        gradient(np.eye(2), b, "nonsense")


def test_spectral_radius_examples():
    assert spectral_radius(np.diag([1.0, 2.0, 3.0]), iters=100) == pytest.approx(3.0, abs=1e-6)
    assert spectral_radius(np.eye(5), iters=10) == pytest.approx(1.0, abs=1e-12)
    h = random_hermitian_pd(8, seed=3)
    dense = np.abs(np.linalg.eigvalsh(h)).max()
    assert spectral_radius(h, iters=300) == pytest.approx(dense, abs=1e-6)


def test_estimate_lipschitz_is_eight_rho_squared():
    b = DualGram(np.diag([1.0, 2.0, 3.0]))
    assert estimate_lipschitz(b, iters=200) == pytest.approx(8.0 * 9.0, rel=1e-6)


def test_optimize_identity_gram_is_a_no_op():
    proj = optimize_projector(DualGram(np.eye(6)))
    np.testing.assert_array_equal(proj.data, np.eye(6))
    assert proj.trace.objective_values[-1] == 0.0
    assert proj.trace.converged
    assert proj.trace.iterations <= 1


def test_optimize_diagonal_whitening():
    proj = optimize_projector(DualGram(np.diag([4.0, 1.0])), max_iters=500)
    assert proj.trace.objective_values[-1] <= 1e-6
    assert abs(proj.data[0, 0]) == pytest.approx(0.5, abs=1e-3)


def test_optimize_monotone_and_halves_initial_objective():
    for seed in range(4):
        b = DualGram(random_hermitian_pd(10, seed=seed))
        proj = optimize_projector(b)
        vals = proj.trace.objective_values
        assert all(b2 <= b1 for b1, b2 in zip(vals, vals[1:]))
        assert vals[-1] <= 0.5 * vals[0]
        assert len(proj.trace.step_sizes) == proj.trace.iterations


def test_optimize_flattens_spectrum():
    b = DualGram(random_hermitian_pd(12, seed=9))
    proj = optimize_projector(b)
    before = np.linalg.eigvalsh(b.data)
    after_mat = proj.data @ b.data @ proj.data.conj().T
    after = np.linalg.eigvalsh(0.5 * (after_mat + after_mat.conj().T))
    ratio_before = before[-1] / before[0]
    ratio_after = after[-1] / after[0]
    assert ratio_after < ratio_before


def test_optimize_fixed_iteration_mode():
    # tol=0 disables the relative-change stop, pinning the iteration count.
    b = DualGram(random_hermitian_pd(6, seed=10))
    proj = optimize_projector(b, max_iters=25, tol=0.0)
    assert proj.trace.iterations == 25
    assert not proj.trace.converged
