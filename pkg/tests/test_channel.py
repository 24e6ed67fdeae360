"""Fading, alignment, detection vectors, and zero-forcing precoder tests."""

import numpy as np
import pytest

from sa_mimo_noma import channel
from sa_mimo_noma.errors import (ConfigurationError, DegenerateChannelError,
                                 NumericalError)


def test_fading_moments(rng):
    g = channel.sample_fading(2, 3, rng, size=(20000,))
    assert g.shape == (20000, 2, 3)
    assert abs(np.mean(np.abs(g) ** 2) - 1.0) < 0.02
    assert abs(np.var(g.real) - 0.5) < 0.01
    assert abs(np.var(g.imag) - 0.5) < 0.01
    assert abs(np.mean(g)) < 0.01


def test_fading_validation(rng):
    with pytest.raises(ConfigurationError):
        channel.sample_fading(0, 2, rng)


def test_nullspace_shape_and_orthonormality(rng):
    for m, n in ((2, 2), (2, 3), (3, 2), (4, 3)):
        g_near = channel.sample_fading(n, m, rng, size=(16,))
        g_far = channel.sample_fading(n, m, rng, size=(16,))
        basis = channel.alignment_nullspace(g_near, g_far)
        dim = 2 * n - m
        assert basis.shape == (16, 2 * n, dim)
        gram = np.swapaxes(basis, -1, -2).conj() @ basis
        np.testing.assert_allclose(gram, np.broadcast_to(np.eye(dim), gram.shape),
                                   atol=1e-12)


def test_nullspace_requires_enough_antennas(rng):
    g_near = channel.sample_fading(1, 2, rng, size=(4,))
    g_far = channel.sample_fading(1, 2, rng, size=(4,))
    with pytest.raises(ConfigurationError):
        channel.alignment_nullspace(g_near, g_far)


def test_alignment_property(rng):
    """Both users of a pair project onto the same effective vector."""
    g_near = channel.sample_fading(3, 4, rng, size=(64,))
    g_far = channel.sample_fading(3, 4, rng, size=(64,))
    basis = channel.alignment_nullspace(g_near, g_far)
    coeff = channel.random_alignment_coeff(2, rng, size=(64,))
    v_near, v_far = channel.detection_vectors(basis, coeff)
    eff_near = channel.effective_channel(g_near, v_near)
    eff_far = channel.effective_channel(g_far, v_far)
    np.testing.assert_allclose(eff_near, eff_far, atol=1e-10)
    # total detection power is fixed by the coefficient normalization
    total = (np.sum(np.abs(v_near) ** 2, axis=-1)
             + np.sum(np.abs(v_far) ** 2, axis=-1))
    np.testing.assert_allclose(total, 2.0, atol=1e-12)


def test_detection_vectors_rejects_bad_coeff(rng):
    g_near = channel.sample_fading(2, 2, rng, size=(4,))
    g_far = channel.sample_fading(2, 2, rng, size=(4,))
    basis = channel.alignment_nullspace(g_near, g_far)
    ok = np.ones((4, 2), dtype=complex)   # squared norm 2, accepted
    channel.detection_vectors(basis, ok)
    with pytest.raises(ConfigurationError):
        channel.detection_vectors(basis, 1.5 * ok)


def test_random_alignment_coeff_norm(rng):
    coeff = channel.random_alignment_coeff(3, rng, size=(128,))
    np.testing.assert_allclose(np.sum(np.abs(coeff) ** 2, axis=-1), 2.0,
                               atol=1e-12)


def test_degenerate_mask_flags_rank_deficiency(rng):
    g_near = channel.sample_fading(2, 2, rng, size=(8,))
    g_far = channel.sample_fading(2, 2, rng, size=(8,))
    assert not channel.degenerate_mask(g_near, g_far).any()
    # duplicate transmit columns make two stacked rows identical
    g_near_bad = g_near.copy()
    g_far_bad = g_far.copy()
    g_near_bad[0, :, 1] = g_near_bad[0, :, 0]
    g_far_bad[0, :, 1] = g_far_bad[0, :, 0]
    mask = channel.degenerate_mask(g_near_bad, g_far_bad)
    assert mask[0] and not mask[1:].any()
    with pytest.raises(DegenerateChannelError):
        channel.alignment_nullspace(g_near_bad, g_far_bad)


def test_precoder_zero_forcing_and_normalization(rng):
    m = 3
    gmat = (rng.standard_normal((32, m, m))
            + 1j * rng.standard_normal((32, m, m))) / np.sqrt(2)
    pre = channel.build_precoder(gmat)
    prod = gmat @ pre.precoder
    diag = np.einsum('...ii->...i', prod)
    off = prod - diag[..., None] * np.eye(m)
    assert np.max(np.abs(off)) < 1e-10
    np.testing.assert_allclose(diag.real, pre.scale, atol=1e-10)
    np.testing.assert_allclose(diag.imag, 0.0, atol=1e-10)
    trace = np.einsum('...ij,...ij->...', pre.precoder, pre.precoder.conj()).real
    np.testing.assert_allclose(trace, m, atol=1e-10)
    cols = np.einsum('...ij,...ij->...j', pre.precoder.conj(), pre.precoder).real
    np.testing.assert_allclose(cols, 1.0, atol=1e-10)


def test_effective_gain_is_projection_distance(rng):
    """gain_m equals the squared distance of column g_m from the span of the
    other columns of the effective channel (independent least-squares oracle)."""
    m = 3
    for _ in range(32):
        gmat = (rng.standard_normal((m, m))
                + 1j * rng.standard_normal((m, m))) / np.sqrt(2)
        gains = channel.effective_gains_only(gmat)
        cols = gmat.conj().T      # columns g_k
        for k in range(m):
            others = np.delete(cols, k, axis=1)
            coef, *_ = np.linalg.lstsq(others, cols[:, k], rcond=None)
            resid = cols[:, k] - others @ coef
            assert gains[k] == pytest.approx(np.sum(np.abs(resid) ** 2),
                                             rel=1e-9)


def test_precoder_condition_cap(rng):
    gmat = np.eye(2, dtype=complex)
    gmat[1, 1] = 1e-12
    with pytest.raises(NumericalError):
        channel.build_precoder(gmat)


def test_max_min_selection_is_optimal(rng):
    m, n = 2, 2
    g_near = channel.sample_fading(n, m, rng, size=(m,))
    g_far = channel.sample_fading(n, m, rng, size=(m,))
    i_star, v_near, v_far, gains = channel.select_detection_vectors(g_near, g_far)
    dim = 2 * n - m
    cands = channel.basis_coeff_candidates(dim)
    bases = channel.alignment_nullspace(g_near, g_far)
    mins = []
    for i in range(dim):
        vn, vf = channel.detection_vectors(bases, np.broadcast_to(cands[i], (m, dim)))
        gmat = channel.effective_channel(g_near, vn).conj()
        mins.append(channel.effective_gains_only(gmat).min())
    assert i_star == int(np.argmax(mins))
    assert gains.min() == pytest.approx(max(mins), rel=1e-12)


def test_max_min_selection_batched_matches_scalar(rng):
    m, n = 2, 3
    g_near = channel.sample_fading(n, m, rng, size=(6, m))
    g_far = channel.sample_fading(n, m, rng, size=(6, m))
    i_b, vn_b, vf_b, g_b = channel.select_detection_vectors(g_near, g_far)
    for t in range(6):
        i_s, vn_s, vf_s, g_s = channel.select_detection_vectors(
            g_near[t], g_far[t])
        assert i_b[t] == i_s
        np.testing.assert_allclose(g_b[t], g_s, rtol=1e-12)
        np.testing.assert_allclose(vn_b[t], vn_s, rtol=1e-12)
