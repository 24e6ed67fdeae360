"""Rayleigh fading, alignment null spaces, detection vectors, and the
zero-forcing precoder.

All operations accept a leading batch shape so the Monte Carlo engine can
process many trials in one call; the scalar forms used in the public
contracts are the batch-of-one special case.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DegenerateChannelError, NumericalError

# Relative singular-value cutoff: a stacked-channel draw whose M-th singular
# value falls below this times the largest is treated as rank deficient.
RANK_CUTOFF = 1e-10
# Effective channel matrices with condition number above this are resampled.
CONDITION_CAP = 1e8


@dataclass
class PairChannel:
    """Small-scale fading matrices and distances for one user pair."""

    near: np.ndarray      # G_m, (N, M) complex
    far: np.ndarray       # G_m', (N, M) complex
    d_near: float
    d_far: float


@dataclass
class AlignedLink:
    """Null-space basis and the detection vectors it induces for one pair."""

    basis: np.ndarray        # U_m, (2N, 2N - M), orthonormal columns
    coeff: np.ndarray        # x_m, (2N - M,), squared norm 2
    v_near: np.ndarray       # (N,)
    v_far: np.ndarray        # (N,)
    effective: np.ndarray    # g_m = G_m^H v_near, (M,)


@dataclass
class PrecoderSet:
    """Zero-forcing precoder built from the effective channel matrix."""

    matrix: np.ndarray           # G, (M, M), rows g_m^H
    precoder: np.ndarray         # P, (M, M)
    scale: np.ndarray            # diagonal of D, (M,), real
    effective_gains: np.ndarray  # 1 / (G^-1 G^-H)_mm, (M,), real


def sample_fading(n_rx, n_tx, rng, size=()):
    """i.i.d. CN(0, 1) matrix entries, real/imag parts each of variance 1/2."""
    if n_rx < 1 or n_tx < 1:
        raise ConfigurationError("antenna counts must be >= 1")
    shape = (size,) if np.isscalar(size) else tuple(size)
    full = shape + (n_rx, n_tx)
    re = rng.standard_normal(full)
    im = rng.standard_normal(full)
    return (re + 1j * im) / np.sqrt(2.0)


def _stacked_matrix(g_near, g_far):
    """[G_m^H, -G_m'^H], shape (..., M, 2N)."""
    gh = np.swapaxes(g_near, -1, -2).conj()
    gph = np.swapaxes(g_far, -1, -2).conj()
    return np.concatenate([gh, -gph], axis=-1)


def alignment_nullspace(g_near, g_far):
    """Orthonormal basis of the kernel of [G_m^H, -G_m'^H].

    Returns a (..., 2N, 2N - M) matrix whose columns span the null space.
    Raises if the configuration leaves no null space or a draw is degenerate.
    """
    g_near = np.asarray(g_near)
    g_far = np.asarray(g_far)
    n_rx, n_tx = g_near.shape[-2:]
    if 2 * n_rx - n_tx <= 0:
        raise ConfigurationError(
            f"alignment needs N > M/2; got N={n_rx}, M={n_tx}")
    stacked = _stacked_matrix(g_near, g_far)
    _, s, vh = np.linalg.svd(stacked)
    if np.any(s[..., -1] < RANK_CUTOFF * s[..., 0]):
        raise DegenerateChannelError(
            "stacked channel matrix is numerically rank deficient")
    return np.swapaxes(vh[..., n_tx:, :], -1, -2).conj()


def degenerate_mask(g_near, g_far):
    """Boolean mask of batch entries whose stacked matrix is rank deficient."""
    s = np.linalg.svd(_stacked_matrix(g_near, g_far), compute_uv=False)
    return s[..., -1] < RANK_CUTOFF * s[..., 0]


def detection_vectors(basis, coeff):
    """Split U_m x_m into the near/far detection vectors.

    ``coeff`` must have squared norm 2; the orthonormal basis makes
    |v_near|^2 + |v_far|^2 = 2 automatically.
    """
    basis = np.asarray(basis)
    coeff = np.asarray(coeff)
    if basis.shape[-1] != coeff.shape[-1]:
        raise ConfigurationError("basis/coefficient dimension mismatch")
    nn = np.sum(np.abs(coeff) ** 2, axis=-1)
    if not np.allclose(nn, 2.0, atol=1e-8):
        raise ConfigurationError("coefficient vector must have squared norm 2")
    w = np.einsum('...ij,...j->...i', basis, coeff)
    n_rx = basis.shape[-2] // 2
    return w[..., :n_rx], w[..., n_rx:]


def random_alignment_coeff(dim, rng, size=()):
    """x_m uniform on the complex sphere of radius sqrt(2)."""
    shape = (size,) if np.isscalar(size) else tuple(size)
    z = rng.standard_normal(shape + (dim,)) + 1j * rng.standard_normal(shape + (dim,))
    z /= np.linalg.norm(z, axis=-1, keepdims=True)
    return np.sqrt(2.0) * z


def effective_channel(g_near, v_near):
    """g_m = G_m^H v_m."""
    return np.einsum('...ab,...a->...b', np.asarray(g_near).conj(), v_near)


def build_precoder(gmat):
    """Zero-forcing precoder P = G^-H D with trace(P P^H) = M.

    ``gmat`` is the M x M effective channel with rows g_m^H.
    """
    gmat = np.asarray(gmat)
    cond = np.linalg.cond(gmat)
    if np.any(cond > CONDITION_CAP):
        raise NumericalError(
            f"effective channel condition number {np.max(cond):.3e} exceeds cap")
    ginv = np.linalg.inv(gmat)
    gram = np.swapaxes(ginv, -1, -2).conj() @ ginv
    gains = 1.0 / np.real(np.einsum('...ii->...i', gram))
    scale = np.sqrt(gains)
    pre = ginv * scale[..., None, :]
    return PrecoderSet(matrix=gmat, precoder=pre, scale=scale,
                       effective_gains=gains)


def effective_gains_only(gmat):
    """1 / (G^-1 G^-H)_mm for each row, without forming the precoder."""
    ginv = np.linalg.inv(gmat)
    gram = np.swapaxes(ginv, -1, -2).conj() @ ginv
    return 1.0 / np.real(np.einsum('...ii->...i', gram))


def basis_coeff_candidates(dim):
    """The sqrt(2)-scaled standard basis vectors used by max-min selection."""
    return np.sqrt(2.0) * np.eye(dim)


def select_detection_vectors(g_near, g_far, bases=None):
    """Max-min selection of the shared alignment coefficient index.

    For each candidate index i the coefficient sqrt(2) e_i is applied to every
    pair, the effective channel matrix is assembled, and the smallest per-pair
    gain is recorded; the index with the largest such minimum wins.

    ``g_near``/``g_far`` stack the M pairs along axis -4/-3 boundary, i.e.
    shape (..., M, N, M) where the third-from-last axis enumerates pairs.
    Returns (i_star, v_near, v_far, gains); vectors have shape (..., M, N)
    and gains (..., M), all for the winning index.
    """
    g_near = np.asarray(g_near)
    g_far = np.asarray(g_far)
    if bases is None:
        bases = alignment_nullspace(g_near, g_far)
    n_rx, n_tx = g_near.shape[-2:]
    dim = 2 * n_rx - n_tx
    cands = basis_coeff_candidates(dim)

    all_vn, all_vf, all_gains, min_gains = [], [], [], []
    for i in range(dim):
        coeff = np.broadcast_to(cands[i], bases.shape[:-2] + (dim,))
        v_near, v_far = detection_vectors(bases, coeff)
        gmat = effective_channel(g_near, v_near).conj()   # rows g_m^H
        gains = effective_gains_only(gmat)
        all_vn.append(v_near)
        all_vf.append(v_far)
        all_gains.append(gains)
        min_gains.append(np.min(gains, axis=-1))
    min_gains = np.stack(min_gains, axis=-1)              # (..., dim)
    i_star = np.argmax(min_gains, axis=-1)

    if min_gains.ndim == 1:
        i = int(i_star)
        return i, all_vn[i], all_vf[i], all_gains[i]

    vn = np.stack(all_vn)                                 # (dim, ..., M, N)
    vf = np.stack(all_vf)
    gs = np.stack(all_gains)                              # (dim, ..., M)

    def pick(arr):
        idx = i_star.reshape((1,) + i_star.shape + (1,) * (arr.ndim - 1 - i_star.ndim))
        idx = np.broadcast_to(idx, (1,) + arr.shape[1:])
        return np.take_along_axis(arr, idx, axis=0)[0]

    return i_star, pick(vn), pick(vf), pick(gs)
