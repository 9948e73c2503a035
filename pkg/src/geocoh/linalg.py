"""Dense complex linear algebra kernels.

Matrices are plain ``numpy`` complex arrays. A list of state vectors is a
2-D array with one state per row.
"""
from typing import NamedTuple

import numpy as np

from .errors import (DimMismatch, InvalidDensityMatrix, NoConvergence,
                     NonHermitian, NotPSD, NotSquare)

TOL_HERM = 1e-8
TOL_TRACE = 1e-8
TOL_NORM = 1e-8
TOL_PSD = 1e-10
TOL_EIG = 1e-10
TOL_RANK = 1e-8


class Spectrum(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns


def _square(M):
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def check_hermitian(H, tol=TOL_HERM):
    H = _square(H)
    diff = np.abs(H - H.conj().T)
    if diff.size and diff.max() > tol:
        i, j = np.unravel_index(np.argmax(diff), diff.shape)
        raise NonHermitian(f"entry ({i}, {j}) differs from conj of ({j}, {i}) by {diff[i, j]:.3g}")
    return H


def fix_phase(v, atol=1e-12):
    """Rotate the global phase of ``v`` so that its first component of
    largest modulus is real and nonnegative."""
    v = np.asarray(v, dtype=complex)
    mags = np.abs(v)
    if mags.max() == 0:
        return v
    k = int(np.argmax(mags >= mags.max() - atol))
    return v * (np.conj(v[k]) / mags[k])


def fix_phases(V, atol=1e-12):
    """Apply :func:`fix_phase` to every column of ``V``."""
    V = np.asarray(V, dtype=complex)
    if V.size == 0:
        return V
    mags = np.abs(V)
    top = mags.max(axis=0)
    k = np.argmax(mags >= top - atol, axis=0)
    lead = V[k, np.arange(V.shape[1])]
    ph = np.where(top > 0, np.conj(lead) / np.where(top > 0, np.abs(lead), 1), 1)
    return V * ph


def eigh(H, tol=TOL_HERM):
    H = check_hermitian(H, tol)
    try:
        w, V = np.linalg.eigh((H + H.conj().T) / 2)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return Spectrum(w, fix_phases(V))


def matrix_sqrt(P, tol=TOL_HERM, tol_psd=TOL_PSD):
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues in ``[-tol_psd, 0)`` are clipped to zero; anything more
    negative raises :class:`NotPSD`.
    """
    w, V = eigh(P, tol)
    if w.size and w[0] < -tol_psd:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3g} below -{tol_psd:g}")
    w = np.clip(w, 0.0, None)
    B = (V * np.sqrt(w)) @ V.conj().T
    return (B + B.conj().T) / 2


def trace_norm(M):
    M = _square(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.svd(M, compute_uv=False).sum())


def fidelity(rho, sigma):
    """Uhlmann fidelity ``(Tr sqrt(sqrt(sigma) rho sqrt(sigma)))**2``."""
    rho = _square(rho)
    sigma = _square(sigma)
    if rho.shape != sigma.shape:
        raise DimMismatch(f"{rho.shape} vs {sigma.shape}")
    # ||sqrt(rho) sqrt(sigma)||_1 is symmetric and avoids a second sqrtm
    val = trace_norm(matrix_sqrt(rho) @ matrix_sqrt(sigma)) ** 2
    return float(min(max(val, 0.0), 1.0))


def polar_unitary(M):
    """Unitary factor ``U`` of the polar decomposition ``M = U |M|``.

    For singular ``M`` the factor on the null space is whatever the SVD
    routine returns for the zero singular values.
    """
    M = _square(M)
    W, _, Vh = np.linalg.svd(M)
    return W @ Vh


def _det_and_trace_norm(M):
    det = M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]
    mag = np.abs(det)
    # s1 + s2 of a 2x2 matrix, without an SVD
    tn = np.sqrt((M.real ** 2 + M.imag ** 2).sum(axis=(-2, -1)) + 2 * mag)
    return det, mag, tn


def polar_unitaries(M):
    """Polar unitary factor of each matrix in a stack ``M[..., n, n]``.

    The 2x2 case uses ``U = (M + e^{i arg det M} adj(M)^H) / (s1 + s2)``;
    larger sizes go through a batched SVD.
    """
    M = np.asarray(M, dtype=complex)
    if M.shape[-2:] != (2, 2):
        W, _, Vh = np.linalg.svd(M)
        return W @ Vh
    det, mag, tn = _det_and_trace_norm(M)
    singular = not mag.all()
    ph = np.divide(det, mag, out=np.ones_like(det), where=mag > 0) if singular else det / mag
    C = ph[..., None, None] * M.conj()
    U = np.empty_like(M)
    U[..., 0, 0] = C[..., 1, 1]
    U[..., 1, 1] = C[..., 0, 0]
    U[..., 0, 1] = -C[..., 1, 0]
    U[..., 1, 0] = -C[..., 0, 1]
    U += M
    if singular and not tn.all():
        U[tn == 0] = np.eye(2)
        tn = np.where(tn > 0, tn, 1.0)
    U /= tn[..., None, None]
    return U


def trace_norms(M):
    """Trace norm of each matrix in a stack ``M[..., n, n]``."""
    M = np.asarray(M, dtype=complex)
    if M.shape[-2:] != (2, 2):
        return np.linalg.svd(M, compute_uv=False).sum(axis=-1)
    return _det_and_trace_norm(M)[-1]


def as_states(states):
    S = np.asarray(states, dtype=complex)
    if S.ndim == 1:
        S = S[None, :]
    if S.ndim != 2:
        raise DimMismatch(f"states must be a 2-D array (one state per row), got ndim={S.ndim}")
    return S


def gram(states):
    """Gram matrix ``G[i, j] = <psi_i|psi_j>`` of the rows of ``states``."""
    try:
        S = as_states(states)
    except ValueError as exc:  # ragged input
        raise DimMismatch(str(exc)) from exc
    return S.conj() @ S.T


def numerical_rank(states, tol_rank=TOL_RANK):
    S = as_states(states)
    if S.shape[0] == 0:
        return 0
    w = np.linalg.eigvalsh(gram(S))
    if w[-1] <= 0:
        return 0
    return int(np.sum(w > tol_rank * w[-1]))


def linear_independence(states, tol_rank=TOL_RANK):
    """Return ``(independent, rank)`` for a list of vectors.

    Rank counts Gram eigenvalues above ``tol_rank`` times the largest one.
    """
    S = as_states(states)
    rank = numerical_rank(S, tol_rank)
    return rank == S.shape[0], rank


def check_density_matrix(rho, tol=TOL_HERM, tol_psd=TOL_PSD, tol_trace=TOL_TRACE):
    """Validate ``rho`` and return it as a Hermitian complex array."""
    rho = check_hermitian(rho, tol)
    tr = np.trace(rho)
    if abs(tr - 1) > tol_trace:
        raise InvalidDensityMatrix(f"trace is {tr.real:.12g}, expected 1")
    rho = (rho + rho.conj().T) / 2
    w = np.linalg.eigvalsh(rho)
    if w[0] < -tol_psd:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3g} below -{tol_psd:g}")
    return rho


def unitarity_residual(U):
    U = np.asarray(U)
    return float(np.abs(U.conj().T @ U - np.eye(U.shape[1])).max())
