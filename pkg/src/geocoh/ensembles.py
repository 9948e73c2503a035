"""Pure-state ensembles and the density matrices built from them."""
from dataclasses import dataclass, field

import numpy as np

from .errors import DimMismatch, GramMismatch, InvalidEnsemble
from .linalg import (TOL_NORM, TOL_TRACE, as_states, check_density_matrix,
                     gram, matrix_sqrt, polar_unitary)

TOL_ZERO_PRIOR = 1e-12
TOL_ALIGN = 1e-7


@dataclass(frozen=True)
class PureEnsemble:
    """States (rows of ``states``) sent with probabilities ``priors``.

    ``support`` records, for an ensemble induced by a density matrix, which
    basis index each state came from.
    """
    priors: np.ndarray
    states: np.ndarray
    support: tuple = field(default=None, compare=False)

    def __post_init__(self):
        priors = np.asarray(self.priors, dtype=float).reshape(-1)
        try:
            states = as_states(self.states)
        except ValueError as exc:
            raise InvalidEnsemble(str(exc)) from exc
        if priors.shape[0] != states.shape[0]:
            raise InvalidEnsemble(f"{priors.shape[0]} priors for {states.shape[0]} states")
        if priors.size == 0:
            raise InvalidEnsemble("empty ensemble")
        if not (np.all(np.isfinite(priors)) and np.all(np.isfinite(states))):
            raise InvalidEnsemble("non-finite priors or amplitudes")
        if np.any(priors < 0):
            raise InvalidEnsemble(f"negative prior at index {int(np.argmin(priors))}")
        if abs(priors.sum() - 1) > TOL_TRACE:
            raise InvalidEnsemble(f"priors sum to {priors.sum():.12g}")
        norms = np.linalg.norm(states, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1) > TOL_NORM)
        if bad.size:
            raise InvalidEnsemble(f"state {bad[0]} has norm {norms[bad[0]]:.12g}")
        support = tuple(range(len(priors))) if self.support is None else tuple(self.support)
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "support", support)

    def __len__(self):
        return self.priors.shape[0]

    @property
    def dim(self):
        return self.states.shape[1]

    @property
    def weighted(self):
        """Matrix with columns ``sqrt(eta_i) psi_i``."""
        return (self.states * np.sqrt(self.priors)[:, None]).T


@dataclass(frozen=True)
class QSDState:
    matrix: np.ndarray
    source_gram: np.ndarray
    source_priors: np.ndarray


def _gram_state(priors, G):
    s = np.sqrt(priors)
    rho = s[:, None] * G * s[None, :]
    return (rho + rho.conj().T) / 2


def qsd_state(e):
    """Density matrix with entries ``sqrt(eta_i eta_j) <psi_i|psi_j>``."""
    G = gram(e.states)
    return QSDState(_gram_state(e.priors, G), G, e.priors.copy())


def multicopy_qsd_state(e, n):
    """QSD-state of the ``n``-copy ensemble ``{psi_i^(x n), eta_i}``.

    Uses the entrywise ``n``-th power of the Gram matrix, so no tensor
    products are formed.
    """
    if int(n) != n or n < 1:
        raise InvalidEnsemble(f"number of copies must be a positive integer, got {n}")
    G = gram(e.states) ** int(n)
    return QSDState(_gram_state(e.priors, G), G, e.priors.copy())


def induced_ensemble(rho, tol_zero_prior=TOL_ZERO_PRIOR):
    """Ensemble ``{sqrt(rho) e_i / sqrt(rho_ii), rho_ii}`` attached to ``rho``.

    Indices with ``rho_ii <= tol_zero_prior`` are dropped; the remaining
    priors are renormalised only by the dropped (negligible) mass.
    """
    rho = check_density_matrix(rho)
    return _induced_from_root(rho, matrix_sqrt(rho), tol_zero_prior)


def _induced_from_root(rho, root, tol_zero_prior=TOL_ZERO_PRIOR):
    eta = np.real(np.diag(rho)).copy()
    keep = np.flatnonzero(eta > tol_zero_prior)
    cols = root[:, keep] / np.sqrt(eta[keep])
    # renormalise against rounding in sqrt(rho)
    cols = cols / np.linalg.norm(cols, axis=0)
    priors = eta[keep] / eta[keep].sum()
    return PureEnsemble(priors, cols.T, support=tuple(int(i) for i in keep))


def align_unitary(a, b, conjugate=False, tol=TOL_ALIGN):
    """Unitary ``U`` with ``U b_i = a_i`` for two families of equal Gram matrix.

    With ``conjugate=True`` the family ``b`` is entrywise conjugated first,
    which covers the case ``<a_i|a_j> = conj(<b_i|b_j>)``.
    """
    A = as_states(a)
    B = as_states(b)
    if conjugate:
        B = B.conj()
    if A.shape != B.shape:
        raise DimMismatch(f"{A.shape} vs {B.shape}")
    mismatch = np.abs(gram(A) - gram(B)).max()
    if mismatch > tol:
        raise GramMismatch(f"Gram matrices differ by {mismatch:.3g}")
    # A^T = U B^T; the polar factor of A^T B^* is U on span(b)
    U = polar_unitary(A.T @ B.conj())
    resid = np.linalg.norm(A.T - U @ B.T, axis=0).max()
    if resid > tol:
        raise GramMismatch(f"alignment residual {resid:.3g}")
    return U
