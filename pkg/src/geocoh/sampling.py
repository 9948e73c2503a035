"""Seeded random states, ensembles and unitaries for tests and sweeps."""
import numpy as np

from .discrimination import haar_unitaries
from .ensembles import PureEnsemble


def rand_unitary(rng, d):
    return haar_unitaries(rng, 1, d)[0]


def rand_states(rng, k, d):
    S = rng.normal(size=(k, d)) + 1j * rng.normal(size=(k, d))
    return S / np.linalg.norm(S, axis=1, keepdims=True)


def rand_density_matrix(rng, d, rank=None):
    """Ginibre-distributed density matrix (full rank unless ``rank`` is given)."""
    r = d if rank is None else rank
    G = rng.normal(size=(d, r)) + 1j * rng.normal(size=(d, r))
    rho = G @ G.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.real(np.trace(rho))


def rand_ensemble(rng, k, d, priors=None):
    if priors is None:
        priors = rng.dirichlet(np.ones(k))
    return PureEnsemble(priors, rand_states(rng, k, d))


def rand_generalized_x(rng, d):
    """Random state whose off-diagonal support is a random perfect pairing
    (one fixed point when ``d`` is odd)."""
    perm = rng.permutation(d)
    weights = rng.dirichlet(np.ones((d + 1) // 2))
    rho = np.zeros((d, d), dtype=complex)
    for b in range(d // 2):
        i, j = perm[2 * b], perm[2 * b + 1]
        blk = rand_density_matrix(rng, 2) * weights[b]
        rho[np.ix_([i, j], [i, j])] = blk
    if d % 2:
        rho[perm[-1], perm[-1]] = weights[-1]
    return rho
