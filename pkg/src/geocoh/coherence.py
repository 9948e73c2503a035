"""Geometric coherence, its closest incoherent state, and upper bounds."""
import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .discrimination import (SearchConfig, VonNeumannMeasurement,
                             complete_basis, gso_error, monotone_ascent,
                             helstrom_two, optimal_vn_search)
from .ensembles import _induced_from_root, induced_ensemble
from .errors import DependentEnsemble, InvalidMeasurement, NoConvergence
from .linalg import (check_density_matrix, fix_phases, linear_independence,
                     matrix_sqrt, polar_unitaries, trace_norms)


log = logging.getLogger(__name__)

TOL_X = 1e-12
TOL_CIS = 1e-6
TOL_DUALITY = 1e-6
TOL_XSOLVER = 1e-6
BOUND_SLACK = 1e-7


@dataclass(frozen=True)
class XBlockStructure:
    """Self-inverse pairing ``i <-> pairing[i]`` carrying all off-diagonal weight."""
    pairing: tuple

    @property
    def blocks(self):
        return [(i, j) for i, j in enumerate(self.pairing) if i < j]

    @property
    def fixed_points(self):
        return [i for i, j in enumerate(self.pairing) if i == j]


@dataclass
class CoherenceReport:
    c_g: float
    cis: np.ndarray
    method_tag: str
    measurement: VonNeumannMeasurement
    bounds: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    @property
    def fidelity(self):
        return 1.0 - self.c_g


class SolverResult(NamedTuple):
    fidelity: float
    weights: np.ndarray
    measurement: VonNeumannMeasurement
    diagnostics: dict


def c_l1(rho):
    """Sum of the moduli of the off-diagonal entries."""
    rho = np.asarray(rho)
    return float(np.abs(rho).sum() - np.abs(np.diag(rho)).sum())


def detect_generalized_x(rho, tol_x=TOL_X):
    """Pairing structure if every row has at most one off-diagonal entry above ``tol_x``."""
    rho = np.asarray(rho)
    d = rho.shape[0]
    mask = np.abs(rho) > tol_x
    np.fill_diagonal(mask, False)
    pairing = list(range(d))
    for i in range(d):
        partners = np.flatnonzero(mask[i])
        if partners.size > 1:
            return None
        if partners.size == 1:
            pairing[i] = int(partners[0])
    if any(pairing[pairing[i]] != i for i in range(d)):
        return None
    return XBlockStructure(tuple(pairing))


def closest_incoherent_state(rho, measurement, _root=None):
    """Diagonal state ``diag(|<f_i|sqrt(rho)|i>|^2) / F`` for an optimal basis."""
    rho = np.asarray(rho, dtype=complex)
    if measurement.dim != rho.shape[0]:
        raise InvalidMeasurement(f"measurement dim {measurement.dim} != state dim {rho.shape[0]}")
    root = matrix_sqrt(rho) if _root is None else _root
    w = np.abs(np.einsum("ij,ij->j", measurement.basis.conj(), root)) ** 2
    total = w.sum()
    if total <= 0:
        raise InvalidMeasurement("measurement has zero overlap with the state")
    return np.diag(w / total).astype(complex)


def _embed_measurement(F_sub, support, d):
    """Place ensemble-indexed outcome vectors on their basis coordinates."""
    F = np.zeros((d, d), dtype=complex)
    k = len(support)
    full = complete_basis(F_sub[:, :k], d)
    for j, i in enumerate(support):
        F[:, i] = full[:, j]
    rest = [i for i in range(d) if i not in support]
    for j, i in enumerate(rest):
        F[:, i] = full[:, k + j]
    return VonNeumannMeasurement(F)


def solver_measurement_space(rho, config=SearchConfig()):
    """``F(rho)`` as the best von Neumann success on the induced ensemble."""
    rho = check_density_matrix(rho)
    root = matrix_sqrt(rho)
    return _measurement_space(rho, root, _induced_from_root(rho, root), config)


def _measurement_space(rho, root, e, config):
    res = optimal_vn_search(e, config)
    m = _embed_measurement(res.measurement.basis, e.support, rho.shape[0])
    w = np.abs(np.einsum("ij,ij->j", m.basis.conj(), root)) ** 2
    return SolverResult(res.success, w / w.sum(), m, res.diagnostics)


def _simplex_map(root):
    def polar(mu):
        return polar_unitaries(root[None, :, :] * np.sqrt(mu)[:, None, :])

    def step(mu):
        c = np.abs(np.einsum("rij,ij->rj", polar(mu).conj(), root)) ** 2
        return c / c.sum(axis=1, keepdims=True)

    def value(mu):
        return trace_norms(root[None, :, :] * np.sqrt(mu)[:, None, :]) ** 2

    def project(mu):
        mu = np.clip(mu.real, 0, None)
        return mu / mu.sum(axis=1, keepdims=True)

    return step, value, project, polar


def solver_state_space(rho, config=SearchConfig()):
    """Maximise ``||sqrt(rho) sqrt(diag(mu))||_1^2`` over the simplex.

    Alternates between the unitary achieving the trace norm for fixed
    ``mu`` and the Cauchy-Schwarz reweighting
    ``mu_i ~ |<f_i|sqrt(rho)|i>|^2``. Starts from ``diag(rho)``, the uniform
    distribution and a few Dirichlet draws.
    """
    rho = check_density_matrix(rho)
    return _state_space(rho, matrix_sqrt(rho), config)


def _state_space(rho, root, config):
    d = rho.shape[0]
    rng = np.random.default_rng([config.seed, 0x5747E])
    starts = [np.real(np.diag(rho)).clip(1e-15), np.full(d, 1.0 / d)]
    starts += list(rng.dirichlet(np.ones(d), size=max(1, config.restarts // 4)))
    mus = np.array(starts)
    mus /= mus.sum(axis=1, keepdims=True)
    step, value, project, polar = _simplex_map(root)
    mus, vals, iters, unconverged, monotone = monotone_ascent(
        step, value, project, mus, config.max_iters, config.tol_opt)
    if unconverged.all():
        raise NoConvergence(f"state-space iteration did not settle within {config.max_iters} cycles")
    vals[unconverged] = -np.inf
    k = int(np.argmax(vals))
    m = VonNeumannMeasurement(fix_phases(polar(mus[k:k + 1])[0]))
    diag = {"starts": len(mus), "best_start": k, "iterations": int(iters[k]), "monotone": monotone}
    return SolverResult(float(min(vals[k], 1.0)), mus[k].copy(), m, diag)


def _block_measurement(rho, structure):
    """Per-block Helstrom measurement of a generalized X-state."""
    d = rho.shape[0]
    F = np.zeros((d, d), dtype=complex)
    for i in structure.fixed_points:
        F[i, i] = 1.0
    for i, j in structure.blocks:
        sub = rho[np.ix_([i, j], [i, j])]
        tau = sub / np.real(np.trace(sub))
        e = induced_ensemble(tau)
        if len(e) == 2:
            f = helstrom_two(e).measurement.basis
        else:
            f = _embed_measurement(e.states.T, e.support, 2).basis
        F[np.ix_([i, j], [i, j])] = f
    return VonNeumannMeasurement(F)


def x_block_fidelity(rho, structure):
    """Sum of per-block two-state Helstrom successes plus unpaired diagonal weight."""
    total = sum(float(np.real(rho[i, i])) for i in structure.fixed_points)
    for i, j in structure.blocks:
        p = float(np.real(rho[i, i] + rho[j, j]))
        total += 0.5 * (p + np.sqrt(max(0.0, p * p - 4 * abs(rho[i, j]) ** 2)))
    return total


def qubit_coherence(rho):
    """Closed form ``(1 - sqrt(1 - 4|rho_12|^2)) / 2``."""
    return 0.5 * (1 - np.sqrt(max(0.0, 1 - 4 * abs(rho[0, 1]) ** 2)))


def bounds(rho):
    """Upper bounds l1..l4 on the geometric coherence.

    ``l4`` is present only when the induced ensemble is linearly independent.
    """
    rho = check_density_matrix(rho)
    root = matrix_sqrt(rho)
    return _bounds(rho, root, _induced_from_root(rho, root))


def _bounds(rho, root, e):
    d = rho.shape[0]
    out = {
        "l1": float(1 - np.real(np.diag(rho)).max()),
        "l2": float(1 - np.sum(np.real(np.diag(root)) ** 2)),
    }
    out["l3"] = gso_error(e)
    independent, _ = linear_independence(e.states)
    if independent and d > 1:
        out["l4"] = c_l1(rho) / (d - 1)
    return out


def geometric_coherence(rho, config=SearchConfig(), method="auto"):
    """Geometric coherence ``1 - max_sigma F(rho, sigma)`` over diagonal ``sigma``.

    ``method="auto"`` uses the qubit formula for ``d == 2``, the per-block
    formula for generalized X-states, and otherwise the larger of the two
    numerical solvers. ``method="numerical"`` forces the solvers.
    """
    if method not in ("auto", "numerical"):
        raise ValueError(f"unknown method {method!r}")
    rho = check_density_matrix(rho)
    d = rho.shape[0]
    diag = {}
    root = matrix_sqrt(rho)
    e = _induced_from_root(rho, root)
    structure = detect_generalized_x(rho) if method == "auto" else None
    if method == "auto" and d == 1:
        tag, fid, m = "x_block", 1.0, VonNeumannMeasurement(np.eye(1))
    elif structure is not None:
        tag = "qubit_closed_form" if d == 2 else "x_block"
        fid = 1 - qubit_coherence(rho) if d == 2 else x_block_fidelity(rho, structure)
        m = _block_measurement(rho, structure)
        diag["pairing"] = list(structure.pairing)
    else:
        tag = "numerical"
        ms = _measurement_space(rho, root, e, config)
        ss = _state_space(rho, root, config)
        gap = abs(ms.fidelity - ss.fidelity)
        diag.update(measurement_space=ms.fidelity, state_space=ss.fidelity, solver_gap=gap,
                    search=ms.diagnostics, alternation=ss.diagnostics)
        if gap > TOL_XSOLVER:
            msg = f"solvers disagree by {gap:.3g}"
            diag.setdefault("warnings", []).append(msg)
            log.warning(msg)
        better = ms if ms.fidelity >= ss.fidelity else ss
        fid, m = better.fidelity, better.measurement
    fid = min(max(fid, 0.0), 1.0)
    c_g = 1.0 - fid
    cis = closest_incoherent_state(rho, m, root)
    b = _bounds(rho, root, e)
    diag["bounds_ok"] = bool(c_g <= min(b.values()) + BOUND_SLACK)
    return CoherenceReport(c_g, cis, tag, m, b, diag)


def duality_check(rho, config=SearchConfig()):
    """``c_g + d_q`` where ``d_q`` is the optimal success on the induced ensemble."""
    rho = check_density_matrix(rho)
    e = induced_ensemble(rho)
    independent, rank = linear_independence(e.states)
    if not independent:
        raise DependentEnsemble(f"induced ensemble has rank {rank} < {len(e)}")
    c_g = geometric_coherence(rho, config).c_g
    d_q = optimal_vn_search(e, config).success
    return {"c_g": c_g, "d_q": d_q, "sum": c_g + d_q}
