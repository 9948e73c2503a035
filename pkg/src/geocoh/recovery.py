"""Optimal measurement for independent pure states via their QSD-state.

The route: build the QSD-state, take its induced ensemble (same Gram
matrix as the input), find the unitary carrying the induced states onto the
inputs, solve the coherence problem for the QSD-state, and rotate its
optimal basis back.
"""
from dataclasses import dataclass, field

import numpy as np

from .coherence import geometric_coherence, solver_measurement_space, solver_state_space
from .discrimination import (SearchConfig, VonNeumannMeasurement,
                             assignment_probabilities, complete_basis,
                             success_probability)
from .ensembles import (TOL_ZERO_PRIOR, QSDState, align_unitary,
                        induced_ensemble, qsd_state)
from .errors import DependentEnsemble, GeocohError, InvalidEnsemble
from .linalg import fix_phases, gram, linear_independence, matrix_sqrt

TOL_RECOVERY = 1e-6


@dataclass
class RecoveryResult:
    measurement: VonNeumannMeasurement
    success: float
    qsd: QSDState
    alignment: np.ndarray
    certificate: np.ndarray   # |<f_i|psi_i>|^2 per state
    diagnostics: dict = field(default_factory=dict)


def _pad(states, dim):
    if states.shape[1] == dim:
        return states
    return np.hstack([states, np.zeros((states.shape[0], dim - states.shape[1]))])


def recover_optimal_measurement(e, config=SearchConfig()):
    """Optimal von Neumann measurement for a linearly independent ensemble."""
    independent, rank = linear_independence(e.states)
    if not independent:
        raise DependentEnsemble(f"ensemble of {len(e)} states has rank {rank}")
    if np.any(e.priors <= TOL_ZERO_PRIOR):
        raise InvalidEnsemble("every prior must be positive")
    d, k = e.dim, len(e)

    # (1) QSD-state and its induced ensemble, living in C^k
    qsd = qsd_state(e)
    induced = induced_ensemble(qsd.matrix)
    gram_gap = float(np.abs(gram(induced.states) - gram(e.states)).max())

    # (2) unitary with U psi'_i = psi_i; induced states are padded into C^d
    U = align_unitary(e.states, _pad(induced.states, d))

    # (3) optimal basis for the induced ensemble, cross-checked against the
    # simplex weights of the closest incoherent state
    ms = solver_measurement_space(qsd.matrix, config)
    ss = solver_state_space(qsd.matrix, config)
    root = matrix_sqrt(qsd.matrix)
    mu = np.abs(np.einsum("ij,ij->j", ms.measurement.basis.conj(), root)) ** 2 / ms.fidelity
    weight_gap = float(np.abs(mu - ss.weights).max())

    # (4) rotate back
    F_prime = complete_basis(_pad(ms.measurement.basis.T, d).T, d) if d > k else ms.measurement.basis
    F = fix_phases(U @ F_prime)
    m = VonNeumannMeasurement(F)
    success = success_probability(e, m)
    diag = {"gram_gap": gram_gap, "weight_gap": weight_gap,
            "weights_consistent": weight_gap <= TOL_RECOVERY,
            "qsd_fidelity": ms.fidelity, "search": ms.diagnostics}
    return RecoveryResult(m, success, qsd, U, assignment_probabilities(e, m), diag)


def verify_recovery(e, r=None, config=SearchConfig()):
    """Independent re-check of a recovery result.

    Returns ``{"passed": bool, "checks": [...]}``; each check carries a name,
    a verdict and a residual. With ``r=None`` the recovery is run first and
    any failure (e.g. a dependent ensemble) is reported rather than raised.
    """
    checks = []

    def add(name, residual, tol):
        checks.append({"name": name, "passed": bool(residual <= tol), "residual": float(residual)})

    independent, rank = linear_independence(e.states)
    if not independent:
        return {"passed": False, "error": "DependentEnsemble",
                "checks": [{"name": "independence", "passed": False, "residual": float(len(e) - rank)}]}
    if r is None:
        try:
            r = recover_optimal_measurement(e, config)
        except GeocohError as exc:
            return {"passed": False, "error": type(exc).__name__, "checks": []}
    F = r.measurement.basis
    add("orthonormality", np.abs(F.conj().T @ F - np.eye(F.shape[0])).max(), 1e-9)
    recomputed = success_probability(e, r.measurement)
    add("success", abs(recomputed - r.success), 1e-9)
    c_g = geometric_coherence(r.qsd.matrix, config).c_g
    add("error_equals_coherence", abs((1 - recomputed) - c_g), TOL_RECOVERY)
    add("gram_preserved", r.diagnostics.get("gram_gap", 0.0), 1e-8)
    return {"passed": all(c["passed"] for c in checks), "checks": checks,
            "success": recomputed, "qsd_coherence": c_g}
