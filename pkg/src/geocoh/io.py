"""Matrix and ensemble file formats (JSON documents).

MatrixFile::

    {"dim": 2, "re": [[0.5, 0.5], [0.5, 0.5]], "im": [[0, 0], [0, 0]]}

EnsembleFile::

    {"priors": [0.5, 0.5],
     "states": [{"re": [1, 0], "im": [0, 0]}, {"re": [0, 1], "im": [0, 0]}]}

Floats are written with Python's shortest round-trip representation, so a
written file parses back to the identical doubles.
"""
import json

import numpy as np

from .ensembles import PureEnsemble
from .linalg import TOL_HERM, TOL_PSD, check_density_matrix


class ParseError(ValueError):
    pass


def _real_array(doc, key, shape, where):
    if key not in doc:
        raise ParseError(f"{where}: missing key {key!r}")
    try:
        arr = np.array(doc[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: {key!r} is not a numeric array") from exc
    if arr.shape != shape:
        raise ParseError(f"{where}: {key!r} has shape {arr.shape}, expected {shape}")
    bad = np.argwhere(~np.isfinite(arr))
    if bad.size:
        raise ParseError(f"{where}: non-finite {key!r} entry at index {tuple(int(x) for x in bad[0])}")
    return arr


def matrix_from_doc(doc, tol=TOL_HERM):
    """Parse and validate a MatrixFile document into a density matrix.

    Inputs within ``tol`` of Hermitian with trace 1 are accepted and then
    symmetrised and renormalised.
    """
    if not isinstance(doc, dict):
        raise ParseError("matrix document must be a JSON object")
    try:
        d = int(doc["dim"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("matrix document needs an integer 'dim'") from exc
    if d < 1:
        raise ParseError(f"dim must be positive, got {d}")
    M = _real_array(doc, "re", (d, d), "matrix") + 1j * _real_array(doc, "im", (d, d), "matrix")
    rho = check_density_matrix(M, tol=tol, tol_trace=tol, tol_psd=max(TOL_PSD, tol))
    return rho / np.real(np.trace(rho))


def ensemble_from_doc(doc, tol=TOL_HERM):
    if not isinstance(doc, dict):
        raise ParseError("ensemble document must be a JSON object")
    if "priors" not in doc or "states" not in doc:
        raise ParseError("ensemble document needs 'priors' and 'states'")
    states = doc["states"]
    if not isinstance(states, list) or not states:
        raise ParseError("'states' must be a non-empty list")
    n = len(states)
    priors = _real_array(doc, "priors", (n,), "ensemble")
    first = states[0].get("re") if isinstance(states[0], dict) else None
    if not isinstance(first, list):
        raise ParseError("state 0: needs 're' and 'im' arrays")
    d = len(first)
    S = np.zeros((n, d), dtype=complex)
    for i, s in enumerate(states):
        if not isinstance(s, dict):
            raise ParseError(f"state {i}: expected an object with 're' and 'im'")
        S[i] = _real_array(s, "re", (d,), f"state {i}") + 1j * _real_array(s, "im", (d,), f"state {i}")
    if np.any(priors < -tol):
        raise ParseError(f"prior {int(np.argmin(priors))} is negative")
    if abs(priors.sum() - 1) > tol:
        raise ParseError(f"priors sum to {priors.sum():.17g}")
    norms = np.linalg.norm(S, axis=1)
    for i, nrm in enumerate(norms):
        if abs(nrm - 1) > tol:
            raise ParseError(f"state {i} has norm {nrm:.17g}")
    priors = priors.clip(0)
    return PureEnsemble(priors / priors.sum(), S / norms[:, None])


def matrix_to_doc(M):
    M = np.asarray(M, dtype=complex)
    return {"dim": int(M.shape[0]), "re": M.real.tolist(), "im": M.imag.tolist()}


def vectors_to_doc(V):
    """Columns of ``V`` as a list of {re, im} objects."""
    V = np.asarray(V, dtype=complex)
    return [{"re": V[:, k].real.tolist(), "im": V[:, k].imag.tolist()} for k in range(V.shape[1])]


def ensemble_to_doc(e):
    return {"priors": e.priors.tolist(), "states": vectors_to_doc(e.states.T)}


def jsonable(obj):
    """Convert numpy scalars/arrays inside ``obj`` to plain Python."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return {"re": obj.real.tolist(), "im": obj.imag.tolist()}
        return obj.tolist()
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc


def dump_json(doc, path=None):
    text = json.dumps(jsonable(doc), indent=2)
    if path is None:
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")
