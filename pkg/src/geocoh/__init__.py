"""Geometric coherence and minimum-error discrimination of pure states."""
from .coherence import (CoherenceReport, XBlockStructure, bounds, c_l1,
                        closest_incoherent_state, detect_generalized_x,
                        duality_check, geometric_coherence,
                        solver_measurement_space, solver_state_space)
from .discrimination import (DiscriminationResult, SearchConfig,
                             VonNeumannMeasurement, bruteforce_vn_d2,
                             gso_error, gso_measurement, helstrom_two,
                             optimal_vn_search, success_probability)
from .ensembles import (PureEnsemble, QSDState, align_unitary,
                        induced_ensemble, multicopy_qsd_state, qsd_state)
from .errors import *  # noqa: F401,F403
from .linalg import (eigh, fidelity, gram, linear_independence, matrix_sqrt,
                     polar_unitary, trace_norm)
from .recovery import (RecoveryResult, recover_optimal_measurement,
                       verify_recovery)

__version__ = "0.1.0"
