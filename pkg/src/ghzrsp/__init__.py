"""Exact simulation of two-step deterministic remote state preparation over GHZ channels."""
__version__ = "0.1.0"

from .kernels import BACKEND
from .qudit import (
    Angles2,
    Angles4,
    Angles8,
    OutcomeBranch,
    PureState,
    StateError,
    apply_local,
    equal_up_to_global_phase,
    fidelity,
    from_angles2,
    from_angles4,
    from_angles8,
    ghz,
    ghz_from_bell_cnot,
    make_state,
    measure_branches,
)
from .bases import (
    Basis,
    BasisError,
    BasisUnavailable,
    alice_basis_d2,
    alice_basis_d4,
    alice_basis_d8,
    phase_basis,
    xi_basis,
)
from .corrections import (
    NoMonomialCorrection,
    bob_intermediate_unitary,
    charlie_correction,
    derive_monomial_correction,
    table1_correction,
)
from .protocol import (
    ClassicalMessage,
    Enumerate,
    Party,
    ProtocolTrace,
    ProtocolUnavailable,
    Sample,
    comm_cost,
    run_qubit_rsp,
    run_qudit_rsp,
    stage_order_experiment,
)
from .audit import CorrectionReport, audit_tables
