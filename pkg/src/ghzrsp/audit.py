"""Cross-check the published correction tables against the monomial oracle."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import corrections
from .protocol import Enumerate, run_qubit_rsp, run_qudit_rsp
from .qudit import COMPARE_TOL, apply_local, fidelity
from .sampling import random_angles2, random_angles4, rng_for

PROTOCOLS = ("qubit", "d4")


@dataclass
class PairAudit:
    outcomes: tuple[int, int]
    listed_name: str
    listed_matrix: np.ndarray = field(repr=False)
    oracle_matrix: np.ndarray | None = field(default=None, repr=False)
    oracle_constant: bool = True
    agrees: bool = True
    max_fidelity_deficit: float = 0.0
    oracle_max_deficit: float = 0.0
    checked: int = 0


@dataclass(frozen=True)
class Discrepancy:
    outcomes: tuple[int, int]
    parameters: dict
    fidelity: float


@dataclass
class CorrectionReport:
    protocol: str
    samples: int
    seed: int
    pairs: list[PairAudit]
    discrepancies: list[Discrepancy]

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def pair(self, a_out: int, b_out: int) -> PairAudit:
        return next(p for p in self.pairs if p.outcomes == (a_out, b_out))


def _listed(protocol):
    if protocol == "qubit":
        return 2, corrections.table1_name, corrections.table1_correction, random_angles2, run_qubit_rsp
    return 4, corrections.charlie_name, corrections.charlie_correction, random_angles4, \
        lambda p, mode: run_qudit_rsp(4, p, mode)


def audit_tables(protocol: str, samples: int, seed: int) -> CorrectionReport:
    """Apply every listed correction to its branch over ``samples`` random parameter sets.

    A pair disagrees when the listed matrix leaves fidelity below 1 - 1e-12 for
    some sample; each such case is recorded as a :class:`Discrepancy`.
    """
    if protocol not in PROTOCOLS:
        raise ValueError(f"audit supports {PROTOCOLS}, got {protocol!r}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    d, name_of, matrix_of, draw, run = _listed(protocol)
    pairs = {
        (a, b): PairAudit((a, b), name_of(a, b), matrix_of(a, b))
        for a in range(d) for b in range(d)
    }
    discrepancies = []
    rng = rng_for(seed)
    for _ in range(samples):
        params = draw(rng)
        for trace in run(params, Enumerate()):
            entry = pairs[trace.outcomes]
            f_listed = fidelity(apply_local(entry.listed_matrix, 0, trace.collapsed), trace.target)
            oracle = corrections.derive_monomial_correction(trace.collapsed, trace.target)
            f_oracle = fidelity(apply_local(oracle, 0, trace.collapsed), trace.target)
            if entry.oracle_matrix is None:
                entry.oracle_matrix = oracle
            elif not corrections.same_up_to_phase(oracle, entry.oracle_matrix):
                entry.oracle_constant = False
            entry.checked += 1
            entry.max_fidelity_deficit = max(entry.max_fidelity_deficit, 1.0 - f_listed)
            entry.oracle_max_deficit = max(entry.oracle_max_deficit, 1.0 - f_oracle)
            if f_listed < 1.0 - COMPARE_TOL:
                entry.agrees = False
                discrepancies.append(Discrepancy(trace.outcomes, trace.parameters, f_listed))
    return CorrectionReport(protocol, samples, seed, list(pairs.values()), discrepancies)
