"""Seeded orthonormality suites behind ``ghzrsp check-bases``."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bases
from .bases import BasisError
from .qudit import COMPARE_TOL
from .sampling import random_angles2, random_angles4, random_angles8, rng_for
from .corrections import SIGMA_X


@dataclass(frozen=True)
class SuiteResult:
    name: str
    stage: str  # "theta" or "phi"
    samples: int
    max_deviation: float
    passed: bool
    error: str = ""

    def as_dict(self):
        return {"name": self.name, "stage": self.stage, "samples": self.samples,
                "max_deviation": self.max_deviation, "passed": self.passed, "error": self.error}


def _suite(name, stage, samples, build, extra=None) -> SuiteResult:
    worst = 0.0
    for i in range(samples):
        try:
            b = build(i)
        except BasisError as exc:
            return SuiteResult(name, stage, i + 1, math.inf, False, str(exc))
        worst = max(worst, bases.gram_deviation(b.vectors))
        if extra is not None:
            worst = max(worst, extra(b, i))
    return SuiteResult(name, stage, samples, worst, worst <= COMPARE_TOL)


def _orthogonal_deviation(b, _i):
    v = b.vectors
    return float(max(np.max(np.abs(v.imag)), np.max(np.abs(v.real @ v.real.T - np.eye(len(v))))))


def run_suites(d: int, samples: int, seed: int) -> list[SuiteResult]:
    """Gram checks over ``samples`` seeded parameter draws for every basis of dimension ``d``."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = rng_for(seed)
    if d == 2:
        p2 = [random_angles2(rng) for _ in range(samples)]

        def xi_vs_eta(b, i):
            eta = bases.phase_basis(2, (0.0, p2[i].phi)).vectors
            return float(np.max(np.abs(b.vectors - eta @ SIGMA_X.T)))

        return [
            _suite("alice_basis_d2", "theta", samples, lambda i: bases.alice_basis_d2(p2[i].theta),
                   _orthogonal_deviation),
            _suite("phase_basis(2)", "phi", samples, lambda i: bases.phase_basis(2, (0.0, p2[i].phi))),
            _suite("xi_basis", "phi", samples, lambda i: bases.xi_basis(p2[i].phi), xi_vs_eta),
        ]
    if d == 4:
        p4 = [random_angles4(rng) for _ in range(samples)]
        return [
            _suite("alice_basis_d4", "theta", samples, lambda i: bases.alice_basis_d4(*p4[i].gammas),
                   _orthogonal_deviation),
            _suite("phase_basis(4)", "phi", samples, lambda i: bases.phase_basis(4, p4[i].phases)),
        ]
    if d == 8:
        p8 = [random_angles8(rng) for _ in range(samples)]
        return [
            _suite("alice_basis_d8", "theta", samples, lambda i: bases.alice_basis_d8(p8[i].thetas),
                   _orthogonal_deviation),
            _suite("phase_basis(8)", "phi", samples, lambda i: bases.phase_basis(8, p8[i].phis)),
        ]
    raise ValueError(f"d must be 2, 4 or 8, got {d}")
