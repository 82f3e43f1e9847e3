"""Dense state vectors for small composite qudit registers.

Subsystem 0 is the most significant digit of the flattened amplitude index,
so ``|abc>`` on dims ``(da, db, dc)`` sits at ``a*db*dc + b*dc + c``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels

NORM_TOL = 1e-9
COMPARE_TOL = 1e-12
UNITARY_TOL = 1e-12
DEGENERATE_PROB = 1e-14

TWO_PI = 2.0 * math.pi


class StateError(ValueError):
    """Invalid amplitudes, dimensions or parameters."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over a register with per-subsystem ``dims``."""

    dims: tuple[int, ...]
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        # dims == () is the trivial register left after measuring every subsystem
        if any(d < 2 for d in dims):
            raise StateError(f"every subsystem dimension must be >= 2, got {dims}")
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != math.prod(dims):
            raise StateError(f"{amps.shape[0]} amplitudes for dims {dims} (need {math.prod(dims)})")
        norm = float(np.linalg.norm(amps))
        if norm == 0.0:
            raise StateError("zero vector is not a state")
        if abs(norm - 1.0) > NORM_TOL:
            raise StateError(f"norm {norm!r} is outside 1 ± {NORM_TOL}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", _frozen(amps / norm))

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def __len__(self):
        return self.dim

    def __repr__(self):
        return f"PureState(dims={self.dims}, amps={np.array2string(self.amps, precision=4)})"


def make_state(dims: Sequence[int], amps) -> PureState:
    """Build a :class:`PureState`, renormalizing amplitudes within 1e-9 of unit norm.

    >>> make_state([2], [1, 0]).amps
    array([1.+0.j, 0.+0.j])
    """
    return PureState(tuple(dims), np.asarray(amps, dtype=np.complex128))


def _normalized(dims, vec) -> PureState:
    vec = np.asarray(vec, dtype=np.complex128)
    return PureState(tuple(dims), vec / np.linalg.norm(vec))


# --- target-state parameterizations ----------------------------------------


@dataclass(frozen=True)
class Angles2:
    """Bloch angles of a qubit: ``theta`` in [0, π], ``phi`` in [0, 2π)."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise StateError(f"theta={self.theta!r} outside [0, pi]")
        if not 0.0 <= self.phi < TWO_PI:
            raise StateError(f"phi={self.phi!r} outside [0, 2pi)")

    def as_dict(self):
        return {"theta": self.theta, "phi": self.phi}


@dataclass(frozen=True)
class Angles4:
    """Hyperspherical magnitudes ``gamma1..3`` in [0, π/2] and phases ``alpha1..3`` in [0, 2π)."""

    gamma1: float
    gamma2: float
    gamma3: float
    alpha1: float
    alpha2: float
    alpha3: float

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "gamma3"):
            g = getattr(self, name)
            if not 0.0 <= g <= math.pi / 2:
                raise StateError(f"{name}={g!r} outside [0, pi/2]")
        for name in ("alpha1", "alpha2", "alpha3"):
            a = getattr(self, name)
            if not 0.0 <= a < TWO_PI:
                raise StateError(f"{name}={a!r} outside [0, 2pi)")

    @property
    def gammas(self) -> tuple[float, float, float]:
        return (self.gamma1, self.gamma2, self.gamma3)

    @property
    def phases(self) -> tuple[float, float, float, float]:
        return (0.0, self.alpha1, self.alpha2, self.alpha3)

    def as_dict(self):
        return {
            "gamma1": self.gamma1, "gamma2": self.gamma2, "gamma3": self.gamma3,
            "alpha1": self.alpha1, "alpha2": self.alpha2, "alpha3": self.alpha3,
        }


@dataclass(frozen=True)
class Angles8:
    """Eight magnitude angles with ``sum(cos(theta_i)**2) == 1`` and eight phases, ``phis[0] == 0``."""

    thetas: tuple[float, ...]
    phis: tuple[float, ...]

    def __post_init__(self):
        thetas = tuple(float(x) for x in self.thetas)
        phis = tuple(float(x) for x in self.phis)
        if len(thetas) != 8 or len(phis) != 8:
            raise StateError("Angles8 needs exactly 8 thetas and 8 phis")
        if phis[0] != 0.0:
            raise StateError(f"phis[0] must be 0, got {phis[0]!r}")
        total = sum(math.cos(t) ** 2 for t in thetas)
        if abs(total - 1.0) > NORM_TOL:
            raise StateError(f"sum of cos(theta_i)^2 is {total!r}, not 1")
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "phis", phis)

    @property
    def magnitudes(self) -> np.ndarray:
        return np.cos(np.asarray(self.thetas))

    def as_dict(self):
        return {"thetas": list(self.thetas), "phis": list(self.phis)}


def from_angles2(a: Angles2) -> PureState:
    return make_state([2], [math.cos(a.theta / 2), math.sin(a.theta / 2) * np.exp(1j * a.phi)])


def hyperspherical4(g1: float, g2: float, g3: float) -> np.ndarray:
    """Real magnitude pattern shared by the d=4 target and the first θ-stage vector."""
    s1, s2, s3 = math.sin(g1), math.sin(g2), math.sin(g3)
    return np.array([
        math.cos(g1),
        s1 * math.cos(g2),
        s1 * s2 * math.cos(g3),
        s1 * s2 * s3,
    ])


def from_angles4(a: Angles4) -> PureState:
    mags = hyperspherical4(*a.gammas)
    return make_state([4], mags * np.exp(1j * np.asarray(a.phases)))


def from_angles8(a: Angles8) -> PureState:
    return make_state([8], a.magnitudes * np.exp(1j * np.asarray(a.phis)))


# --- channels ---------------------------------------------------------------


def ghz(parties: int, d: int) -> PureState:
    """``(1/√d) Σ_k |k...k>`` on ``parties`` qudits of dimension ``d``."""
    if parties < 2 or d < 2:
        raise StateError(f"need parties >= 2 and d >= 2, got ({parties}, {d})")
    amps = np.zeros(d ** parties, dtype=np.complex128)
    # |kk...k> has flat index k * (d^(n-1) + ... + 1)
    stride = sum(d ** p for p in range(parties))
    amps[np.arange(d) * stride] = 1 / math.sqrt(d)
    return make_state([d] * parties, amps)


CNOT = np.array([
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, 0, 1],
    [0, 0, 1, 0],
], dtype=np.complex128)


def bell_with_ancilla() -> PureState:
    """``|0>_1 ⊗ (|00> + |11>)_23 / √2``."""
    return tensor(make_state([2], [1, 0]), ghz(2, 2))


def ghz_from_bell_cnot() -> PureState:
    """Build the 3-qubit GHZ state by a CNOT with particle 2 as control and particle 1 as target."""
    s = bell_with_ancilla()
    # CNOT above is ordered (control, target); rearrange axes so subsystem 1 controls 0.
    psi = s.amps.reshape(2, 2, 2).transpose(1, 0, 2).reshape(4, 2)
    psi = (CNOT @ psi).reshape(2, 2, 2).transpose(1, 0, 2)
    return make_state([2, 2, 2], psi.reshape(-1))


def tensor(a: PureState, b: PureState) -> PureState:
    return make_state(a.dims + b.dims, np.kron(a.amps, b.amps))


# --- operations -------------------------------------------------------------


def is_unitary(u, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) <= tol)


def apply_local(u, subsystem: int, s: PureState) -> PureState:
    """Apply ``u`` to one subsystem of ``s``, identity elsewhere."""
    u = np.asarray(u, dtype=np.complex128)
    if not 0 <= subsystem < len(s.dims):
        raise StateError(f"subsystem {subsystem} out of range for dims {s.dims}")
    d = s.dims[subsystem]
    if u.shape != (d, d):
        raise StateError(f"operator shape {u.shape} does not act on a {d}-level subsystem")
    if not is_unitary(u):
        raise StateError("operator is not unitary within 1e-12")
    return PureState(s.dims, kernels.apply_local(s.amps, s.dims, subsystem, u))


@dataclass(frozen=True)
class OutcomeBranch:
    """One projective-measurement outcome.

    ``collapsed`` is ``None`` when the branch is degenerate (probability below
    1e-14); such branches are listed but never sampled.
    """

    outcome: int
    probability: float
    collapsed: PureState | None

    @property
    def degenerate(self) -> bool:
        return self.collapsed is None


def measure_branches(s: PureState, subsystem: int, basis) -> list[OutcomeBranch]:
    """Enumerate every outcome of measuring ``subsystem`` in ``basis``.

    ``basis`` is a :class:`ghzrsp.bases.Basis` (or anything with ``dim`` and
    ``vectors``); it is re-checked for orthonormality here.
    """
    from .bases import Basis

    if not isinstance(basis, Basis):
        basis = Basis(np.asarray(basis))
    if not 0 <= subsystem < len(s.dims):
        raise StateError(f"subsystem {subsystem} out of range for dims {s.dims}")
    if basis.dim != s.dims[subsystem]:
        raise StateError(f"basis dimension {basis.dim} != subsystem dimension {s.dims[subsystem]}")
    rest = s.dims[:subsystem] + s.dims[subsystem + 1:]
    residuals = kernels.project(s.amps, s.dims, subsystem, basis.vectors)
    branches = []
    for i, r in enumerate(residuals):
        p = float(np.vdot(r, r).real)
        if p < DEGENERATE_PROB:
            branches.append(OutcomeBranch(i, p, None))
        else:
            branches.append(OutcomeBranch(i, p, _normalized(rest, r)))
    return branches


def fidelity(a: PureState, b: PureState) -> float:
    """``|<a|b>|^2``, clipped to [0, 1]."""
    if a.dim != b.dim:
        raise StateError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return float(min(1.0, abs(np.vdot(a.amps, b.amps)) ** 2))


def equal_up_to_global_phase(a: PureState, b: PureState, tol: float = COMPARE_TOL) -> bool:
    return fidelity(a, b) >= 1.0 - tol
