"""Measurement bases for the two protocol stages.

The θ-stage (magnitude) bases are real orthogonal sets whose first vector is
the target's magnitude pattern. The φ-stage (phase) bases are Fourier rows
with the target phases conjugated onto each component.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .qudit import COMPARE_TOL, NORM_TOL, hyperspherical4

PHASE_DIMS = (2, 4, 8)

# Row j of the d=4 phase basis uses powers i^(r_j k); this matches the
# published ordering (1, i, -1, -i), (1, -i, -1, i), (1, -1, 1, -1).
_PHASE_ROW_EXPONENTS = {
    2: (0, 1),
    4: (0, 1, 3, 2),
    8: tuple(range(8)),
}


class BasisError(ValueError):
    """A candidate basis failed its orthonormality check."""


class BasisUnavailable(BasisError):
    """The θ-stage basis for this dimension could not be constructed."""


@dataclass(frozen=True, eq=False)
class Basis:
    """Ordered orthonormal basis; ``vectors[i]`` is the i-th basis ket."""

    vectors: np.ndarray = field(repr=False)
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        v = np.array(self.vectors, dtype=np.complex128)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise BasisError(f"basis must be a square stack of vectors, got shape {v.shape}")
        dev = gram_deviation(v)
        if dev > COMPARE_TOL:
            raise BasisError(f"Gram matrix deviates from identity by {dev:.3e}")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(v.shape[0])))

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def __getitem__(self, i):
        return self.vectors[i]

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.vectors)


def gram_deviation(vectors) -> float:
    """Max entrywise distance of ``V V^†`` from the identity."""
    v = np.asarray(vectors, dtype=np.complex128)
    return float(np.max(np.abs(v.conj() @ v.T - np.eye(v.shape[0]))))


def alice_basis_d2(theta: float) -> Basis:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return Basis(np.array([[c, s], [s, -c]]), labels=("phi", "phi_perp"))


def alice_basis_d4(g1: float, g2: float, g3: float) -> Basis:
    """Real orthogonal d=4 basis; rows are ``U(g1, g2, g3)|k>``."""
    for g in (g1, g2, g3):
        if not 0.0 <= g <= math.pi / 2:
            raise ValueError(f"gamma={g!r} outside [0, pi/2]")
    a, b, c, e = hyperspherical4(g1, g2, g3)
    rows = np.array([
        [a, b, c, e],
        [-b, a, -e, c],
        [-c, e, a, -b],
        [e, c, -b, -a],
    ])
    return Basis(rows, labels=("phi0", "phi1", "phi2", "phi3"))


@lru_cache(maxsize=None)
def sign_table(name: str) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Load a signed-permutation pattern: ``table[i][m] == (source, sign)``."""
    raw = json.loads(resources.files("ghzrsp").joinpath("data/sign_tables.json").read_text())
    return tuple(
        tuple(zip(row["source"], row["sign"]))
        for row in raw[name]
    )


def signed_pattern_basis(c, table) -> np.ndarray:
    """Rows ``v_i[m] = sign * c[source]`` for a real vector ``c``."""
    c = np.asarray(c, dtype=float)
    return np.array([[s * c[k] for k, s in row] for row in table])


def alice_basis_d8(thetas) -> Basis:
    """Real orthogonal d=8 basis with first vector ``cos(thetas)``.

    Built from the octonion left-multiplication pattern in
    ``data/sign_tables.json``. Raises :class:`BasisUnavailable` if the pattern
    does not yield an orthonormal set for this input.
    """
    c = np.cos(np.asarray(thetas, dtype=float))
    if c.shape != (8,):
        raise ValueError("alice_basis_d8 needs 8 angles")
    if abs(float(c @ c) - 1.0) > NORM_TOL:
        raise ValueError(f"sum of cos(theta_i)^2 is {float(c @ c)!r}, not 1")
    c = c / np.linalg.norm(c)
    try:
        return Basis(signed_pattern_basis(c, sign_table("octonion")),
                     labels=tuple(f"phi{i}" for i in range(8)))
    except BasisError as exc:
        raise BasisUnavailable(f"d=8 theta-stage pattern is not orthonormal: {exc}") from exc


_EIGHTH_ROOTS = (1, (1 + 1j) / math.sqrt(2), 1j, (-1 + 1j) / math.sqrt(2),
                 -1, (-1 - 1j) / math.sqrt(2), -1j, (1 - 1j) / math.sqrt(2))


def _root_of_unity(n: int, d: int) -> complex:
    """``exp(2πi n/d)`` for d dividing 8, exact on the axes."""
    return complex(_EIGHTH_ROOTS[(n * (8 // d)) % 8])


def phase_basis(d: int, phases) -> Basis:
    """Fourier rows carrying conjugated phases.

    Vector j has components ``ω^(r_j k) e^{-i phases[k]} / √d`` with
    ``ω = e^{2πi/d}``; ``r_j`` is the identity ordering except for d=4, where
    rows 2 and 3 are exchanged.
    """
    if d not in PHASE_DIMS:
        raise ValueError(f"phase basis supports d in {PHASE_DIMS}, got {d}")
    phases = np.asarray(phases, dtype=float)
    if phases.shape != (d,):
        raise ValueError(f"need {d} phases, got {phases.shape}")
    if phases[0] != 0.0:
        raise ValueError("phases[0] must be 0")
    conj_phases = np.exp(-1j * phases)
    rows = np.array([
        [_root_of_unity(r * k, d) * conj_phases[k] for k in range(d)]
        for r in _PHASE_ROW_EXPONENTS[d]
    ]) / math.sqrt(d)
    labels = ("eta", "eta_perp") if d == 2 else tuple(f"eta{j}" for j in range(d))
    return Basis(rows, labels=labels)


def xi_basis(phi: float) -> Basis:
    """``(e^{-iφ}|0> ± |1>)``-type basis used after the ``phi_perp`` outcome."""
    w = np.exp(-1j * phi)
    rows = np.array([[w, 1.0], [-w, 1.0]]) / math.sqrt(2)
    return Basis(rows, labels=("xi", "xi_perp"))
