"""Correction unitaries: the published tables and a constructive monomial oracle."""
from __future__ import annotations

import math

import numpy as np

from .bases import sign_table
from .qudit import PureState

MAGNITUDE_TOL = 1e-10

I2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

# (a_out, b_out) -> (name, matrix). Row 3 is σ_z·σ_x: σ_x acts first.
_TABLE1 = {
    (0, 0): ("I", I2),
    (0, 1): ("sigma_z", SIGMA_Z),
    (1, 0): ("sigma_z*sigma_x", SIGMA_Z @ SIGMA_X),
    (1, 1): ("sigma_x", SIGMA_X),
}

_U1 = np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=np.complex128)
_U2 = np.array([[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]], dtype=np.complex128)
_U3 = np.array([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=np.complex128)
_BOB4 = (np.eye(4, dtype=np.complex128), _U1, _U2, _U3)


def _block_anti(top, bottom):
    z = np.zeros((2, 2), dtype=np.complex128)
    return np.block([[z, np.asarray(top, dtype=np.complex128)],
                     [np.asarray(bottom, dtype=np.complex128), z]])


def _charlie_table():
    i = 1j
    tab = {
        (0, 0): np.eye(4),
        (0, 1): np.diag([1, i, -1, -i]),
        (0, 2): np.diag([1, -i, -1, i]),
        (0, 3): np.diag([1, -1, 1, -1]),
        (1, 0): [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
        (1, 1): [[0, 1, 0, 0], [i, 0, 0, 0], [0, 0, 0, -1], [0, 0, -i, 0]],
        (1, 2): [[0, 1, 0, 0], [-i, 0, 0, 0], [0, 0, 0, -1], [0, 0, i, 0]],
        (1, 3): [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
    }
    blocks = {
        (2, 0): (np.diag([1, 1]), +1),
        (2, 1): (np.diag([1, i]), -1),
        (2, 2): (np.diag([1, -i]), -1),
        (2, 3): (np.diag([1, -1]), +1),
        (3, 0): (np.array([[0, 1], [1, 0]]), +1),
        (3, 1): (np.array([[0, 1], [i, 0]]), -1),
        (3, 2): (np.array([[0, 1], [-i, 0]]), -1),
        (3, 3): (np.array([[0, 1], [-1, 0]]), +1),
    }
    for key, (a, sign) in blocks.items():
        tab[key] = _block_anti(a, sign * a)
    return {k: np.asarray(v, dtype=np.complex128) for k, v in tab.items()}


_CHARLIE4 = _charlie_table()
for _m in (*_BOB4, *_CHARLIE4.values(), *(m for _, m in _TABLE1.values())):
    _m.setflags(write=False)


class NoMonomialCorrection(ValueError):
    """No phased permutation maps the collapsed state onto the target."""


def _check_index(name, value, n):
    if not 0 <= value < n:
        raise IndexError(f"{name}={value} out of range 0..{n - 1}")


def table1_correction(a_out: int, b_out: int) -> np.ndarray:
    """Receiver's Pauli correction for the qubit protocol outcome pair."""
    _check_index("a_out", a_out, 2)
    _check_index("b_out", b_out, 2)
    return _TABLE1[a_out, b_out][1]


def table1_name(a_out: int, b_out: int) -> str:
    _check_index("a_out", a_out, 2)
    _check_index("b_out", b_out, 2)
    return _TABLE1[a_out, b_out][0]


def bob_intermediate_unitary(a_out: int) -> np.ndarray:
    """Signed permutation Bob applies to his d=4 particle after Alice's outcome."""
    _check_index("a_out", a_out, 4)
    return _BOB4[a_out]


def pattern_intermediate_unitary(table_name: str, a_out: int) -> np.ndarray:
    """Intermediate unitary derived from a signed-permutation pattern.

    If θ-stage vector ``a_out`` has ``v[m] = sign * c[source]``, the returned
    matrix sends ``|m> -> sign |source>`` so the receiver-side register holds
    ``Σ_m c[source(m)] |source(m)>|m>``. For the quaternion pattern this gives
    the d=4 matrices up to the sign of the last one.
    """
    table = sign_table(table_name)
    _check_index("a_out", a_out, len(table))
    d = len(table)
    u = np.zeros((d, d), dtype=np.complex128)
    for m, (src, sign) in enumerate(table[a_out]):
        u[src, m] = sign
    return u


def charlie_correction(a_out: int, b_out: int) -> np.ndarray:
    """Receiver correction listed for the d=4 protocol outcome pair."""
    _check_index("a_out", a_out, 4)
    _check_index("b_out", b_out, 4)
    return _CHARLIE4[a_out, b_out]


def is_monomial(m, tol: float = 1e-12) -> bool:
    """Exactly one unit-modulus entry per row and column, zeros elsewhere."""
    a = np.abs(np.asarray(m))
    nonzero = a > tol
    if not (np.all(nonzero.sum(axis=0) == 1) and np.all(nonzero.sum(axis=1) == 1)):
        return False
    return bool(np.all(np.abs(a[nonzero] - 1.0) <= tol))


def _match_magnitudes(src: np.ndarray, dst: np.ndarray, tol: float):
    """``perm[k]`` = index of ``src`` feeding ``dst[k]``; lowest free index wins ties."""
    d = len(src)
    used = [False] * d
    perm = []
    for k in range(d):
        for m in range(d):
            if not used[m] and abs(src[m] - dst[k]) <= tol:
                used[m] = True
                perm.append(m)
                break
        else:
            break
    if len(perm) == d:
        return perm
    # Greedy can strand a slot when tolerance windows overlap; sorted pairing cannot.
    s_order = np.argsort(-src, kind="stable")
    d_order = np.argsort(-dst, kind="stable")
    if np.all(np.abs(src[s_order] - dst[d_order]) <= tol):
        perm = [0] * d
        for si, di in zip(s_order, d_order):
            perm[int(di)] = int(si)
        return perm
    return None


def derive_monomial_correction(collapsed: PureState, target: PureState) -> np.ndarray:
    """Phased permutation ``M`` with ``M @ collapsed == target``.

    Raises :class:`NoMonomialCorrection` if the amplitude magnitudes of the two
    states are not the same multiset (within 1e-10).
    """
    if collapsed.dim != target.dim:
        raise ValueError(f"dimension mismatch: {collapsed.dim} vs {target.dim}")
    c, t = collapsed.amps, target.amps
    perm = _match_magnitudes(np.abs(c), np.abs(t), MAGNITUDE_TOL)
    if perm is None:
        raise NoMonomialCorrection(
            f"magnitudes {np.round(np.abs(c), 12)} cannot be permuted onto {np.round(np.abs(t), 12)}"
        )
    d = c.shape[0]
    m = np.zeros((d, d), dtype=np.complex128)
    for k, src in enumerate(perm):
        if abs(t[k]) > MAGNITUDE_TOL and abs(c[src]) > MAGNITUDE_TOL:
            r = t[k] / c[src]
            m[k, src] = r / abs(r)
        else:
            m[k, src] = 1.0
    return m


def same_up_to_phase(a, b, tol: float = 1e-12) -> bool:
    """Matrix equality up to a global phase factor."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        return False
    idx = np.unravel_index(int(np.argmax(np.abs(b))), b.shape)
    if abs(b[idx]) == 0 or abs(a[idx]) == 0:
        return bool(np.max(np.abs(a - b)) <= tol)
    phase = a[idx] / b[idx]
    phase /= abs(phase)
    return bool(np.max(np.abs(a - phase * b)) <= tol)


def fixed_set_qubit():
    """The four parameter-independent qubit corrections, by name."""
    return {name: m for name, m in _TABLE1.values()}


def root_of_unity_order(m, max_order: int = 8, tol: float = 1e-9) -> int | None:
    """Smallest ``n <= max_order`` such that every nonzero entry is an n-th root of unity."""
    vals = np.asarray(m)[np.abs(m) > 0.5]
    for n in range(1, max_order + 1):
        k = np.angle(vals) * n / (2 * math.pi)
        if np.all(np.abs(k - np.round(k)) <= tol):
            return n
    return None


_CHARLIE_NAMES = {
    (0, 0): "I",
    (0, 1): "diag(1,i,-1,-i)",
    (0, 2): "diag(1,-i,-1,i)",
    (0, 3): "diag(1,-1,1,-1)",
    **{(1, b): f"U{b}(C)" for b in range(4)},
    **{(a, b): f"[[0,A{n}],[{'' if b in (0, 3) else '-'}A{n},0]]"
       for a in (2, 3) for b in range(4) for n in [4 * (a - 2) + b + 1]},
}


def charlie_name(a_out: int, b_out: int) -> str:
    _check_index("a_out", a_out, 4)
    _check_index("b_out", b_out, 4)
    return _CHARLIE_NAMES[a_out, b_out]
