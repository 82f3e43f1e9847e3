"""Reference kernels written against numpy.

These define the semantics that ``_ckernels`` must reproduce. All arrays are
complex128; a state of shape ``dims`` is flattened with subsystem 0 as the most
significant digit.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def _split(dims, subsystem):
    left = int(np.prod(dims[:subsystem], dtype=np.int64))
    right = int(np.prod(dims[subsystem + 1:], dtype=np.int64))
    return left, int(dims[subsystem]), right


def apply_local(amps, dims, subsystem, u):
    """Return ``(I ⊗ u ⊗ I) @ amps`` with ``u`` acting on ``subsystem``."""
    left, d, right = _split(dims, subsystem)
    psi = np.asarray(amps, dtype=np.complex128).reshape(left, d, right)
    out = np.einsum("jk,lkr->ljr", np.asarray(u, dtype=np.complex128), psi)
    return out.reshape(-1)


def project(amps, dims, subsystem, vectors):
    """Unnormalized residuals ``<b_i|psi>`` for every basis row ``b_i``.

    Returns an array of shape ``(len(vectors), prod(other dims))``.
    """
    left, d, right = _split(dims, subsystem)
    psi = np.asarray(amps, dtype=np.complex128).reshape(left, d, right)
    bra = np.conj(np.asarray(vectors, dtype=np.complex128))
    out = np.einsum("ik,lkr->ilr", bra, psi)
    return out.reshape(bra.shape[0], left * right)


def monomial_search(v, t, perms, n_grid):
    """Exhaustive search over phased permutations ``M[k, p[k]] = exp(2πi j_k / n)``.

    Maximizes ``|<t|M v>|^2``. Returns ``(best_fidelity, perm_index,
    phase_indices)``; ties resolve to the first permutation and the first
    grid point in C order.
    """
    v = np.asarray(v, dtype=np.complex128)
    t = np.asarray(t, dtype=np.complex128)
    d = v.shape[0]
    grid = np.exp(2j * np.pi * np.arange(n_grid) / n_grid)
    best = (-1.0, -1, ())
    for pi, perm in enumerate(perms):
        a = np.conj(t) * v[np.asarray(perm)]
        total = np.zeros((n_grid,) * d, dtype=np.complex128)
        for k in range(d):
            shape = [1] * d
            shape[k] = n_grid
            total = total + (a[k] * grid).reshape(shape)
        fid = np.abs(total) ** 2
        flat = int(np.argmax(fid))
        if fid.flat[flat] > best[0]:
            best = (float(fid.flat[flat]), pi, tuple(int(x) for x in np.unravel_index(flat, fid.shape)))
    return best
