# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels mirroring ``_pykernels`` loop for loop."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, M_PI

cnp.import_array()

BACKEND = "cython"


cdef inline Py_ssize_t _prod(tuple dims, Py_ssize_t lo, Py_ssize_t hi):
    cdef Py_ssize_t p = 1
    cdef Py_ssize_t i
    for i in range(lo, hi):
        p *= <Py_ssize_t>dims[i]
    return p


def apply_local(amps, dims, Py_ssize_t subsystem, u):
    cdef tuple dt = tuple(dims)
    cdef Py_ssize_t left = _prod(dt, 0, subsystem)
    cdef Py_ssize_t d = dt[subsystem]
    cdef Py_ssize_t right = _prod(dt, subsystem + 1, len(dt))
    cdef const double complex[::1] psi = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef const double complex[:, ::1] m = np.ascontiguousarray(u, dtype=np.complex128)
    out_arr = np.zeros(left * d * right, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t l, j, k, r, base
    cdef double complex ujk
    for l in range(left):
        base = l * d * right
        for j in range(d):
            for k in range(d):
                ujk = m[j, k]
                if ujk == 0:
                    continue
                for r in range(right):
                    out[base + j * right + r] += ujk * psi[base + k * right + r]
    return out_arr


def project(amps, dims, Py_ssize_t subsystem, vectors):
    cdef tuple dt = tuple(dims)
    cdef Py_ssize_t left = _prod(dt, 0, subsystem)
    cdef Py_ssize_t d = dt[subsystem]
    cdef Py_ssize_t right = _prod(dt, subsystem + 1, len(dt))
    cdef const double complex[::1] psi = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef const double complex[:, ::1] b = np.ascontiguousarray(vectors, dtype=np.complex128)
    cdef Py_ssize_t nb = b.shape[0]
    out_arr = np.zeros((nb, left * right), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t i, l, k, r
    cdef double complex bc
    for i in range(nb):
        for k in range(d):
            bc = b[i, k].conjugate()
            if bc == 0:
                continue
            for l in range(left):
                for r in range(right):
                    out[i, l * right + r] += bc * psi[l * d * right + k * right + r]
    return out_arr


def monomial_search(v, t, perms, Py_ssize_t n_grid):
    cdef const double complex[::1] vv = np.ascontiguousarray(v, dtype=np.complex128)
    cdef const double complex[::1] tt = np.ascontiguousarray(t, dtype=np.complex128)
    cdef Py_ssize_t d = vv.shape[0]
    cdef const Py_ssize_t[:, ::1] P = np.ascontiguousarray(perms, dtype=np.intp).reshape(-1, d)
    cdef Py_ssize_t npm = P.shape[0]
    grid_arr = np.empty(n_grid, dtype=np.complex128)
    cdef double complex[::1] grid = grid_arr
    cdef Py_ssize_t g
    for g in range(n_grid):
        grid[g] = cos(2.0 * M_PI * g / n_grid) + 1j * sin(2.0 * M_PI * g / n_grid)
    a_arr = np.empty(d, dtype=np.complex128)
    cdef double complex[::1] a = a_arr
    idx_arr = np.zeros(d, dtype=np.intp)
    cdef Py_ssize_t[::1] idx = idx_arr
    best_idx = np.zeros(d, dtype=np.intp)
    cdef Py_ssize_t[::1] bidx = best_idx
    cdef double best = -1.0
    cdef Py_ssize_t best_perm = -1
    cdef Py_ssize_t pi, k, total_pts, n
    cdef double complex s
    cdef double f
    total_pts = 1
    for k in range(d):
        total_pts *= n_grid
    for pi in range(npm):
        for k in range(d):
            a[k] = tt[k].conjugate() * vv[P[pi, k]]
            idx[k] = 0
        for n in range(total_pts):
            s = 0
            for k in range(d):
                s += a[k] * grid[idx[k]]
            f = s.real * s.real + s.imag * s.imag
            if f > best:
                best = f
                best_perm = pi
                for k in range(d):
                    bidx[k] = idx[k]
            # odometer, last index fastest (C order)
            k = d - 1
            while k >= 0:
                idx[k] += 1
                if idx[k] < n_grid:
                    break
                idx[k] = 0
                k -= 1
    return best, best_perm, tuple(int(x) for x in best_idx)
