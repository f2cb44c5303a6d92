# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hit-and-run kernel.

Works in subspace coordinates on ``A y <= b``.  Directions are ``T g`` for
the supplied standard normals ``g``; chord positions use the supplied
uniforms, so the kernel is deterministic given its inputs.
"""
import numpy as np

from libc.math cimport INFINITY

cdef enum:
    REFRESH = 64


def hit_and_run(const double[:, ::1] A, const double[::1] b, const double[:, ::1] T,
                const double[::1] y0, const double[:, ::1] gauss, const double[::1] unif,
                Py_ssize_t burn, Py_ssize_t thin, double[:, ::1] out):
    """Run one chain; write ``out.shape[0]`` retained points into ``out``.

    Returns the number of steps whose chord was unbounded (0 for a bounded body).
    """
    cdef Py_ssize_t m = A.shape[0], d = A.shape[1], count = out.shape[0]
    cdef Py_ssize_t step, total = burn + thin * count, i, j, kept = 0
    cdef double lo, hi, t, r, au, si
    cdef Py_ssize_t unbounded = 0
    y_arr = np.array(y0, dtype=np.float64)
    u_arr = np.empty(d, dtype=np.float64)
    au_arr = np.empty(m, dtype=np.float64)
    s_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] y = y_arr
    cdef double[::1] u = u_arr
    cdef double[::1] Au = au_arr
    cdef double[::1] s = s_arr

    for step in range(total):
        if step % REFRESH == 0:
            for i in range(m):
                r = b[i]
                for j in range(d):
                    r -= A[i, j] * y[j]
                s[i] = r
        for i in range(d):
            r = 0.0
            for j in range(d):
                r += T[i, j] * gauss[step, j]
            u[i] = r
        lo = -INFINITY
        hi = INFINITY
        for i in range(m):
            r = 0.0
            for j in range(d):
                r += A[i, j] * u[j]
            Au[i] = r
            si = s[i] if s[i] > 0.0 else 0.0
            if r > 0.0:
                t = si / r
                if t < hi:
                    hi = t
            elif r < 0.0:
                t = si / r
                if t > lo:
                    lo = t
        if lo == -INFINITY or hi == INFINITY:
            unbounded += 1
            t = 0.0
        elif hi <= lo:
            t = 0.0
        else:
            t = lo + (hi - lo) * unif[step]
        for j in range(d):
            y[j] += t * u[j]
        for i in range(m):
            s[i] -= t * Au[i]
        if step >= burn and (step - burn + 1) % thin == 0:
            for j in range(d):
                out[kept, j] = y[j]
            kept += 1
    return unbounded
