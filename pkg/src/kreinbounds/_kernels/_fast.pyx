# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the kernels in ``_reference``."""
import numpy as np

from libc.math cimport exp, sqrt, fabs, pow, M_PI, INFINITY


cdef extern from "<complex.h>" nogil:
    double complex csqrt(double complex z)


cdef inline double complex _cquad(const double complex[:, ::1] m,
                                  const double complex[:] u,
                                  const double complex[:] v) noexcept nogil:
    # u* M v
    cdef Py_ssize_t i, j
    cdef double complex acc = 0, row
    for i in range(m.shape[0]):
        row = 0
        for j in range(m.shape[1]):
            row = row + m[i, j] * v[j]
        acc = acc + u[i].conjugate() * row
    return acc


def qnr_eigs(const double complex[:, ::1] a0, const double complex[:, ::1] a1,
             const double complex[:, ::1] b, const double complex[:, ::1] c,
             const double complex[:, ::1] xs, const double complex[:, ::1] ys):
    cdef Py_ssize_t s, n = xs.shape[0]
    out = np.empty(2 * n, dtype=complex)
    cdef double complex[::1] o = out
    cdef double complex alpha, delta, beta, gamma, half_tr, root
    with nogil:
        for s in range(n):
            alpha = _cquad(a0, xs[s], xs[s])
            delta = _cquad(a1, ys[s], ys[s])
            beta = _cquad(b, xs[s], ys[s])
            gamma = _cquad(c, ys[s], xs[s])
            half_tr = 0.5 * (alpha + delta)
            root = csqrt(0.25 * (alpha - delta) * (alpha - delta) + beta * gamma)
            o[2 * s] = half_tr + root
            o[2 * s + 1] = half_tr - root
    return out


def rayleigh_quotients(const double complex[:, ::1] t, const double complex[:, ::1] xs):
    cdef Py_ssize_t s, n = xs.shape[0]
    out = np.empty(n, dtype=complex)
    cdef double complex[::1] o = out
    with nogil:
        for s in range(n):
            o[s] = _cquad(t, xs[s], xs[s])
    return out


def hermite_psi(const double[::1] nodes, Py_ssize_t m):
    cdef Py_ssize_t k, n, nx = nodes.shape[0]
    out = np.empty((nx, m), dtype=float)
    cdef double[:, ::1] o = out
    cdef double x, p0, p1, p2
    cdef double pim14 = M_PI ** -0.25
    with nogil:
        for k in range(nx):
            x = nodes[k]
            p0 = pim14 * exp(-0.5 * x * x)
            o[k, 0] = p0
            if m > 1:
                p1 = sqrt(2.0) * x * p0
                o[k, 1] = p1
                for n in range(1, m - 1):
                    p2 = sqrt(2.0 / (n + 1)) * x * p1 - sqrt(n / (n + 1.0)) * p0
                    o[k, n + 1] = p2
                    p0 = p1
                    p1 = p2
    return out


def hermite_weighted(const double[::1] nodes, Py_ssize_t m, Py_ssize_t n_total):
    cdef Py_ssize_t k, n, j, nx = nodes.shape[0]
    out = np.empty((nx, m), dtype=float)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t[::1] level = np.empty(m, dtype=np.intp)
    cdef double x, p0, p1, p2, last, big = 1e100
    cdef double pim14 = M_PI ** -0.25
    cdef Py_ssize_t cnt
    with nogil:
        for k in range(nx):
            x = nodes[k]
            cnt = 0
            p0 = pim14
            p1 = sqrt(2.0) * x * p0
            o[k, 0] = p0
            level[0] = 0
            if m > 1:
                o[k, 1] = p1
                level[1] = 0
            for n in range(1, n_total - 1):
                p2 = sqrt(2.0 / (n + 1)) * x * p1 - sqrt(n / (n + 1.0)) * p0
                p0 = p1
                p1 = p2
                if fabs(p1) > big:
                    p0 = p0 / big
                    p1 = p1 / big
                    cnt += 1
                if n + 1 < m:
                    o[k, n + 1] = p1
                    level[n + 1] = cnt
            last = p1 if n_total > 1 else p0
            last = sqrt(<double>n_total) * fabs(last)
            for j in range(m):
                o[k, j] = o[k, j] * pow(big, <double>(level[j] - cnt)) / last
    return out


def min_cross_distance(const double[::1] s0, const double[::1] s1):
    cdef Py_ssize_t i = 0, j = 0, n0 = s0.shape[0], n1 = s1.shape[0]
    cdef double best = INFINITY, gap
    with nogil:
        while i < n0 and j < n1:
            gap = fabs(s0[i] - s1[j])
            if gap < best:
                best = gap
            if s0[i] < s1[j]:
                i += 1
            else:
                j += 1
    return best
