# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: round-robin cyclic Jacobi sweeps and Neumaier summation.

Mirrors ``_kernels_py`` operation for operation; the two are interchangeable.
"""
import numpy as np

from libc.math cimport fabs, sqrt
from libc.stdlib cimport free, malloc


cdef inline void _rotate_rows(double *rp, double *rq, Py_ssize_t n,
                              double s, double tau) noexcept nogil:
    cdef Py_ssize_t k
    cdef double x, y
    for k in range(n):
        x = rp[k]
        y = rq[k]
        rp[k] = x - s * (y + x * tau)
        rq[k] = y + s * (x - y * tau)


cdef inline void _round_pair(Py_ssize_t m, Py_ssize_t rnd, Py_ssize_t i,
                             Py_ssize_t *p, Py_ssize_t *q) noexcept nogil:
    # circle method: position 0 is fixed, positions 1..m-1 rotate by one per round
    cdef Py_ssize_t j = m - 1 - i
    cdef Py_ssize_t u = 0 if i == 0 else (rnd + i - 1) % (m - 1) + 1
    cdef Py_ssize_t v = (rnd + j - 1) % (m - 1) + 1
    if u < v:
        p[0] = u
        q[0] = v
    else:
        p[0] = v
        q[0] = u


cdef int _jacobi(double[:, ::1] a, int max_sweeps, double rel_tol,
                 double *off_out) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = n + (n % 2)
    cdef Py_ssize_t half = m // 2
    cdef Py_ssize_t p, q, k, i, rnd, active
    cdef double normf = 0.0, off, sm, thresh
    cdef double apq, app, aqq, g, h, t, theta, c, s, tau, x, y
    cdef int sweep
    cdef Py_ssize_t *ps
    cdef Py_ssize_t *qs
    cdef double *ss
    cdef double *taus
    cdef double *dps
    cdef double *dqs
    cdef double *rk

    if n < 2:
        off_out[0] = 0.0
        return 0
    ps = <Py_ssize_t *> malloc(half * sizeof(Py_ssize_t))
    qs = <Py_ssize_t *> malloc(half * sizeof(Py_ssize_t))
    ss = <double *> malloc(half * sizeof(double))
    taus = <double *> malloc(half * sizeof(double))
    dps = <double *> malloc(half * sizeof(double))
    dqs = <double *> malloc(half * sizeof(double))

    for p in range(n):
        for q in range(n):
            normf += a[p, q] * a[p, q]
    normf = sqrt(normf)

    for sweep in range(max_sweeps + 1):
        off = 0.0
        sm = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
                sm += fabs(a[p, q])
        off = sqrt(2.0 * off)
        off_out[0] = off
        if off <= rel_tol * normf:
            free(ps); free(qs); free(ss); free(taus); free(dps); free(dqs)
            return sweep
        if sweep == max_sweeps:
            break
        thresh = 0.2 * sm / (n * n) if sweep < 3 else 0.0

        for rnd in range(m - 1):
            active = 0
            for i in range(half):
                _round_pair(m, rnd, i, &p, &q)
                if q >= n:
                    continue
                apq = a[p, q]
                g = 100.0 * fabs(apq)
                app = a[p, p]
                aqq = a[q, q]
                if sweep > 3 and fabs(app) + g == fabs(app) and fabs(aqq) + g == fabs(aqq):
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                if fabs(apq) <= thresh or apq == 0.0:
                    continue
                h = aqq - app
                if fabs(h) + g == fabs(h):
                    t = apq / h
                else:
                    theta = 0.5 * h / apq
                    t = 1.0 / (fabs(theta) + sqrt(1.0 + theta * theta))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                ps[active] = p
                qs[active] = q
                ss[active] = s
                taus[active] = s / (1.0 + c)
                h = t * apq
                dps[active] = app - h
                dqs[active] = aqq + h
                active += 1
            if active == 0:
                continue
            # rows: A <- J^T A
            for i in range(active):
                _rotate_rows(&a[ps[i], 0], &a[qs[i], 0], n, ss[i], taus[i])
            # columns: A <- A J, row by row to stay contiguous
            for k in range(n):
                rk = &a[k, 0]
                for i in range(active):
                    p = ps[i]
                    q = qs[i]
                    x = rk[p]
                    y = rk[q]
                    rk[p] = x - ss[i] * (y + x * taus[i])
                    rk[q] = y + ss[i] * (x - y * taus[i])
            # pivot blocks take their closed-form values (pairs are disjoint,
            # so no other rotation of the round touched them)
            for i in range(active):
                p = ps[i]
                q = qs[i]
                a[p, p] = dps[i]
                a[q, q] = dqs[i]
                a[p, q] = 0.0
                a[q, p] = 0.0
        # restore exact symmetry from the upper triangle
        for p in range(n - 1):
            for q in range(p + 1, n):
                a[q, p] = a[p, q]
    free(ps); free(qs); free(ss); free(taus); free(dps); free(dqs)
    return -1


def jacobi_eigenvalues(double[:, ::1] a, int max_sweeps=64, double rel_tol=1e-15):
    """Diagonalise the symmetric matrix ``a`` in place.

    Returns ``(sweeps, off_norm)``; ``sweeps`` is -1 when the off-diagonal
    Frobenius norm did not fall below ``rel_tol * ||a||_F`` in time.
    """
    cdef double off = 0.0
    cdef int sweeps
    with nogil:
        sweeps = _jacobi(a, max_sweeps, rel_tol, &off)
    return sweeps, off


def neumaier_sum(const double[::1] x):
    cdef Py_ssize_t i
    cdef double s = 0.0, comp = 0.0, t, v
    for i in range(x.shape[0]):
        v = x[i]
        t = s + v
        if fabs(s) >= fabs(v):
            comp += (s - t) + v
        else:
            comp += (v - t) + s
        s = t
    return s + comp


def neumaier_cumsum(const double[::1] x):
    cdef Py_ssize_t i, n = x.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double s = 0.0, comp = 0.0, t, v
    for i in range(n):
        v = x[i]
        t = s + v
        if fabs(s) >= fabs(v):
            comp += (s - t) + v
        else:
            comp += (v - t) + s
        s = t
        o[i] = s + comp
    return out


def neumaier_rowsums(const double[:, ::1] m):
    cdef Py_ssize_t i, j, rows = m.shape[0], cols = m.shape[1]
    out = np.empty(rows, dtype=np.float64)
    cdef double[::1] o = out
    cdef double s, comp, t, v
    with nogil:
        for i in range(rows):
            s = 0.0
            comp = 0.0
            for j in range(cols):
                v = m[i, j]
                t = s + v
                if fabs(s) >= fabs(v):
                    comp += (s - t) + v
                else:
                    comp += (v - t) + s
                s = t
            o[i] = s + comp
    return out
