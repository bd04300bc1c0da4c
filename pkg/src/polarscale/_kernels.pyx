# Compiled kernels for the sampled polarization operators.
#
# Must stay numerically in lockstep with _kernels_np.py: identical expressions,
# identical clamping, so both backends produce the same floats up to ulps.

from libc.math cimport sqrt

NAME = "cython"


cdef inline double _interp(const double[::1] h, double t, Py_ssize_t n) nogil:
    cdef double u = t * n
    cdef Py_ssize_t idx = <Py_ssize_t>u
    if idx > n - 1:
        idx = n - 1
    cdef double frac = u - idx
    if frac > 1.0:
        frac = 1.0
    cdef double left = h[idx]
    return left + (h[idx + 1] - left) * frac


def bec_step(const double[::1] h, double[::1] out, Py_ssize_t i0, Py_ssize_t i1):
    """Erasure-operator step: out[i] = (h(x^2) + h(2x - x^2)) / 2 on i0 <= i < i1."""
    cdef Py_ssize_t n = h.shape[0] - 1
    cdef Py_ssize_t i
    cdef double x, a, b
    with nogil:
        for i in range(i0, i1):
            x = (<double>i) / (<double>n)
            a = _interp(h, x * x, n)
            b = _interp(h, x * (2.0 - x), n)
            out[i] = 0.5 * (a + b)


def bmsc_step(const double[::1] h, double[::1] out, Py_ssize_t ms,
              Py_ssize_t i0, Py_ssize_t i1):
    """General-operator step with the inner max over the ms+1 point y-grid."""
    cdef Py_ssize_t n = h.shape[0] - 1
    cdef Py_ssize_t i, j
    cdef double x, a, ylo, yhi, width, best, v, y
    cdef double inv_ms = 1.0 / ms
    with nogil:
        for i in range(i0, i1):
            x = (<double>i) / (<double>n)
            a = _interp(h, x * x, n)
            ylo = x * sqrt(2.0 - x * x)
            yhi = x * (2.0 - x)
            width = yhi - ylo
            best = _interp(h, yhi, n)
            for j in range(ms + 1):
                y = ylo + (j * inv_ms) * width
                v = _interp(h, y, n)
                if v > best:
                    best = v
            out[i] = 0.5 * (a + best)
