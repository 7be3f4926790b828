# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled amplitude-update kernels.

Every function mutates ``state`` (a contiguous complex128 vector) in place.
Qubit positions arrive as bit masks over the basis index.
"""

cimport cython
from libc.math cimport sqrt

ctypedef double complex cplx


def controlled_x(cplx[::1] state, Py_ssize_t target, Py_ssize_t ctrl_mask,
                 Py_ssize_t ctrl_value):
    cdef Py_ssize_t i, j, dim = state.shape[0]
    cdef cplx tmp
    with nogil:
        for i in range(dim):
            if (i & target) == 0 and (i & ctrl_mask) == ctrl_value:
                j = i | target
                tmp = state[i]
                state[i] = state[j]
                state[j] = tmp


def controlled_u2(cplx[::1] state, Py_ssize_t target, Py_ssize_t ctrl_mask,
                  Py_ssize_t ctrl_value, cplx u00, cplx u01, cplx u10, cplx u11):
    cdef Py_ssize_t i, j, dim = state.shape[0]
    cdef cplx a0, a1
    with nogil:
        for i in range(dim):
            if (i & target) == 0 and (i & ctrl_mask) == ctrl_value:
                j = i | target
                a0 = state[i]
                a1 = state[j]
                state[i] = u00 * a0 + u01 * a1
                state[j] = u10 * a0 + u11 * a1


cdef inline void _reflect(cplx[::1] state, const double[::1] axis, double sign) noexcept nogil:
    # state <- sign * (state - 2 axis <axis|state>), axis real; works on the
    # interleaved (re, im) doubles so the loops stay free of complex helpers
    cdef Py_ssize_t i, dim = state.shape[0]
    cdef double *v = <double *> &state[0]
    cdef double ore = 0.0, oim = 0.0, w
    for i in range(dim):
        ore += axis[i] * v[2 * i]
        oim += axis[i] * v[2 * i + 1]
    ore *= 2.0
    oim *= 2.0
    for i in range(dim):
        w = axis[i]
        v[2 * i] = sign * (v[2 * i] - w * ore)
        v[2 * i + 1] = sign * (v[2 * i + 1] - w * oim)


def reflect(cplx[::1] state, const double[::1] axis, double sign=1.0):
    if axis.shape[0] != state.shape[0]:
        raise ValueError("axis and state differ in length")
    with nogil:
        _reflect(state, axis, sign)


def phase_flip(cplx[::1] state, const unsigned char[::1] members):
    cdef Py_ssize_t i, dim = state.shape[0]
    with nogil:
        for i in range(dim):
            if members[i]:
                state[i] = -state[i]


cdef inline double _set_prob(cplx[::1] state, const unsigned char[::1] members) noexcept nogil:
    cdef Py_ssize_t i, dim = state.shape[0]
    cdef const double *v = <const double *> &state[0]
    cdef double total = 0.0
    for i in range(dim):
        if members[i]:
            total += v[2 * i] * v[2 * i] + v[2 * i + 1] * v[2 * i + 1]
    return total


def set_probability(cplx[::1] state, const unsigned char[::1] members):
    cdef double total
    with nogil:
        total = _set_prob(state, members)
    return total


def grover_trace(cplx[::1] state, const double[::1] oracle_axis,
                 const double[::1] diffusion_axis, const unsigned char[::1] members,
                 double[::1] out):
    """Apply len(out) oracle+diffusion rounds, storing P(members) after each."""
    cdef Py_ssize_t k, rounds = out.shape[0]
    if oracle_axis.shape[0] != state.shape[0] or diffusion_axis.shape[0] != state.shape[0]:
        raise ValueError("axis and state differ in length")
    with nogil:
        for k in range(rounds):
            _reflect(state, oracle_axis, 1.0)
            _reflect(state, diffusion_axis, -1.0)
            out[k] = _set_prob(state, members)
