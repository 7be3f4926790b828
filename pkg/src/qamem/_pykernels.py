"""Numpy implementations of the amplitude-update kernels.

Same signatures and in-place semantics as the compiled ``_ckernels``.
"""
import numpy as np


def _pair_indices(dim, target, ctrl_mask, ctrl_value):
    idx = np.arange(dim)
    lo = idx[((idx & target) == 0) & ((idx & ctrl_mask) == ctrl_value)]
    return lo, lo | target


def controlled_x(state, target, ctrl_mask, ctrl_value):
    lo, hi = _pair_indices(state.shape[0], target, ctrl_mask, ctrl_value)
    state[lo], state[hi] = state[hi], state[lo].copy()


def controlled_u2(state, target, ctrl_mask, ctrl_value, u00, u01, u10, u11):
    lo, hi = _pair_indices(state.shape[0], target, ctrl_mask, ctrl_value)
    a0 = state[lo]
    a1 = state[hi]
    state[lo] = u00 * a0 + u01 * a1
    state[hi] = u10 * a0 + u11 * a1


def reflect(state, axis, sign=1.0):
    if axis.shape[0] != state.shape[0]:
        raise ValueError("axis and state differ in length")
    overlap = 2.0 * np.dot(axis, state)
    state -= axis * overlap
    if sign != 1.0:
        state *= sign


def phase_flip(state, members):
    state[members.astype(bool)] *= -1


def set_probability(state, members):
    sel = state[members.astype(bool)]
    return float(np.sum(sel.real**2 + sel.imag**2))


def grover_trace(state, oracle_axis, diffusion_axis, members, out):
    if oracle_axis.shape[0] != state.shape[0] or diffusion_axis.shape[0] != state.shape[0]:
        raise ValueError("axis and state differ in length")
    mask = members.astype(bool)
    for k in range(out.shape[0]):
        reflect(state, oracle_axis)
        reflect(state, diffusion_axis, -1.0)
        sel = state[mask]
        out[k] = np.sum(sel.real**2 + sel.imag**2)
