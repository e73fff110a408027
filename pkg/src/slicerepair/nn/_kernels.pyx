# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled gather/scatter kernels for the message-passing hot loop."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def edge_counts(cnp.int64_t[::1] dst, Py_ssize_t n_nodes):
    out = np.zeros(n_nodes, dtype=np.float64)
    cdef cnp.float64_t[::1] view = out
    cdef Py_ssize_t e
    for e in range(dst.shape[0]):
        view[dst[e]] += 1.0
    return out


def segment_mean_forward(
    cnp.float64_t[:, ::1] h,
    cnp.int64_t[::1] src,
    cnp.int64_t[::1] dst,
    cnp.float64_t[::1] counts,
    Py_ssize_t n_nodes,
):
    """out[v] = mean over edges (u -> v) of h[u]; zero when v has no edges."""
    cdef Py_ssize_t d = h.shape[1]
    out = np.zeros((n_nodes, d), dtype=np.float64)
    cdef cnp.float64_t[:, ::1] oview = out
    cdef Py_ssize_t e, j, s, t
    for e in range(src.shape[0]):
        s = src[e]
        t = dst[e]
        for j in range(d):
            oview[t, j] += h[s, j]
    for t in range(n_nodes):
        if counts[t] > 0.0:
            for j in range(d):
                oview[t, j] /= counts[t]
    return out


def segment_mean_backward(
    cnp.float64_t[:, ::1] grad_out,
    cnp.int64_t[::1] src,
    cnp.int64_t[::1] dst,
    cnp.float64_t[::1] counts,
    Py_ssize_t n_nodes,
):
    """Gradient of segment_mean_forward w.r.t. h."""
    cdef Py_ssize_t d = grad_out.shape[1]
    grad_h = np.zeros((n_nodes, d), dtype=np.float64)
    cdef cnp.float64_t[:, ::1] gview = grad_h
    cdef Py_ssize_t e, j, s, t
    for e in range(src.shape[0]):
        s = src[e]
        t = dst[e]
        for j in range(d):
            gview[s, j] += grad_out[t, j] / counts[t]
    return grad_h
