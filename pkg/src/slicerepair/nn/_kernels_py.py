"""Pure-numpy fallback for the aggregation kernels (np.add.at scatter)."""

import numpy as np


def edge_counts(dst, n_nodes):
    out = np.zeros(n_nodes, dtype=np.float64)
    np.add.at(out, dst, 1.0)
    return out


def segment_mean_forward(h, src, dst, counts, n_nodes):
    out = np.zeros((n_nodes, h.shape[1]), dtype=np.float64)
    np.add.at(out, dst, h[src])
    nonzero = counts > 0
    out[nonzero] /= counts[nonzero, None]
    return out


def segment_mean_backward(grad_out, src, dst, counts, n_nodes):
    grad_h = np.zeros((n_nodes, grad_out.shape[1]), dtype=np.float64)
    scaled = grad_out[dst] / counts[dst, None]
    np.add.at(grad_h, src, scaled)
    return grad_h
