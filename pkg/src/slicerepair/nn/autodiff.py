"""Minimal reverse-mode autodiff over float64 numpy arrays.

Only the operations the graph model needs; gradients are verified against
central finite differences in the test suite.
"""

from __future__ import annotations

import numpy as np

from . import kernels


class Tensor:
    __slots__ = ("data", "grad", "parents", "_backward")

    def __init__(self, data, parents=(), backward=None):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad = None
        self.parents = parents
        self._backward = backward

    @property
    def shape(self):
        return self.data.shape


def _accumulate(tensor: Tensor, grad: np.ndarray) -> None:
    if tensor.grad is None:
        tensor.grad = np.zeros_like(tensor.data)
    tensor.grad += grad


def backward(root: Tensor) -> None:
    """Accumulate gradients of ``root`` (a scalar) into every ancestor."""
    topo: list[Tensor] = []
    visited: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            topo.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        for parent in node.parents:
            stack.append((parent, False))
    root.grad = np.ones_like(root.data)
    for node in reversed(topo):
        if node._backward is not None:
            node._backward(node.grad)


def leaf(data) -> Tensor:
    return Tensor(data)


def add(a: Tensor, b: Tensor) -> Tensor:
    def back(g):
        _accumulate(a, g)
        _accumulate(b, g)

    return Tensor(a.data + b.data, (a, b), back)


def scale(a: Tensor, factor: float) -> Tensor:
    def back(g):
        _accumulate(a, factor * g)

    return Tensor(factor * a.data, (a,), back)


def add_all(tensors: list[Tensor]) -> Tensor:
    def back(g):
        for t in tensors:
            _accumulate(t, g)

    return Tensor(sum(t.data for t in tensors), tuple(tensors), back)


def mul_const(a: Tensor, mask: np.ndarray) -> Tensor:
    def back(g):
        _accumulate(a, g * mask)

    return Tensor(a.data * mask, (a,), back)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """2-D @ 2-D, 1-D @ 2-D (row vector), or 2-D @ 1-D (matrix-vector)."""
    ad, bd = a.data, b.data

    def back(g):
        if ad.ndim == 2 and bd.ndim == 2:
            _accumulate(a, g @ bd.T)
            _accumulate(b, ad.T @ g)
        elif ad.ndim == 1 and bd.ndim == 2:
            _accumulate(a, bd @ g)
            _accumulate(b, np.outer(ad, g))
        elif ad.ndim == 2 and bd.ndim == 1:
            _accumulate(a, np.outer(g, bd))
            _accumulate(b, ad.T @ g)
        else:
            raise ValueError("unsupported matmul arity")

    return Tensor(ad @ bd, (a, b), back)


def tanh(a: Tensor) -> Tensor:
    out_data = np.tanh(a.data)

    def back(g):
        _accumulate(a, g * (1.0 - out_data * out_data))

    return Tensor(out_data, (a,), back)


def gather_rows(table: Tensor, indices: np.ndarray) -> Tensor:
    indices = np.asarray(indices, dtype=np.int64)

    def back(g):
        if table.grad is None:
            table.grad = np.zeros_like(table.data)
        np.add.at(table.grad, indices, g)

    return Tensor(table.data[indices], (table,), back)


def row(a: Tensor, index: int) -> Tensor:
    def back(g):
        if a.grad is None:
            a.grad = np.zeros_like(a.data)
        a.grad[index] += g

    return Tensor(a.data[index], (a,), back)


def concat(a: Tensor, b: Tensor) -> Tensor:
    na = a.data.shape[0]

    def back(g):
        _accumulate(a, g[:na])
        _accumulate(b, g[na:])

    return Tensor(np.concatenate([a.data, b.data]), (a, b), back)


def segment_mean(h: Tensor, src, dst, counts, n_nodes: int) -> Tensor:
    """out[v] = mean of h[u] over edges (u -> v); zero rows for isolated v."""
    src = np.ascontiguousarray(src, dtype=np.int64)
    dst = np.ascontiguousarray(dst, dtype=np.int64)
    out_data = kernels.segment_mean_forward(
        np.ascontiguousarray(h.data), src, dst, counts, n_nodes
    )

    def back(g):
        _accumulate(
            h,
            kernels.segment_mean_backward(
                np.ascontiguousarray(g), src, dst, counts, h.data.shape[0]
            ),
        )

    return Tensor(out_data, (h,), back)


def max_over_rows(a: Tensor) -> Tensor:
    """Column-wise max of an (n, d) matrix; gradient flows to the argmax row
    (first one on ties)."""
    arg = np.argmax(a.data, axis=0)
    cols = np.arange(a.data.shape[1])

    def back(g):
        if a.grad is None:
            a.grad = np.zeros_like(a.data)
        np.add.at(a.grad, (arg, cols), g)

    return Tensor(a.data[arg, cols], (a,), back)


def mean_all(tensors: list[Tensor]) -> Tensor:
    k = float(len(tensors))

    def back(g):
        for t in tensors:
            _accumulate(t, g / k)

    return Tensor(sum(t.data for t in tensors) / k, tuple(tensors), back)


def log_softmax(a: Tensor) -> Tensor:
    shifted = a.data - np.max(a.data)
    log_z = np.log(np.sum(np.exp(shifted)))
    out_data = shifted - log_z

    def back(g):
        _accumulate(a, g - np.exp(out_data) * np.sum(g))

    return Tensor(out_data, (a,), back)


def pick(a: Tensor, index: int) -> Tensor:
    def back(g):
        if a.grad is None:
            a.grad = np.zeros_like(a.data)
        a.grad[index] += g

    return Tensor(a.data[index], (a,), back)
