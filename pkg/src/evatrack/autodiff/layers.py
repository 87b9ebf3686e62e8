"""Neural layers built from the tape ops: affine, gated recurrent cell,
and degree-normalized graph message passing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor import (
    Tensor,
    add,
    matmul,
    mul,
    relu,
    sigmoid,
    slice_cols,
    tanh,
)

_ACTIVATIONS = {"relu": relu, "tanh": tanh, "identity": lambda t: t}


def glorot(rng: np.random.Generator, fan_in: int, fan_out: int) -> Tensor:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return Tensor(rng.uniform(-limit, limit, size=(fan_in, fan_out)),
                  requires_grad=True)


def zeros(*shape) -> Tensor:
    return Tensor(np.zeros(shape), requires_grad=True)


def affine(x: Tensor, w: Tensor, b: Tensor) -> Tensor:
    """x @ w + b with b broadcast over rows."""
    return add(matmul(x, w), b)


@dataclass
class LSTMParams:
    """Stacked gate weights, column blocks ordered (input, forget, cell, output)."""

    w_x: Tensor
    w_h: Tensor
    b: Tensor

    @staticmethod
    def init(rng: np.random.Generator, input_dim: int, hidden_dim: int) -> "LSTMParams":
        b = np.zeros(4 * hidden_dim)
        b[hidden_dim:2 * hidden_dim] = 1.0  # forget-gate bias
        return LSTMParams(
            w_x=glorot(rng, input_dim, 4 * hidden_dim),
            w_h=glorot(rng, hidden_dim, 4 * hidden_dim),
            b=Tensor(b, requires_grad=True),
        )

    def named(self, prefix: str) -> dict[str, Tensor]:
        return {f"{prefix}.w_x": self.w_x, f"{prefix}.w_h": self.w_h,
                f"{prefix}.b": self.b}


def recurrent_cell(x_t: Tensor, h_prev: Tensor, c_prev: Tensor,
                   params: LSTMParams) -> tuple[Tensor, Tensor]:
    """One gated recurrent step; chain over time for BPTT."""
    hidden = h_prev.shape[1]
    if x_t.shape[0] != h_prev.shape[0] or h_prev.shape != c_prev.shape:
        raise ValueError("recurrent_cell: batch/hidden shape mismatch")
    z = add(add(matmul(x_t, params.w_x), matmul(h_prev, params.w_h)), params.b)
    i = sigmoid(slice_cols(z, 0, hidden))
    f = sigmoid(slice_cols(z, hidden, 2 * hidden))
    g = tanh(slice_cols(z, 2 * hidden, 3 * hidden))
    o = sigmoid(slice_cols(z, 3 * hidden, 4 * hidden))
    c_t = add(mul(f, c_prev), mul(i, g))
    h_t = mul(o, tanh(c_t))
    return h_t, c_t


def normalized_adjacency(n_nodes: int, edges) -> np.ndarray:
    """Symmetric 1/sqrt(d_i d_j) adjacency with mandatory self-loops.

    Degrees count the self-loop, so an otherwise isolated node keeps
    coefficient 1 instead of dividing by zero.
    """
    adj = np.eye(n_nodes, dtype=bool)
    for i, j in edges:
        if not (0 <= i < n_nodes and 0 <= j < n_nodes):
            raise ValueError(f"edge ({i},{j}) outside node range {n_nodes}")
        adj[i, j] = True
        adj[j, i] = True
    deg = adj.sum(axis=1).astype(np.float64)
    norm = adj / np.sqrt(np.outer(deg, deg))
    return norm * adj


def complete_graph_edges(n_nodes: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n_nodes) for j in range(i + 1, n_nodes)]


def gnn_layer(h: Tensor, edges, w: Tensor, activation: str = "relu") -> Tensor:
    """Degree-normalized neighborhood aggregation: act(A_norm @ h @ w)."""
    n_nodes = h.shape[0]
    a_norm = Tensor(normalized_adjacency(n_nodes, edges))
    act = _ACTIVATIONS[activation]
    return act(matmul(a_norm, matmul(h, w)))
