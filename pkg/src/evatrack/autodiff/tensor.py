"""Reverse-mode differentiation on dense float64 arrays.

A ``Tape`` is a Wengert list: ops append their records in execution order,
which is already a valid topological order, so the backward pass is a single
reverse sweep. Gradients accumulate additively wherever a value fans out.
Broadcasting is deliberately restricted to bias addition and python scalars
to keep every backward rule auditable.
"""

from __future__ import annotations

import math

import numpy as np

_TAPE_STACK: list["Tape"] = []
_DEBUG = False


def set_debug(enabled: bool) -> None:
    """Turn on hard errors for NaN/Inf in any forward value."""
    global _DEBUG
    _DEBUG = bool(enabled)


def active_tape() -> "Tape | None":
    return _TAPE_STACK[-1] if _TAPE_STACK else None


class Tape:
    """Records ops during a forward pass; replays them in reverse once."""

    def __init__(self):
        self._records = []  # (output, inputs, vjp)
        self._consumed = False

    def __enter__(self) -> "Tape":
        _TAPE_STACK.append(self)
        return self

    def __exit__(self, exc_type, exc, tb):
        popped = _TAPE_STACK.pop()
        assert popped is self

    def backward(self, root: "Tensor") -> None:
        """Seed d(root)/d(root)=1 and deposit grads on requires_grad leaves."""
        if self._consumed:
            raise RuntimeError(
                "tape has already been backpropagated; build a new tape"
            )
        self._consumed = True
        if root.data.size != 1:
            raise ValueError(f"backward root must be scalar, got shape {root.shape}")
        grads: dict[int, np.ndarray] = {id(root): np.ones_like(root.data)}
        holders: dict[int, Tensor] = {id(root): root}
        for out, inputs, vjp in reversed(self._records):
            g = grads.pop(id(out), None)
            holders.pop(id(out), None)
            if g is None:
                continue
            for t, gi in zip(inputs, vjp(g)):
                if gi is None or not t.requires_grad:
                    continue
                key = id(t)
                if key in grads:
                    grads[key] = grads[key] + gi
                else:
                    grads[key] = gi
                    holders[key] = t
        for key, g in grads.items():
            t = holders[key]
            t.grad = g if t.grad is None else t.grad + g


class Tensor:
    """Dense float64 array that participates in the active tape."""

    __slots__ = ("data", "requires_grad", "grad")

    def __init__(self, data, requires_grad: bool = False):
        self.data = np.asarray(data, dtype=np.float64)
        self.requires_grad = requires_grad
        self.grad: np.ndarray | None = None

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    def item(self) -> float:
        return float(self.data.reshape(()))

    def __float__(self) -> float:
        return self.item()

    def __repr__(self):
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"

    # sugar used throughout the model code
    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(self, other)

    def __truediv__(self, other):
        return div(self, other)

    def __neg__(self):
        return neg(self)


def as_tensor(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def _apply(out_data: np.ndarray, inputs: tuple[Tensor, ...], vjp) -> Tensor:
    if _DEBUG and not np.all(np.isfinite(out_data)):
        raise FloatingPointError("non-finite value in forward pass")
    tape = active_tape()
    req = tape is not None and any(t.requires_grad for t in inputs)
    out = Tensor(out_data, requires_grad=req)
    if req:
        tape._records.append((out, inputs, vjp))
    return out


def _same_shape(a: Tensor, b: Tensor, op: str) -> None:
    if a.shape != b.shape:
        raise ValueError(f"{op}: shape mismatch {a.shape} vs {b.shape}")


# ---------------------------------------------------------------- arithmetic

def add(a: Tensor, b) -> Tensor:
    """Elementwise addition; also x + bias row-broadcast and x + scalar."""
    if isinstance(b, (int, float)):
        return _apply(a.data + b, (a,), lambda g: (g,))
    b = as_tensor(b)
    if a.shape == b.shape:
        return _apply(a.data + b.data, (a, b), lambda g: (g, g))
    if a.data.ndim == 2 and b.data.ndim == 1 and a.shape[1] == b.shape[0]:
        return _apply(a.data + b.data, (a, b), lambda g: (g, g.sum(axis=0)))
    raise ValueError(f"add: unsupported shapes {a.shape} + {b.shape}")


def sub(a: Tensor, b) -> Tensor:
    if isinstance(b, (int, float)):
        return _apply(a.data - b, (a,), lambda g: (g,))
    b = as_tensor(b)
    _same_shape(a, b, "sub")
    return _apply(a.data - b.data, (a, b), lambda g: (g, -g))


def mul(a: Tensor, b) -> Tensor:
    if isinstance(b, (int, float)):
        return _apply(a.data * b, (a,), lambda g, c=b: (g * c,))
    b = as_tensor(b)
    _same_shape(a, b, "mul")
    ad, bd = a.data, b.data
    return _apply(ad * bd, (a, b), lambda g: (g * bd, g * ad))


def div(a: Tensor, b: Tensor) -> Tensor:
    b = as_tensor(b)
    _same_shape(a, b, "div")
    ad, bd = a.data, b.data
    return _apply(ad / bd, (a, b), lambda g: (g / bd, -g * ad / (bd * bd)))


def neg(a: Tensor) -> Tensor:
    return _apply(-a.data, (a,), lambda g: (-g,))


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.data.ndim != 2 or b.data.ndim != 2:
        raise ValueError("matmul: both operands must be 2-D")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"matmul: inner dims differ {a.shape} @ {b.shape}")
    ad, bd = a.data, b.data

    def vjp(g):
        ga = g @ bd.T if a.requires_grad else None
        gb = ad.T @ g if b.requires_grad else None
        return ga, gb

    return _apply(ad @ bd, (a, b), vjp)


# -------------------------------------------------------------- reductions

def _expand(g: np.ndarray, shape, axis, keepdims) -> np.ndarray:
    if axis is None:
        return np.broadcast_to(g, shape).copy()
    if not keepdims:
        g = np.expand_dims(g, axis)
    return np.broadcast_to(g, shape).copy()


def tsum(a: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    shape = a.shape
    return _apply(
        a.data.sum(axis=axis, keepdims=keepdims),
        (a,),
        lambda g: (_expand(g, shape, axis, keepdims),),
    )


def tmean(a: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    shape = a.shape
    n = a.data.size if axis is None else shape[axis]
    return _apply(
        a.data.mean(axis=axis, keepdims=keepdims),
        (a,),
        lambda g: (_expand(g, shape, axis, keepdims) / n,),
    )


# ------------------------------------------------------------ shape plumbing

def reshape(a: Tensor, shape) -> Tensor:
    old = a.shape
    return _apply(a.data.reshape(shape), (a,), lambda g: (g.reshape(old),))


def concat(tensors: list[Tensor], axis: int = 1) -> Tensor:
    datas = [t.data for t in tensors]
    sizes = [d.shape[axis] for d in datas]
    splits = np.cumsum(sizes)[:-1]

    def vjp(g):
        return tuple(np.split(g, splits, axis=axis))

    return _apply(np.concatenate(datas, axis=axis), tuple(tensors), vjp)


def slice_cols(a: Tensor, lo: int, hi: int) -> Tensor:
    if a.data.ndim != 2:
        raise ValueError("slice_cols expects a 2-D tensor")
    shape = a.shape

    def vjp(g):
        full = np.zeros(shape)
        full[:, lo:hi] = g
        return (full,)

    return _apply(a.data[:, lo:hi].copy(), (a,), vjp)


# ------------------------------------------------------------ nonlinearities

def sigmoid(a: Tensor) -> Tensor:
    out = np.where(a.data >= 0, 1.0 / (1.0 + np.exp(-np.abs(a.data))),
                   np.exp(-np.abs(a.data)) / (1.0 + np.exp(-np.abs(a.data))))
    return _apply(out, (a,), lambda g: (g * out * (1.0 - out),))


def tanh(a: Tensor) -> Tensor:
    out = np.tanh(a.data)
    return _apply(out, (a,), lambda g: (g * (1.0 - out * out),))


def relu(a: Tensor) -> Tensor:
    mask = a.data > 0
    return _apply(a.data * mask, (a,), lambda g: (g * mask,))


def softplus(a: Tensor) -> Tensor:
    ad = a.data
    out = np.logaddexp(0.0, ad)

    def vjp(g):
        s = np.where(ad >= 0, 1.0 / (1.0 + np.exp(-ad)),
                     np.exp(ad) / (1.0 + np.exp(ad)))
        return (g * s,)

    return _apply(out, (a,), vjp)


def exp(a: Tensor) -> Tensor:
    out = np.exp(a.data)
    return _apply(out, (a,), lambda g: (g * out,))


def log(a: Tensor) -> Tensor:
    ad = a.data
    return _apply(np.log(ad), (a,), lambda g: (g / ad,))


def sqrt(a: Tensor) -> Tensor:
    out = np.sqrt(a.data)
    return _apply(out, (a,), lambda g: (g * 0.5 / out,))


def log_sum_exp(a: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    """Max-shifted log-sum-exp; gradient is the softmax of the inputs."""
    ad = a.data
    if ad.size < 1:
        raise ValueError("log_sum_exp needs at least one element")
    m = ad.max(axis=axis, keepdims=True)
    shifted = np.exp(ad - m)
    total = shifted.sum(axis=axis, keepdims=True)
    out = m + np.log(total)
    if axis is None:
        out = out.reshape(())
    elif not keepdims:
        out = np.squeeze(out, axis=axis)
    soft = shifted / total
    shape = ad.shape

    def vjp(g):
        return (_expand(g, shape, axis, keepdims) * soft,)

    return _apply(out, (a,), vjp)
