"""Finite-difference gradient oracle shared across test modules.

The oracle only perturbs raw parameter buffers and re-runs the forward
function, so it is independent of the tape machinery it is used to check.
"""

from __future__ import annotations

import numpy as np

from evatrack.autodiff import Tape


def numeric_grad(loss_fn, leaf, indices, step=1e-5):
    """Central finite differences of loss_fn() w.r.t. leaf.data[indices]."""
    grads = []
    flat = leaf.data.ravel()
    for idx in indices:
        orig = flat[idx]
        flat[idx] = orig + step
        up = float(loss_fn())
        flat[idx] = orig - step
        down = float(loss_fn())
        flat[idx] = orig
        grads.append((up - down) / (2.0 * step))
    return np.asarray(grads)


def backprop_grads(loss_fn, leaves):
    """Runs loss_fn under a fresh tape and returns each leaf's full gradient."""
    for leaf in leaves:
        leaf.grad = None
    with Tape() as tape:
        loss = loss_fn()
    tape.backward(loss)
    return [np.zeros_like(leaf.data) if leaf.grad is None else leaf.grad
            for leaf in leaves]


def rel_err(a, b, floor=1e-10):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    denom = np.maximum(np.maximum(np.abs(a), np.abs(b)), floor)
    return np.abs(a - b) / denom


def check_grads(loss_fn, leaves, rng, tol, coords_per_leaf=6, step=1e-5):
    """Compare backprop vs FD on random coordinates; returns worst rel err."""
    bp = backprop_grads(loss_fn, leaves)
    worst = 0.0
    for leaf, full in zip(leaves, bp):
        n = leaf.data.size
        k = min(coords_per_leaf, n)
        indices = rng.choice(n, size=k, replace=False)
        fd = numeric_grad(loss_fn, leaf, indices, step=step)
        got = full.ravel()[indices]
        # ignore coordinates where both are essentially zero
        mask = (np.abs(fd) > 1e-9) | (np.abs(got) > 1e-9)
        if mask.any():
            err = rel_err(got[mask], fd[mask]).max()
            worst = max(worst, float(err))
        assert rel_err(got, fd)[mask].max(initial=0.0) < tol, (
            f"gradient mismatch: bp={got}, fd={fd}")
    return worst
