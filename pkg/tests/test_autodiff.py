import math

import numpy as np
import pytest

from evatrack import autodiff as ad
from evatrack.autodiff import Tape, Tensor

from gradcheck import check_grads


def _rand(rng, *shape):
    return Tensor(rng.standard_normal(shape), requires_grad=True)


def test_fanout_accumulates_additively():
    x = Tensor(3.0, requires_grad=True)
    with Tape() as tape:
        y = ad.add(ad.mul(x, x), x)  # x^2 + x
    tape.backward(y)
    assert x.grad == pytest.approx(2 * 3.0 + 1.0)


def test_backward_twice_raises():
    x = Tensor(2.0, requires_grad=True)
    with Tape() as tape:
        y = ad.mul(x, x)
    tape.backward(y)
    with pytest.raises(RuntimeError):
        tape.backward(y)


def test_backward_requires_scalar_root():
    x = _rand(np.random.default_rng(0), 3)
    with Tape() as tape:
        y = ad.mul(x, x)
    with pytest.raises(ValueError):
        tape.backward(y)


def test_no_tape_means_no_recording():
    x = Tensor(np.ones(4), requires_grad=True)
    y = ad.mul(x, x)
    assert not y.requires_grad


def test_shape_mismatch_rejected():
    a = Tensor(np.ones((2, 3)))
    b = Tensor(np.ones((3, 3)))
    with pytest.raises(ValueError):
        ad.mul(a, b)
    with pytest.raises(ValueError):
        ad.matmul(Tensor(np.ones((2, 3))), Tensor(np.ones((2, 3))))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_elementwise_and_matmul_grads(seed):
    rng = np.random.default_rng(seed)
    a = _rand(rng, 3, 4)
    b = _rand(rng, 3, 4)
    w = _rand(rng, 4, 2)

    def loss():
        h = ad.mul(ad.add(a, b), ad.sub(a, b))
        h = ad.matmul(h, w)
        return ad.tsum(ad.tanh(h))

    check_grads(loss, [a, b, w], rng, tol=1e-6)


def test_div_sqrt_exp_log_grads():
    rng = np.random.default_rng(7)
    a = Tensor(rng.uniform(0.5, 2.0, (4, 3)), requires_grad=True)
    b = Tensor(rng.uniform(0.5, 2.0, (4, 3)), requires_grad=True)

    def loss():
        return ad.tsum(ad.log(ad.sqrt(ad.div(ad.exp(a), b))))

    check_grads(loss, [a, b], rng, tol=1e-6)


def test_reductions_and_shapes_grads():
    rng = np.random.default_rng(11)
    a = _rand(rng, 4, 6)

    def loss():
        h = ad.reshape(a, (2, 12))
        left = ad.slice_cols(h, 0, 5)
        right = ad.slice_cols(h, 5, 12)
        s = ad.concat([ad.tmean(left, axis=1, keepdims=True),
                       ad.tsum(right, axis=1, keepdims=True)], axis=1)
        return ad.tsum(ad.sigmoid(s))

    check_grads(loss, [a], rng, tol=1e-6)


def test_bias_broadcast_grad_sums_over_rows():
    rng = np.random.default_rng(3)
    x = _rand(rng, 5, 3)
    b = _rand(rng, 3)

    def loss():
        return ad.tsum(ad.softplus(ad.add(x, b)))

    check_grads(loss, [x, b], rng, tol=1e-6)


def test_log_sum_exp_values():
    t = ad.log_sum_exp(Tensor(np.array([0.0, 0.0])))
    assert t.item() == pytest.approx(math.log(2.0), abs=1e-12)
    big = ad.log_sum_exp(Tensor(np.array([1000.0, 1000.0])))
    assert big.item() == pytest.approx(1000.0 + math.log(2.0), abs=1e-9)
    const = ad.log_sum_exp(Tensor(np.full(7, -3.25)))
    assert const.item() == pytest.approx(-3.25 + math.log(7.0), abs=1e-12)


def test_log_sum_exp_gradient_is_softmax():
    rng = np.random.default_rng(5)
    x = _rand(rng, 6)
    with Tape() as tape:
        y = ad.log_sum_exp(x)
    tape.backward(y)
    expected = np.exp(x.data - x.data.max())
    expected /= expected.sum()
    np.testing.assert_allclose(x.grad, expected, rtol=1e-12)

    def loss():
        return ad.log_sum_exp(x)

    check_grads(loss, [x], rng, tol=1e-6)


def test_log_sum_exp_axis_grad():
    rng = np.random.default_rng(9)
    x = _rand(rng, 4, 3)

    def loss():
        return ad.tsum(ad.log_sum_exp(x, axis=1))

    check_grads(loss, [x], rng, tol=1e-6)


def test_debug_mode_flags_nonfinite():
    ad.set_debug(True)
    try:
        with np.errstate(invalid="ignore"), pytest.raises(FloatingPointError):
            ad.log(Tensor(np.array([-1.0])))
    finally:
        ad.set_debug(False)


def test_forward_deterministic():
    rng = np.random.default_rng(21)
    x = Tensor(rng.standard_normal((8, 8)))
    w = Tensor(rng.standard_normal((8, 8)))
    one = ad.matmul(ad.tanh(x), w).data
    two = ad.matmul(ad.tanh(x), w).data
    assert one.tobytes() == two.tobytes()
