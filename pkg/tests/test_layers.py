import numpy as np
import pytest

from evatrack import autodiff as ad
from evatrack.autodiff import LSTMParams, Tape, Tensor

from gradcheck import check_grads


class TestAffine:
    def test_identity_weights_passthrough(self):
        x = Tensor(np.random.default_rng(0).standard_normal((4, 3)))
        out = ad.affine(x, Tensor(np.eye(3)), Tensor(np.zeros(3)))
        np.testing.assert_array_equal(out.data, x.data)

    def test_zero_input_returns_bias(self):
        b = np.array([0.5, -1.0, 2.0])
        out = ad.affine(Tensor(np.zeros((5, 3))), Tensor(np.eye(3)), Tensor(b))
        np.testing.assert_array_equal(out.data, np.tile(b, (5, 1)))

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(42)
        x = Tensor(rng.standard_normal((3, 4)), requires_grad=True)
        w = Tensor(rng.standard_normal((4, 2)), requires_grad=True)
        b = Tensor(rng.standard_normal(2), requires_grad=True)

        def loss():
            return ad.tsum(ad.affine(x, w, b))

        check_grads(loss, [x, w, b], rng, tol=1e-6)


class TestRecurrentCell:
    def test_zero_params_give_zero_hidden(self):
        params = LSTMParams(w_x=Tensor(np.zeros((3, 16)), requires_grad=True),
                            w_h=Tensor(np.zeros((4, 16)), requires_grad=True),
                            b=Tensor(np.zeros(16), requires_grad=True))
        h, c = ad.recurrent_cell(Tensor(np.ones((2, 3))),
                                 Tensor(np.zeros((2, 4))),
                                 Tensor(np.zeros((2, 4))), params)
        np.testing.assert_array_equal(h.data, np.zeros((2, 4)))

    def test_hidden_bounded_by_tanh(self):
        rng = np.random.default_rng(1)
        params = LSTMParams.init(rng, 3, 8)
        x = Tensor(rng.standard_normal((4, 3)) * 5.0)
        h = Tensor(np.zeros((4, 8)))
        c = Tensor(np.zeros((4, 8)))
        for _ in range(50):
            h, c = ad.recurrent_cell(x, h, c, params)
        assert np.all(np.abs(h.data) < 1.0)

    def test_bptt_gradient_through_five_steps(self):
        rng = np.random.default_rng(8)
        params = LSTMParams.init(rng, 2, 5)
        xs = [Tensor(rng.standard_normal((3, 2))) for _ in range(5)]

        def loss():
            h = Tensor(np.zeros((3, 5)))
            c = Tensor(np.zeros((3, 5)))
            for x in xs:
                h, c = ad.recurrent_cell(x, h, c, params)
            return ad.tsum(ad.mul(h, h))

        check_grads(loss, [params.w_x, params.w_h, params.b], rng, tol=1e-5)

    def test_shape_mismatch_rejected(self):
        rng = np.random.default_rng(0)
        params = LSTMParams.init(rng, 3, 4)
        with pytest.raises(ValueError):
            ad.recurrent_cell(Tensor(np.zeros((2, 3))),
                              Tensor(np.zeros((3, 4))),
                              Tensor(np.zeros((3, 4))), params)


class TestGraphLayer:
    def test_two_node_hand_example(self):
        # fully connected pair + self-loops: degrees 2, coefficients 1/2
        h = Tensor(np.array([[1.0, 0.0], [0.0, 1.0]]))
        out = ad.gnn_layer(h, [(0, 1)], Tensor(np.eye(2)), activation="relu")
        np.testing.assert_allclose(out.data, [[0.5, 0.5], [0.5, 0.5]])

    def test_single_node_identity(self):
        h = Tensor(np.array([[3.0, -2.0, 0.5]]))
        out = ad.gnn_layer(h, [], Tensor(np.eye(3)), activation="identity")
        np.testing.assert_allclose(out.data, h.data)

    def test_isolated_node_keeps_self_message(self):
        # node 2 has no explicit edges; the mandatory self-loop keeps it alive
        h = Tensor(np.array([[1.0], [2.0], [4.0]]))
        out = ad.gnn_layer(h, [(0, 1)], Tensor(np.eye(1)), activation="identity")
        assert out.data[2, 0] == pytest.approx(4.0)

    def test_edge_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            ad.gnn_layer(Tensor(np.ones((2, 2))), [(0, 5)], Tensor(np.eye(2)))

    def test_gradient_on_random_graph(self):
        rng = np.random.default_rng(123)
        h = Tensor(rng.standard_normal((4, 3)), requires_grad=True)
        w = Tensor(rng.standard_normal((3, 3)), requires_grad=True)
        edges = [(0, 1), (1, 2), (2, 3), (0, 3)]

        def loss():
            return ad.tsum(ad.gnn_layer(h, edges, w, activation="relu"))

        check_grads(loss, [h, w], rng, tol=1e-6)


class TestAdam:
    def test_zero_gradient_leaves_params_unchanged(self):
        p = Tensor(np.array([1.0, -2.0]), requires_grad=True)
        opt = ad.Adam({"p": p}, lr=0.1)
        p.grad = np.zeros(2)
        opt.step()
        np.testing.assert_array_equal(p.data, [1.0, -2.0])

    def test_first_step_is_lr_times_sign(self):
        value, m, v = ad.adam_step(np.array(1.0), np.array(1.0),
                                   np.array(0.0), np.array(0.0),
                                   t=1, lr=0.1)
        assert value == pytest.approx(0.9, abs=1e-8)

    def test_moments_decay_under_zero_gradients(self):
        p = Tensor(np.array([0.5]), requires_grad=True)
        opt = ad.Adam({"p": p}, lr=0.01)
        p.grad = np.array([1.0])
        opt.step()
        m_after_one = abs(opt._m["p"][0])
        for _ in range(50):
            p.grad = np.array([0.0])
            opt.step()
        assert abs(opt._m["p"][0]) < m_after_one * 1e-2


class TestCheckpoint:
    def test_roundtrip_and_byte_stability(self, tmp_path):
        rng = np.random.default_rng(0)
        params = {"layer.w": Tensor(rng.standard_normal((3, 2)), requires_grad=True),
                  "layer.b": Tensor(rng.standard_normal(2), requires_grad=True)}
        path = tmp_path / "ckpt.json"
        ad.save_checkpoint(path, params, meta={"hidden": 2})
        loaded, meta = ad.load_checkpoint(path)
        assert meta == {"hidden": 2}
        for name in params:
            np.testing.assert_array_equal(loaded[name].data, params[name].data)
        assert ad.checkpoint_bytes(params, {"hidden": 2}) == path.read_bytes()

    def test_version_mismatch_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"format_version": 99, "params": {}}')
        with pytest.raises(ValueError):
            ad.load_checkpoint(path)
