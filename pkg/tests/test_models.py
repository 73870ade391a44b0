import numpy as np
import pytest

from stockcast.errors import ArityMismatch, WindowTooSmall
from stockcast.models import (
    ArchSpec,
    build_cnn,
    build_gru,
    build_lstm,
    build_mlp,
    build_model,
    build_surrogate,
)
from stockcast.nn.autodiff import Tensor
from stockcast.nn.gradcheck import grad_check
from stockcast.nn.layers import mse


def zero_params(model):
    for _, p in model.params.items():
        p.data[:] = 0.0
    return model


def test_mlp_param_count():
    assert build_mlp(3, 1).n_params() == 353


def test_mlp_output_arity():
    model = build_mlp(30, 7)
    assert model.output_arity == 7
    assert model(np.linspace(0, 1, 30)).shape == (7,)


def test_mlp_zero_init_zero_output():
    model = zero_params(build_mlp(5, 2))
    assert np.allclose(model(np.zeros(5)), 0.0)


def test_mlp_count_grows_with_w():
    assert build_mlp(15, 1).n_params() > build_mlp(3, 1).n_params()


def test_cnn_shape_arithmetic():
    model = build_cnn(15, 1)
    assert model.meta["conv_lengths"] == (13, 11, 5)
    assert model.meta["flat"] == 160


def test_cnn_window_too_small_without_auto_kernel():
    with pytest.raises(WindowTooSmall):
        build_cnn(3, 1, auto_kernel=False)


def test_cnn_auto_kernel_shrinks():
    model = build_cnn(3, 1)
    assert model.meta["kernel"] == 1
    assert model(np.array([0.1, 0.2, 0.3])).shape == (1,)


def test_cnn_output_arity():
    for h in (1, 7, 28):
        assert build_cnn(30, h).output_arity == h


def test_recurrent_zero_init_zero_output():
    for build in (build_gru, build_lstm):
        model = zero_params(build(4, 2, hidden=(6, 5)))
        assert np.allclose(model(np.array([0.5, -0.5, 1.0, 2.0])), 0.0)


def test_gru_layer1_param_count():
    model = build_gru(3, 1)
    layer1 = sum(p.data.size for name, p in model.params.items()
                 if name.startswith("r0."))
    assert layer1 == 3 * (256 * 1 + 256 * 256 + 256) == 198144


def test_recurrent_count_independent_of_w():
    assert build_gru(3, 1, hidden=(8, 6)).n_params() == \
        build_gru(15, 1, hidden=(8, 6)).n_params()
    assert build_lstm(3, 1, hidden=(8, 6)).n_params() == \
        build_lstm(15, 1, hidden=(8, 6)).n_params()


def test_same_seed_identical_params():
    for kind in ("MLP", "CNN", "GRU", "LSTM"):
        a = build_surrogate(kind, 7, 2, seed=11)
        b = build_surrogate(kind, 7, 2, seed=11)
        assert a.params.names() == b.params.names()
        for name in a.params.names():
            assert np.array_equal(a.params[name].data, b.params[name].data)


def test_different_seed_different_params():
    a = build_mlp(5, 1, seed=0)
    b = build_mlp(5, 1, seed=1)
    assert not np.array_equal(a.params["l0.W"].data, b.params["l0.W"].data)


@pytest.mark.parametrize("kind", ["MLP", "CNN", "GRU", "LSTM"])
def test_every_architecture_gradchecks(kind):
    rng = np.random.default_rng(12)
    model = build_surrogate(kind, 7, 2, seed=3)
    x = rng.uniform(0.1, 0.9, size=(2, 7))
    y = rng.uniform(0.1, 0.9, size=(2, 2))
    err = grad_check(lambda p: mse(model.forward(Tensor(x)), Tensor(y)), model.params)
    assert err < 1e-4


def test_forward_arity_checks():
    model = build_mlp(5, 1)
    with pytest.raises(ArityMismatch):
        model(np.zeros(4))
    with pytest.raises(ArityMismatch):
        model.forward(Tensor(np.zeros((2, 4))))


def test_archspec_build_and_validation():
    spec = ArchSpec("MLP", 5, 2)
    model = spec.build(seed=4)
    assert (model.kind, model.w, model.h) == ("MLP", 5, 2)
    with pytest.raises(ValueError):
        ArchSpec("VAE", 5, 2)
    with pytest.raises(ValueError):
        build_model("VAE", 5, 2)


def test_relu_output_clips_negative():
    # the MLP/CNN heads keep relu, so predictions are never negative
    rng = np.random.default_rng(13)
    model = build_mlp(5, 1, seed=2)
    for _ in range(20):
        assert model(rng.uniform(0, 1, 5))[0] >= 0.0
