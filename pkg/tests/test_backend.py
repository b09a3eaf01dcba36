import numpy as np
import pytest

from fclsim import _kernels_py, backend

compiled = pytest.importorskip("fclsim._kernels_cy")


@pytest.fixture
def random_case():
    rng = np.random.default_rng(17)
    sizes = np.array([5, 11, 7, 4], dtype=np.int64)
    n_params = sum(int(a * b + b) for a, b in zip(sizes, sizes[1:]))
    params = rng.normal(size=n_params)
    inputs = rng.normal(size=(23, 5))
    labels = rng.integers(0, 4, 23)
    return sizes, params, inputs, labels


@pytest.mark.parametrize("act", [0, 1])
def test_forward_agreement(random_case, act):
    sizes, params, inputs, _ = random_case
    a = _kernels_py.forward_logits(params, sizes, act, inputs)
    b = compiled.forward_logits(params, sizes, act, inputs)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("act", [0, 1])
def test_loss_grad_agreement(random_case, act):
    sizes, params, inputs, labels = random_case
    la, ga = _kernels_py.ce_loss_grad(params, sizes, act, inputs, labels)
    lb, gb = compiled.ce_loss_grad(params, sizes, act, inputs, labels)
    assert abs(la - lb) < 1e-12
    assert np.allclose(ga, gb, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("act", [0, 1])
def test_fisher_agreement(random_case, act):
    sizes, params, inputs, labels = random_case
    a = _kernels_py.fisher_diag(params, sizes, act, inputs, labels)
    b = compiled.fisher_diag(params, sizes, act, inputs, labels)
    assert np.all(a >= 0.0) and np.all(b >= 0.0)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("act", [0, 1])
def test_dlogits_backward_agreement(random_case, act):
    sizes, params, inputs, _ = random_case
    rng = np.random.default_rng(3)
    dlogits = rng.normal(size=(23, 4))
    a = _kernels_py.dlogits_backward(params, sizes, act, inputs, dlogits)
    b = compiled.dlogits_backward(params, sizes, act, inputs, dlogits)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


def test_backend_switch_roundtrip():
    prev = backend.active_backend()
    try:
        for name in backend.available_backends():
            backend.set_backend(name)
            assert backend.active_backend() == name
        with pytest.raises(ValueError):
            backend.set_backend("fortran")
    finally:
        backend.set_backend(prev)
