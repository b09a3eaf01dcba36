import pytest

from fclsim import backend


@pytest.fixture(params=backend.available_backends())
def kernel_backend(request):
    """Run a test once per available kernel backend."""
    prev = backend.active_backend()
    backend.set_backend(request.param)
    yield request.param
    backend.set_backend(prev)
