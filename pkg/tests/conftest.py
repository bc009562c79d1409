import pytest

import ilpk.backend as backend_mod
from ilpk import _pykernels


def pytest_report_header(config):
    return f"ilpk kernel backend: {backend_mod.BACKEND_NAME}"


@pytest.fixture(params=["default", "python"])
def any_backend(request, monkeypatch):
    """Run a test under the selected backend and the pure-Python fallback."""
    if request.param == "python":
        monkeypatch.setattr(backend_mod, "_impl", _pykernels)
    return request.param
