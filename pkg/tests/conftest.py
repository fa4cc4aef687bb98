import numpy as np
import pytest

from uqa import _accel, grover, oracle

ACCEPTANCE_LINES = []


def dense_U(inst_or_phases, s=None):
    """U = (1 - 2 s s^T) diag(e^{i theta}) as a dense matrix; independent of the kernels."""
    if s is None:
        theta, s = inst_or_phases.theta, inst_or_phases.s
    else:
        theta = inst_or_phases
    n = len(s)
    refl = np.eye(n) - 2.0 * np.outer(s, s)
    return refl @ np.diag(np.exp(1j * np.asarray(theta)))


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile the numba kernels once so runtime budgets measure the algorithms
    inst = grover.grover_instance(grover.GroverSpec(4, 0))
    oracle.secular_roots(inst)
    oracle.secular_value(inst, 0.5)
    grover.run_grover(grover.GroverSpec(4, 0))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=["numba", "numpy"])
def backend(request, monkeypatch):
    """Route the dispatching kernels through one backend for the test."""
    if request.param == "numba":
        if not _accel.HAVE_NUMBA:
            pytest.skip("numba not installed")
        monkeypatch.setattr(_accel, "evolve", _accel.evolve_numba)
        monkeypatch.setattr(_accel, "bisect_roots", _accel.bisect_roots_numba)
        monkeypatch.setattr(_accel, "offset_secular", _accel.offset_secular_numba)
    else:
        monkeypatch.setattr(_accel, "evolve", _accel.evolve_numpy)
        monkeypatch.setattr(_accel, "bisect_roots", _accel.bisect_roots_numpy)
        monkeypatch.setattr(_accel, "offset_secular", _accel.offset_secular_numpy)
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
