import math

import numpy as np
import pytest

from uqa import grover, spectral
from uqa.operators import alpha_curve


def test_instance_layout():
    inst = grover.grover_instance(grover.GroverSpec(4, 2))
    np.testing.assert_array_equal(inst.theta, [np.pi, np.pi, 0.0, np.pi])
    assert inst.s_t == pytest.approx(0.5)


@pytest.mark.parametrize("n", [4, 64, 1000])
def test_moments_and_overlap(n):
    inst = grover.grover_instance(grover.GroverSpec(n, n - 1))
    m = spectral.moments(inst)
    assert m.lambda1 == 0.0 and m.lambda2 == 0.0 and m.B == 1.0
    assert inst.s_t == pytest.approx(1 / math.sqrt(n), rel=1e-15)


@pytest.mark.parametrize("n", [2, 0])
def test_spec_rejects_tiny_n(n):
    with pytest.raises(ValueError):
        grover.GroverSpec(n)


def test_spec_rejects_bad_target():
    with pytest.raises(ValueError):
        grover.GroverSpec(8, 8)


@pytest.mark.parametrize(
    "n, q, floor",
    [(4, 1, 1.0 - 1e-9), (1024, 25, 0.999), (2**14, 100, 0.9997)],
)
def test_run_grover(n, q, floor):
    res = grover.run_grover(grover.GroverSpec(n, n // 3))
    assert res.q_used == q
    assert res.success_probability >= floor
    assert res.success_probability <= 1.0 + 1e-12
    # direct closed form sin((2q+1) asin(1/sqrt N))
    assert res.success_probability == pytest.approx(grover.closed_form_alpha(n, q) ** 2, abs=1e-10)


@pytest.mark.parametrize("n", [2**k for k in range(6, 13)])
def test_peak_is_local_max(n):
    inst = grover.grover_instance(grover.GroverSpec(n, 1))
    q = grover.grover_iterations(n)
    p = np.abs(alpha_curve(inst, q + 3)) ** 2
    assert p[q] > p[q - 3] and p[q] > p[q + 3]


def test_query_scaling():
    qs = {k: grover.grover_iterations(2**k) for k in range(8, 13)}
    for k in range(8, 11):
        assert 1.9 <= qs[k + 2] / qs[k] <= 2.1


def test_predicted_angles_exact():
    for n in (16, 256, 4096):
        p = spectral.predict(grover.grover_instance(grover.GroverSpec(n, 0)))
        assert p.eta == math.pi / 4 and p.delta_cap == 0.0


def test_sampling_is_seeded():
    spec = grover.GroverSpec(64, 5)
    a = grover.run_grover(spec, shots=500, rng=np.random.default_rng(1))
    b = grover.run_grover(spec, shots=500, rng=np.random.default_rng(1))
    assert a.shots == b.shots
    assert abs(a.shots["frequency"] - a.success_probability) < 0.05
