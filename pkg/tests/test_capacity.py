import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from commitcap.capacity import (
    AscentOptions,
    blahut_arimoto,
    capacity_report,
    equivocation_gradient,
    equivocation_many,
    maximize_equivocation,
    project_simplex,
)
from commitcap.channel import Channel, ChannelError, binary_entropy, bsc, bundled_channel, equivocation

# independent 1-D bounded search on the V channel (scipy, xatol 1e-12)
V_CCOM = 0.6942419136306173
V_C = math.log2(5 / 4)


def test_v_channel_values():
    V = bundled_channel("V")
    rep = capacity_report(V)
    assert rep.C_com == pytest.approx(V_CCOM, abs=1e-9)
    assert rep.argmax_com[1] == pytest.approx(1 / math.sqrt(5), abs=1e-6)
    assert rep.C == pytest.approx(V_C, abs=1e-9)
    assert rep.argmax_C == pytest.approx([0.4, 0.6], abs=1e-6)
    assert rep.exceeds_ceiling


def test_scalar_oracle_agrees():
    V = bundled_channel("V")
    r = minimize_scalar(lambda p: -equivocation(V, [1 - p, p]), bounds=(0, 1), method="bounded",
                        options={"xatol": 1e-12})
    assert -r.fun == pytest.approx(V_CCOM, abs=1e-12)


@pytest.mark.parametrize("p", [0.05, 0.1, 0.25, 0.45])
def test_bsc_commitment_capacity(p):
    res = maximize_equivocation(bsc(p))
    assert res.value == pytest.approx(binary_entropy(p), abs=1e-9)
    assert res.argmax == pytest.approx([0.5, 0.5], abs=1e-6)


@pytest.mark.parametrize("p", [0.0, 0.5, 1.0])
def test_trivial_bsc(p):
    res = maximize_equivocation(bsc(p))
    assert res.method == "trivial" and res.value == 0.0


def test_removed_inputs_get_zero_mass():
    res = maximize_equivocation(bundled_channel("T"))
    assert res.argmax[0] == 0.0


def test_f_channel_capacity_is_one():
    res = maximize_equivocation(bundled_channel("F"), AscentOptions(restarts=8))
    assert res.value == pytest.approx(1.0, abs=1e-9)


def test_blahut_arimoto_bsc():
    for p in (0.05, 0.2):
        r = blahut_arimoto(bsc(p))
        assert r.value == pytest.approx(1 - binary_entropy(p), abs=1e-9)
        hist = r.diagnostics["lower_history"]
        assert all(b >= a - 1e-12 for a, b in zip(hist, hist[1:]))


def test_grid_certificate_on_three_inputs():
    W = Channel(("a", "b", "c"), ("0", "1", "2"), [[0.7, 0.2, 0.1], [0.1, 0.8, 0.1], [0.2, 0.2, 0.6]])
    res = maximize_equivocation(W)
    assert res.diagnostics["certified"]
    assert res.value >= res.diagnostics["grid_value"] - 1e-12


def test_gradient_matches_central_differences():
    rng = np.random.default_rng(11)
    W = Channel(("a", "b", "c"), tuple("0123"), rng.dirichlet(np.ones(4), size=3))
    for _ in range(20):
        P = rng.dirichlet(np.ones(3) * 2)
        g = equivocation_gradient(W, P)
        h = 1e-6
        fd = [(equivocation_many(W, P + h * e)[0] - equivocation_many(W, P - h * e)[0]) / (2 * h)
              for e in np.eye(3)]
        assert np.allclose(g, fd, atol=1e-6)


def test_gradient_rejects_boundary():
    with pytest.raises(ChannelError):
        equivocation_gradient(bsc(0.1), [1.0, 0.0])


def test_projection():
    v = np.array([0.9, 0.8, -0.3])
    p = project_simplex(v)
    assert p.sum() == pytest.approx(1) and p.min() >= 0
    assert np.allclose(project_simplex(np.array([0.2, 0.3, 0.5])), [0.2, 0.3, 0.5])
