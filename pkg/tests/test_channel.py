import json
import math

import numpy as np
import pytest

from commitcap.channel import (
    BUNDLED,
    Channel,
    ChannelError,
    binary_entropy,
    bsc,
    bundled_channel,
    dump_channel,
    entropy,
    equivocation,
    hull_distance,
    is_trivial,
    load_channel,
    mutual_information,
    nonredundant_reduce,
    output_distribution,
    separation_eta,
    witness_error,
)


def test_load_roundtrip():
    W = bundled_channel("V")
    again = load_channel(dump_channel(W))
    assert np.array_equal(again.matrix, W.matrix)
    assert again.digest() == W.digest()


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_channels_load(name):
    W = bundled_channel(name)
    assert np.allclose(W.matrix.sum(axis=1), 1)


def test_f_channel_rows():
    F = bundled_channel("F")
    for x in range(4):
        support = set(np.flatnonzero(F.matrix[x]))
        assert support == {x, (x + 1) % 4}
        assert np.allclose(F.matrix[x][list(support)], 0.5)


@pytest.mark.parametrize(
    "obj, msg",
    [
        ({"input": ["a"], "output": ["0", "1"], "matrix": [[0.5, 0.6]]}, "sums"),
        ({"input": ["a"], "output": ["0", "1"], "matrix": [[1.5, -0.5]]}, "negative"),
        ({"input": ["a", "a"], "output": ["0"], "matrix": [[1], [1]]}, "duplicate"),
        ({"input": ["a"], "output": ["0", "1"], "matrix": [[1, 0], [0, 1]]}, "shape"),
        ({"input": [], "output": ["0"], "matrix": []}, "empty"),
    ],
)
def test_malformed_channels(obj, msg):
    with pytest.raises(ChannelError):
        load_channel(json.dumps(obj))


def test_bad_json():
    with pytest.raises(ChannelError):
        load_channel("{not json")


def test_renormalizes_tiny_drift():
    W = Channel(("a",), ("0", "1"), [[0.5, 0.5 + 5e-10]])
    assert W.matrix.sum() == pytest.approx(1.0, abs=1e-15)


def test_entropy_conventions():
    assert entropy([1.0, 0.0]) == 0.0
    assert entropy([0.25] * 4) == pytest.approx(2.0)
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0


def test_equivocation_chain_rule():
    # H(X|Z) = H(X) - I(X;Z)
    rng = np.random.default_rng(3)
    for _ in range(20):
        M = rng.dirichlet(np.ones(4), size=3)
        W = Channel(("a", "b", "c"), tuple("0123"), M)
        P = rng.dirichlet(np.ones(3))
        assert equivocation(W, P) == pytest.approx(entropy(P) - mutual_information(W, P), abs=1e-12)


def test_equivocation_direct_joint():
    W = bundled_channel("V")
    P = np.array([0.3, 0.7])
    J = P[:, None] * W.matrix
    Q = J.sum(axis=0)
    direct = -sum(J[x, z] * math.log2(J[x, z] / Q[z]) for x in range(2) for z in range(2) if J[x, z] > 0)
    assert equivocation(W, P) == pytest.approx(direct, abs=1e-14)
    assert np.allclose(output_distribution(W, P), Q)


def test_reduction_of_t():
    T = bundled_channel("T")
    red = nonredundant_reduce(T)
    assert list(red.reduced_channel.input_alphabet) == ["b", "c"]
    (sym, witness), = red.removed_symbols
    assert sym == "a"
    assert witness == pytest.approx({"b": 0.5, "c": 0.5})
    assert witness_error(T, sym, witness) <= 1e-9
    assert is_trivial(T)


def test_dedupe_keeps_lowest_index():
    W = Channel(("x", "y", "z"), ("0", "1"), [[0.2, 0.8], [0.9, 0.1], [0.2, 0.8]])
    red = nonredundant_reduce(W)
    assert red.deduplicated == [["x", "z"]]
    assert list(red.reduced_channel.input_alphabet) == ["x", "y"]


@pytest.mark.parametrize("p, trivial", [(0, True), (0.5, True), (1, True), (0.1, False), (0.45, False)])
def test_bsc_triviality(p, trivial):
    assert is_trivial(bsc(p)) is trivial


def test_eta_values():
    # BSC(p): distance between the two rows is 2|1-2p|
    assert separation_eta(bsc(0.1)) == pytest.approx(1.6, abs=1e-9)
    assert separation_eta(bundled_channel("F")) == pytest.approx(1.0, abs=1e-9)
    assert math.isinf(separation_eta(Channel(("a",), ("0",), [[1.0]])))
    with pytest.raises(ChannelError):
        separation_eta(bundled_channel("T"))


def test_hull_distance_weights_attain_distance():
    rng = np.random.default_rng(0)
    pts = rng.dirichlet(np.ones(5), size=4)
    target = rng.dirichlet(np.ones(5))
    d, lam = hull_distance(target, pts)
    assert lam.min() >= 0 and lam.sum() == pytest.approx(1)
    assert d == pytest.approx(np.abs(target - lam @ pts).sum(), abs=1e-12)
    # no vertex of the hull is closer than the optimum
    assert d <= min(np.abs(target - p).sum() for p in pts) + 1e-9
