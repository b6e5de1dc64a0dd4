import itertools
from fractions import Fraction

import numpy as np
import pytest

from commitcap.channel import Channel, bsc
from commitcap.commitment import Codebook, build_codebook, derive_parameters
from commitcap.security import (
    best_joint_acceptance,
    binding_attack,
    converse_audit,
    desk_book,
    exact_scheme_values,
    joint_acceptance_exact,
    measure_concealing,
    measure_soundness,
    message_output_pmf,
    midpoint_word,
    remark_f_scheme,
    tv_distance,
)
from commitcap.typicality import EnumerationLimitError, cond_typical_batch

IDENTITY = Channel(("0", "1"), ("0", "1"), np.eye(2))


def identity_book(words, eps_test=0.3):
    near = Channel(("0", "1"), ("0", "1"), [[0.99, 0.01], [0.01, 0.99]])
    words = np.asarray(words)
    params = derive_parameters(near, [0.5, 0.5], words.shape[-1], 0.1, "desk", eps_test=eps_test, eps_code=1.0)
    return Codebook(words, params, IDENTITY, 0)


@pytest.fixture(scope="module")
def small_book():
    return desk_book(bsc(0.1), 12, 0.1, 2, 4, seed=5, eps_test=0.2)


@pytest.fixture(scope="module")
def bsc03_book():
    return desk_book(bsc(0.3), 6, 0.1, 2, 2, seed=3)


def test_remark_f_exact_values():
    W, book, rep = remark_f_scheme()
    assert rep.epsilon_measured.value == Fraction(0)
    assert rep.delta_sound_measured.value == Fraction(0)
    assert rep.delta_bind_measured.value == Fraction(1, 2)
    assert measure_concealing(book, None, 1, 2).value == 0.0
    assert binding_attack(book, None, "exhaustive").delta_bind_measured.value == 0.5


def test_remark_f_acceptance_is_support_test():
    W, book, _ = remark_f_scheme()
    for b, c in itertools.product(range(2), repeat=2):
        x = b + 2 * c
        zs = np.arange(4)[:, None]
        acc = cond_typical_batch(zs, W, book.codeword(b + 1, c + 1), book.eps_test)
        assert acc.tolist() == [((z - x) % 4) in (0, 1) for z in range(4)]


def test_identity_channel_extremes():
    book = identity_book([[[0, 0, 0, 0]], [[1, 1, 1, 1]]])
    assert measure_concealing(book, None, 1, 2).value == pytest.approx(1.0)
    assert binding_attack(book, None, "exhaustive").delta_bind_measured.value == 0.0
    assert measure_soundness(book, None, 500, 0).value == 0.0


def test_concealing_symmetry_triangle(small_book):
    book = desk_book(bsc(0.1), 10, 0.1, 3, 2, seed=8, eps_test=0.2)
    d = {(a, b): measure_concealing(book, None, a, b).value for a in (1, 2, 3) for b in (1, 2, 3) if a != b}
    assert d[(1, 2)] == pytest.approx(d[(2, 1)], abs=1e-15)
    assert d[(1, 3)] <= d[(1, 2)] + d[(2, 3)] + 1e-12
    e = measure_concealing(small_book, None, 1, 2)
    assert e.detail["triangle_ok"]
    with pytest.raises(ValueError):
        measure_concealing(small_book, None, 1, 1)
    with pytest.raises(EnumerationLimitError):
        measure_concealing(small_book, None, 1, 2, limit=100)


def test_concealing_mc_biased_upward(small_book):
    exact = measure_concealing(small_book, None, 1, 2).value
    mc = measure_concealing(small_book, None, 1, 2, "mc", trials=20_000, seed=1)
    assert mc.value >= exact - 3 * mc.stderr
    assert "diagnostic" in mc.detail["caveat"]


def test_message_pmf_is_key_average(small_book):
    W = small_book.channel
    pmf = message_output_pmf(small_book, W, 1)
    assert pmf.sum() == pytest.approx(1.0, abs=1e-12)
    # spot-check one output word against the product formula
    z = np.array([0, 1] * 6)
    idx = int("".join(map(str, z)), 2)
    direct = np.mean([np.prod(W.matrix[small_book.codeword(1, m), z]) for m in range(1, 5)])
    assert pmf[idx] == pytest.approx(direct, rel=1e-12)


def test_soundness_cross_check():
    book = desk_book(bsc(0.1), 40, 0.1, 2, 2, seed=2, eps_test=0.1)
    est = measure_soundness(book, None, 20_000, seed=3)
    assert est.detail["within_3se"]


def test_soundness_thread_invariance():
    book = desk_book(bsc(0.1), 40, 0.1, 2, 2, seed=2, eps_test=0.1)
    a = measure_soundness(book, None, 3500, seed=4, threads=1)
    b = measure_soundness(book, None, 3500, seed=4, threads=3)
    assert a.value == b.value


def test_joint_acceptance_exact_vs_brute_force(bsc03_book):
    W = bsc03_book.channel
    c1, c2 = bsc03_book.codeword(1, 1), bsc03_book.codeword(2, 2)
    zs = np.array(list(itertools.product(range(2), repeat=6)))
    both = cond_typical_batch(zs, W, c1, bsc03_book.eps_test) & cond_typical_batch(zs, W, c2, bsc03_book.eps_test)
    for x in itertools.product(range(2), repeat=6):
        p = np.prod(W.matrix[np.array(x), zs], axis=1)
        assert joint_acceptance_exact(W, c1, c2, x, bsc03_book.eps_test) == pytest.approx(p[both].sum(), abs=1e-12)


def test_exhaustive_matches_all_words(bsc03_book):
    W = bsc03_book.channel
    c1, c2 = bsc03_book.codeword(1, 2), bsc03_book.codeword(2, 1)
    best, x = best_joint_acceptance(W, c1, c2, bsc03_book.eps_test)
    brute = max(joint_acceptance_exact(W, c1, c2, w, bsc03_book.eps_test)
                for w in itertools.product(range(2), repeat=6))
    assert best == pytest.approx(brute, abs=1e-12)
    assert joint_acceptance_exact(W, c1, c2, x, bsc03_book.eps_test) == pytest.approx(best, abs=1e-12)


def test_exhaustive_dominates_searches(bsc03_book):
    exh = binding_attack(bsc03_book, None, "exhaustive").delta_bind_measured.value
    for strategy in ("midpoint", "hillclimb"):
        rep = binding_attack(bsc03_book, None, strategy, trials=2000, seed=1, budget=40)
        assert rep.delta_bind_measured.detail["exact_value_of_word"] <= exh + 1e-12


def test_exact_rational_oracle_agrees(bsc03_book):
    vals = exact_scheme_values(bsc03_book)
    assert float(vals["delta_bind"]) == pytest.approx(
        binding_attack(bsc03_book, None, "exhaustive").delta_bind_measured.value, abs=1e-12)
    assert float(vals["epsilon"]) == pytest.approx(measure_concealing(bsc03_book, None, 1, 2).value, abs=1e-12)


def test_midpoint_word():
    c1 = np.array([0, 0, 0, 0, 1])
    c2 = np.array([1, 1, 1, 1, 1])
    assert midpoint_word(c1, c2).tolist() == [1, 1, 0, 0, 1]


def test_binding_needs_two_messages():
    book = desk_book(bsc(0.1), 20, 0.1, 1, 2, seed=0)
    with pytest.raises(ValueError):
        binding_attack(book, None, "midpoint", trials=10)


def test_converse_audit_f_scheme():
    W, book, _ = remark_f_scheme()
    audit = converse_audit(W, book)
    assert audit.I_A_Z == 0.0 and audit.H_A_given_ZX == 0.0
    assert audit.max_equivocation == pytest.approx(1.0, abs=1e-9)
    assert audit.all_checks_pass and audit.holds


def test_converse_audit_identity():
    book = identity_book([[[0, 0]], [[1, 1]]])
    audit = converse_audit(None, book)
    assert audit.epsilon == pytest.approx(1.0)
    assert audit.max_equivocation == 0.0
    assert audit.all_checks_pass and audit.holds


def test_converse_audit_bsc03(bsc03_book):
    audit = converse_audit(None, bsc03_book)
    assert audit.all_checks_pass
    assert audit.H_X_given_Z <= audit.sum_H_Xk_given_Zk + 1e-9
    assert audit.H_A - audit.I_A_Z - audit.H_A_given_ZX <= audit.H_X_given_Z + 1e-9
    assert audit.side_bits == 0


def test_tv_distance_basics():
    p = np.array([0.2, 0.8])
    assert tv_distance(p, p) == 0
    assert tv_distance(np.array([1.0, 0]), np.array([0, 1.0])) == 1
