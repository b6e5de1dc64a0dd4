"""Acceptance criteria, one test each, with their tolerances and time limits.

Each test prints a single PASS/FAIL line; the terminal summary repeats them.
"""

import itertools
import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from commitcap.capacity import equivocation_gradient, equivocation_many, maximize_equivocation
from commitcap.channel import Channel, binary_entropy, bsc, bundled_channel, is_trivial, nonredundant_reduce, witness_error
from commitcap.cli import main
from commitcap.commitment import Verdict, build_codebook, derive_parameters, run_protocol, verify_codebook
from commitcap.security import (
    binding_attack,
    converse_audit,
    desk_book,
    measure_concealing,
    measure_soundness,
    remark_f_scheme,
)
from commitcap.typicality import chernoff_check, cond_typical_prob_exact, typical_prob_exact, verify_bound_suite


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0

    def ok(self):
        return self.elapsed < self.limit


def verdict(number, ok, timer, detail=""):
    print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} ({timer.elapsed:.2f} s < {timer.limit} s) {detail}")
    assert ok, f"criterion {number} failed: {detail}"


def test_criterion_1_capacity_channel_v(capsys):
    with Timer(1.0) as t:
        code = main(["channel", "info", "--channel", "V", "--json"])
        cap = json.loads(capsys.readouterr().out)["sections"]["capacity"][0]
    ok = (
        code == 0
        and abs(cap["C"] - 0.3219) <= 1e-3
        and np.allclose(cap["argmax_C"], [0.4, 0.6], atol=1e-3)
        and abs(cap["C_com"] - 0.6942) <= 1e-3
        and np.allclose(cap["argmax_com"], [1 - math.sqrt(0.2), math.sqrt(0.2)], atol=1e-3)
        and t.ok()
    )
    with capsys.disabled():
        verdict(1, ok, t, f"C={cap['C']:.6f} C_com={cap['C_com']:.6f}")


def test_criterion_2_bsc_family(capsys):
    with Timer(5.0) as t:
        good = []
        for p in (0.05, 0.1, 0.25, 0.45):
            r = maximize_equivocation(bsc(p))
            good.append(abs(r.value - binary_entropy(p)) <= 1e-6 and np.allclose(r.argmax, 0.5, atol=1e-4))
        for p in (0.0, 0.5, 1.0):
            r = maximize_equivocation(bsc(p))
            good.append(is_trivial(bsc(p)) and r.method == "trivial" and r.value == 0.0)
    with capsys.disabled():
        verdict(2, all(good) and t.ok(), t, f"{sum(good)}/7 channels")


def test_criterion_3_channel_t(capsys):
    with Timer(1.0) as t:
        T = bundled_channel("T")
        red = nonredundant_reduce(T)
        removed = dict(red.removed_symbols)
        ok = (
            list(removed) == ["a"]
            and witness_error(T, "a", removed["a"]) <= 1e-9
            and is_trivial(T)
            and maximize_equivocation(T).value == 0.0
        )
    with capsys.disabled():
        verdict(3, ok and t.ok(), t, f"witness={removed.get('a')}")


def test_criterion_4_remark_f_exact(capsys):
    with Timer(1.0) as t:
        W, book, rep = remark_f_scheme()
        exh = binding_attack(book, W, "exhaustive").delta_bind_measured.value
        audit = converse_audit(W, book)
    ok = (
        rep.epsilon_measured.value == Fraction(0)
        and 1 - rep.delta_sound_measured.value == Fraction(1)
        and rep.delta_bind_measured.value == Fraction(1, 2)
        and exh == 0.5
        and audit.all_checks_pass
        and audit.holds
        and abs(audit.max_equivocation - 1.0) <= 1e-9
        and t.ok()
    )
    with capsys.disabled():
        verdict(4, ok, t, f"eps={rep.epsilon_measured.value} bind={rep.delta_bind_measured.value} "
                          f"max H(X|Z)={audit.max_equivocation:.9f}")


def test_criterion_5_bound_suite(capsys):
    grid = [(n, e) for n in (20, 50, 100) for e in (0.05, 0.1, 0.2)]
    wanted = {"typ:probability", "c-typ:probability", "typ:upper", "typ:lower", "c-typ:in:typ"}
    with Timer(30.0) as t:
        res = verify_bound_suite(bsc(0.1), [0.5, 0.5], grid, trials=10_000, seed=0)
    checked = [r for r in res if r.bound_name in wanted]
    violations = [(r.bound_name, r.detail["n"], r.detail["eps"]) for r in checked if not r.satisfied]
    containment = [r for r in checked if r.bound_name == "c-typ:in:typ"]
    ok = (
        not violations
        and len(checked) == 5 * len(grid)
        and all(r.detail["samples"] == 10_000 and r.measured_value == 0 for r in containment)
        and all(r.method == "exact" for r in checked if r.bound_name != "c-typ:in:typ")
        and t.ok()
    )
    with capsys.disabled():
        verdict(5, ok, t, f"{len(checked)} checks, violations={violations}")


def test_criterion_6_chernoff(capsys):
    with Timer(30.0) as t:
        res = [chernoff_check(p, eta, N, trials=100_000, seed=i)
               for i, (p, eta, N) in enumerate([(0.5, 0.2, 100), (0.1, 1.0, 200), (0.3, 0.5, 400)])]
    ok = all(r.satisfied for r in res) and t.ok()
    with capsys.disabled():
        verdict(6, ok, t, " ".join(f"{r.measured_value:.2e}<={r.analytical_value:.2e}" for r in res))


def test_criterion_7_desk_protocol(capsys):
    W = bsc(0.1)
    with Timer(300.0) as t:
        params = derive_parameters(W, [0.5, 0.5], 1000, 0.2, "desk", K=4, L=4, eps_test=0.05)
        book = build_codebook(W, params, 4, 4, seed=7)
        structure = verify_codebook(book)
        runs = [run_protocol(book, W, 1 + i % 4, i) for i in range(2000)]
        honest = float(np.mean([r.verdict is Verdict.ACC for r in runs]))
        sound = measure_soundness(book, W, 2000, seed=1)
        mid = binding_attack(book, W, "midpoint", trials=2000, seed=2).delta_bind_measured
        small = desk_book(W, 12, 0.1, 2, 4, seed=5, eps_test=0.2)
        conceal = measure_concealing(small, W, 1, 2)
    d = conceal.detail
    ok = (
        structure["distance_ok"] and structure["all_typical"]
        and honest >= 0.99
        and 1 - sound.value >= 0.99
        and mid.value <= 0.01
        and conceal.method == "exact"
        and d["triangle_ok"]
        and conceal.value <= d["distance_to_product_a"] + d["distance_to_product_a_prime"] + 1e-12
        and t.ok()
    )
    with capsys.disabled():
        verdict(7, ok, t, f"honest={honest:.4f} midpoint={mid.value:.4f} TV(n=12)={conceal.value:.4f} "
                          f"<= {d['distance_to_product_a']:.4f}+{d['distance_to_product_a_prime']:.4f}")


def test_criterion_8_theory_parameters(capsys):
    with Timer(1.0) as t:
        ps = derive_parameters(bsc(0.1), [0.5, 0.5], 10**6, 0.05, "theory")
    n_cross = ps.crossover_n_epsilon
    ok = (
        abs(ps.eta - 1.6) <= 1e-9
        and abs(ps.tau - 3.125e-8) <= 1e-20
        and ps.epsilon_bound >= 0.01  # vacuous at this n
        and 50 * 4 * 2.0 ** (-n_cross * ps.tau) < 0.01 <= 50 * 4 * 2.0 ** (-(n_cross - 1) * ps.tau)
        and t.ok()
    )
    with capsys.disabled():
        verdict(8, ok, t, f"eta={ps.eta} tau={ps.tau:.6g} eps_bound(n=1e6)={ps.epsilon_bound:.3g} "
                          f"crossover n={n_cross}")


def _brute_typical(P, n, eps):
    k = len(P)
    words = np.array(list(itertools.product(range(k), repeat=n)), dtype=np.int64)
    counts = np.stack([(words == a).sum(axis=1) for a in range(k)], axis=1)
    ok = np.all(np.abs(counts - n * np.asarray(P)) <= n * eps + 1e-9, axis=1)
    ok &= np.all((counts == 0) | (np.asarray(P) > 0), axis=1)
    return float(np.prod(np.asarray(P)[words], axis=1)[ok].sum())


def _brute_cond_typical(W, xn, eps):
    n = len(xn)
    zs = np.array(list(itertools.product(range(W.nz), repeat=n)), dtype=np.int64)
    ok = np.ones(len(zs), dtype=bool)
    for a in range(W.nx):
        pos = xn == a
        for b in range(W.nz):
            N = ((zs == b) & pos).sum(axis=1)
            ok &= np.abs(N - pos.sum() * W.matrix[a, b]) <= n * eps + 1e-9
            if W.matrix[a, b] == 0:
                ok &= N == 0
    return float(np.prod(W.matrix[xn, zs], axis=1)[ok].sum())


def test_criterion_9_oracle_equivalence(capsys):
    W3 = Channel(("a", "b", "c"), ("0", "1", "2"), [[0.7, 0.2, 0.1], [0.1, 0.8, 0.1], [0.2, 0.2, 0.6]])
    channels = [bundled_channel("V"), bsc(0.1), bundled_channel("F"), bundled_channel("T"), W3]
    worst_prob, worst_grad = 0.0, 0.0
    with Timer(60.0) as t:
        for P in ([0.5, 0.5], [0.3, 0.7], [0.5, 0.3, 0.2], [0.6, 0.4, 0.0]):
            for n in range(1, 13):
                for eps in (0.05, 0.1, 0.2):
                    diff = abs(typical_prob_exact(P, n, eps) - _brute_typical(P, n, eps))
                    worst_prob = max(worst_prob, diff)
        rng = np.random.default_rng(0)
        for n in (4, 8, 12):
            xn = rng.integers(0, 3, n)
            for eps in (0.1, 0.2):
                diff = abs(cond_typical_prob_exact(W3, xn, eps) - _brute_cond_typical(W3, xn, eps))
                worst_prob = max(worst_prob, diff)
        for W in channels:
            for _ in range(100):
                P = rng.dirichlet(np.full(W.nx, 2.0))
                P = np.maximum(P, 1e-3)
                P /= P.sum()
                g = equivocation_gradient(W, P)
                h = 1e-4 * P.min()
                fd = np.array([(equivocation_many(W, P + h * e)[0] - equivocation_many(W, P - h * e)[0]) / (2 * h)
                               for e in np.eye(W.nx)])
                worst_grad = max(worst_grad, float(np.abs(g - fd).max()))
    ok = worst_prob <= 1e-12 and worst_grad <= 1e-5 and t.ok()
    with capsys.disabled():
        verdict(9, ok, t, f"max |exact-brute|={worst_prob:.2e} max |grad-fd|={worst_grad:.2e}")
