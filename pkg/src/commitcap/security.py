"""Measuring concealment, soundness and binding of a commitment codebook.

Exact routines enumerate output words (or, for binding, per-cell input
compositions) and are deterministic. Monte Carlo routines draw from streams
derived from ``(seed, tags)`` and report a standard error.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .capacity import AscentOptions, maximize_equivocation
from .channel import Channel, binary_entropy, is_trivial, nonredundant_reduce
from .commitment import Codebook, build_codebook, derive_parameters
from .rng import chunk_sizes, map_ordered, rng_for
from .typicality import (
    COUNT_SLACK,
    TYPE_LIMIT,
    EnumerationLimitError,
    compositions,
    cond_typical_batch,
    cond_typical_prob_exact,
    count_pmf,
)

ENUM_LIMIT = 10**7


@dataclass
class Estimate:
    value: Any  # float, or Fraction for exact rational results
    stderr: float | None
    method: str
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        v = self.value
        out = {"value": float(v), "stderr": self.stderr, "method": self.method, "detail": self.detail}
        if isinstance(v, Fraction):
            out["exact"] = str(v)
        return out


@dataclass
class SecurityReport:
    epsilon_measured: Estimate | None = None
    delta_sound_measured: Estimate | None = None
    delta_bind_measured: Estimate | None = None
    analytical: dict | None = None
    attack_description: str = ""
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def opt(e):
            return None if e is None else e.to_dict()

        return {
            "epsilon": opt(self.epsilon_measured),
            "delta_sound": opt(self.delta_sound_measured),
            "delta_bind": opt(self.delta_bind_measured),
            "analytical": self.analytical,
            "attack_description": self.attack_description,
            "metadata": self.metadata,
        }


def _meta(book: Codebook, W: Channel, **extra) -> dict:
    return {"channel_hash": W.digest(), "codebook_hash": book.digest(), "mode": book.params.mode, **extra}


def _channel(book: Codebook, W: Channel | None) -> Channel:
    return book.channel if W is None else W


# -- exact output distributions ---------------------------------------------------------


def _check_enum(nz: int, n: int, limit: int) -> None:
    if nz**n > limit:
        raise EnumerationLimitError(f"|Z|^n = {nz}^{n} exceeds the enumeration limit {limit}")


def word_output_pmf(W: Channel, x) -> np.ndarray:
    """W^n_x over all output words, indexed big-endian in base |Z|."""
    out = np.ones(1)
    for letter in np.asarray(x):
        out = np.kron(out, W.matrix[letter])
    return out


def product_pmf(q: np.ndarray, n: int) -> np.ndarray:
    out = np.ones(1)
    for _ in range(n):
        out = np.kron(out, q)
    return out


def message_output_pmf(book: Codebook, W: Channel, a: int) -> np.ndarray:
    """Key-averaged output distribution of message ``a`` (1-based)."""
    rows = [word_output_pmf(W, book.codeword(a, m)) for m in range(1, book.L + 1)]
    return np.mean(rows, axis=0)


def tv_distance(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(p - q).sum())


def measure_concealing(
    book: Codebook,
    W: Channel | None,
    a: int,
    a_prime: int,
    mode: str = "exact",
    trials: int = 10_000,
    seed: int = 0,
    limit: int = ENUM_LIMIT,
) -> Estimate:
    """Total variation between the output laws of two committed messages.

    ``exact`` enumerates every output word. ``mc`` compares two empirical
    histograms; the plug-in value is biased upward and serves as a
    diagnostic only.
    """
    W = _channel(book, W)
    if a == a_prime:
        raise ValueError("messages must differ")
    for m in (a, a_prime):
        if not 1 <= m <= book.K:
            raise IndexError(f"message {m} outside 1..{book.K}")
    if mode == "exact":
        _check_enum(W.nz, book.n, limit)
        da = message_output_pmf(book, W, a)
        db = message_output_pmf(book, W, a_prime)
        qn = product_pmf(book.params.P @ W.matrix, book.n)
        to_a, to_b = tv_distance(da, qn), tv_distance(db, qn)
        tv = tv_distance(da, db)
        return Estimate(tv, None, "exact", {
            "distance_to_product_a": to_a,
            "distance_to_product_a_prime": to_b,
            "triangle_ok": tv <= to_a + to_b + 1e-12,
        })
    if mode != "mc":
        raise ValueError("mode is 'exact' or 'mc'")
    rng = rng_for(seed, a, a_prime)
    ha = _sample_message_outputs(book, W, a, trials, rng)
    hb = _sample_message_outputs(book, W, a_prime, trials, rng)
    keys, inv = np.unique(np.concatenate([ha, hb]), axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    ca = np.bincount(inv[:trials], minlength=len(keys))
    cb = np.bincount(inv[trials:], minlength=len(keys))
    value = 0.5 * float(np.abs(ca - cb).sum()) / trials
    boots = []
    for _ in range(20):
        ra = rng.multinomial(trials, ca / trials)
        rb = rng.multinomial(trials, cb / trials)
        boots.append(0.5 * np.abs(ra - rb).sum() / trials)
    return Estimate(value, float(np.std(boots)), f"plug_in_mc(trials={trials}, seed={seed})", {
        "caveat": "plug-in total variation is biased upward; diagnostic only",
        "distinct_outputs": int(len(keys)),
    })


def _sample_message_outputs(book: Codebook, W: Channel, a: int, trials: int, rng) -> np.ndarray:
    mus = rng.integers(0, book.L, size=trials)
    words = book.codewords[a - 1, mus]
    return _sample_outputs(W, words, rng.random(words.shape))


def _sample_outputs(W: Channel, words: np.ndarray, u: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(W.matrix, axis=1)[:, :-1]
    return (u[..., None] >= cdf[words]).sum(axis=-1)


# -- soundness ---------------------------------------------------------------------------


def measure_soundness(
    book: Codebook,
    W: Channel | None = None,
    trials: int = 2000,
    seed: int = 0,
    threads: int = 1,
    exact_limit: int = TYPE_LIMIT,
) -> Estimate:
    """Honest rejection frequency, messages taken round-robin, keys uniform."""
    W = _channel(book, W)
    sizes = chunk_sizes(trials)
    starts = np.cumsum([0] + sizes[:-1])

    def run(ci):
        m, start = sizes[ci], starts[ci]
        rng = rng_for(seed, ci)
        a = (start + np.arange(m)) % book.K
        mu = rng.integers(0, book.L, size=m)
        words = book.codewords[a, mu]
        z = _sample_outputs(W, words, rng.random(words.shape))
        acc = np.zeros(m, dtype=bool)
        for aa in range(book.K):
            for mm in range(book.L):
                sel = (a == aa) & (mu == mm)
                if sel.any():
                    acc[sel] = cond_typical_batch(z[sel], book.channel, book.codewords[aa, mm], book.eps_test)
        return int((~acc).sum())

    rejected = sum(map_ordered(run, list(range(len(sizes))), threads))
    p = rejected / trials
    detail: dict = {"trials": trials, "rejections": rejected}
    if W is book.channel:
        try:
            exact = 1 - float(np.mean([cond_typical_prob_exact(W, w, book.eps_test, exact_limit) for w in book.flat()]))
            detail["exact_rejection"] = exact
            detail["within_3se"] = abs(p - exact) <= 3 * math.sqrt(max(exact * (1 - exact), 1e-300) / trials) + 1e-12
        except EnumerationLimitError:
            detail["exact_rejection"] = None
    return Estimate(p, math.sqrt(p * (1 - p) / trials), f"monte_carlo(trials={trials}, seed={seed})", detail)


# -- binding ------------------------------------------------------------------------------


def _band_check(N: np.ndarray, counts: np.ndarray, W: Channel, tol: float) -> np.ndarray:
    """Conditional-typicality test on stacked joint counts of shape (S, |X|, |Z|)."""
    dev_ok = np.abs(N - counts[:, None] * W.matrix) <= tol + COUNT_SLACK
    zero_ok = (N == 0) | (W.matrix > 0)
    return np.all(dev_ok & zero_ok, axis=(-2, -1))


def _cells(c1: np.ndarray, c2: np.ndarray, nx: int) -> list[tuple[int, int, np.ndarray]]:
    return [(i, j, np.flatnonzero((c1 == i) & (c2 == j))) for i in range(nx) for j in range(nx)
            if np.any((c1 == i) & (c2 == j))]


def _joint_from_cell_pmfs(W: Channel, c1, c2, cell_pmfs, eps: float, limit: int) -> float:
    """Fold the per-cell output-count laws and test both codewords' bands."""
    nx, nz = W.nx, W.nz
    n = len(c1)
    N1 = np.zeros((1, nx, nz), dtype=np.int64)
    N2 = np.zeros((1, nx, nz), dtype=np.int64)
    ps = np.ones(1)
    for (i, j, _), (comps, probs) in cell_pmfs:
        if len(ps) * len(probs) > limit:
            raise EnumerationLimitError("joint acceptance state space exceeds limit")
        S, m = len(ps), len(probs)
        N1 = np.repeat(N1, m, axis=0)
        N2 = np.repeat(N2, m, axis=0)
        add = np.tile(comps, (S, 1))
        N1[:, i] += add
        N2[:, j] += add
        ps = np.outer(ps, probs).reshape(-1)
        key = np.concatenate([N1.reshape(len(ps), -1), N2.reshape(len(ps), -1)], axis=1)
        uniq, inv = np.unique(key, axis=0, return_inverse=True)
        inv = inv.reshape(-1)
        ps = np.bincount(inv, weights=ps, minlength=len(uniq))
        N1 = uniq[:, : nx * nz].reshape(-1, nx, nz)
        N2 = uniq[:, nx * nz:].reshape(-1, nx, nz)
    n1 = np.bincount(c1, minlength=nx)
    n2 = np.bincount(c2, minlength=nx)
    ok = _band_check(N1, n1, W, eps * n) & _band_check(N2, n2, W, eps * n)
    return float(min(ps[ok].sum(), 1.0))


def joint_acceptance_exact(W: Channel, c1, c2, x, eps: float, limit: int = ENUM_LIMIT) -> float:
    """Pr{Z in both acceptance regions} for Z ~ W^n_x, computed exactly."""
    c1, c2, x = (np.asarray(v, dtype=np.int64) for v in (c1, c2, x))
    cells = _cells(c1, c2, W.nx)
    pmfs = [(cell, count_pmf(W, x[cell[2]], limit)) for cell in cells]
    return _joint_from_cell_pmfs(W, c1, c2, pmfs, eps, limit)


def joint_acceptance_mc(W: Channel, c1, c2, x, eps: float, u: np.ndarray) -> float:
    z = _sample_outputs(W, np.broadcast_to(np.asarray(x), u.shape), u)
    both = cond_typical_batch(z, W, c1, eps) & cond_typical_batch(z, W, c2, eps)
    return float(both.mean())


def best_joint_acceptance(W: Channel, c1, c2, eps: float, limit: int = ENUM_LIMIT) -> tuple[float, np.ndarray]:
    """Max over every cheating input word of the exact joint acceptance.

    The law of the output counts only depends on how many of each input
    letter sit in each cell (positions where the two codewords show a fixed
    letter pair), so input compositions per cell are enumerated instead of
    whole words.
    """
    c1, c2 = np.asarray(c1, dtype=np.int64), np.asarray(c2, dtype=np.int64)
    cells = _cells(c1, c2, W.nx)
    options = []
    for cell in cells:
        comps = compositions(len(cell[2]), W.nx, limit)
        pmfs = [count_pmf(W, np.repeat(np.arange(W.nx), c), limit) for c in comps]
        options.append((comps, pmfs))
    total = math.prod(len(o[0]) for o in options)
    if total > limit:
        raise EnumerationLimitError(f"{total} cell compositions exceed the limit {limit}")
    best, best_choice = -1.0, None
    for choice in itertools.product(*(range(len(o[0])) for o in options)):
        pmfs = [(cell, options[k][1][c]) for k, (cell, c) in enumerate(zip(cells, choice))]
        v = _joint_from_cell_pmfs(W, c1, c2, pmfs, eps, limit)
        if v > best + 1e-15:
            best, best_choice = v, choice
    x = np.zeros_like(c1)
    for k, cell in enumerate(cells):
        x[cell[2]] = np.repeat(np.arange(W.nx), options[k][0][best_choice[k]])
    return best, x


def _cross_pairs(book: Codebook) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    idx = [(a, m) for a in range(book.K) for m in range(book.L)]
    return [(p, q) for p, q in itertools.combinations(idx, 2) if p[0] != q[0]]


def midpoint_word(c1, c2) -> np.ndarray:
    """Copy of ``c1`` with the first half of the differing positions taken from ``c2``."""
    c1, c2 = np.asarray(c1), np.asarray(c2)
    diff = np.flatnonzero(c1 != c2)
    x = c1.copy()
    take = diff[: len(diff) // 2]
    x[take] = c2[take]
    return x


def binding_attack(
    book: Codebook,
    W: Channel | None = None,
    strategy: str = "midpoint",
    trials: int = 2000,
    seed: int = 0,
    budget: int = 200,
    threads: int = 1,
    limit: int = ENUM_LIMIT,
) -> SecurityReport:
    """Best joint acceptance a cheating sender reaches with a fixed input word.

    Both revelations are tested on the same received word. ``midpoint`` and
    ``hillclimb`` are Monte Carlo searches; ``exhaustive`` is exact. The
    search word's exact value is attached whenever it is enumerable.
    """
    W = _channel(book, W)
    if book.K < 2:
        raise ValueError("binding needs at least two messages")
    eps = book.eps_test
    pairs = _cross_pairs(book)
    cw = book.codewords

    def exact_or_none(c1, c2, x):
        try:
            return joint_acceptance_exact(W, c1, c2, x, eps, limit)
        except EnumerationLimitError:
            return None

    if strategy == "exhaustive":
        def run(k):
            (a, m), (b, l) = pairs[k]
            return best_joint_acceptance(W, cw[a, m], cw[b, l], eps, limit)

        results = map_ordered(run, list(range(len(pairs))), threads)
        k = int(np.argmax([r[0] for r in results]))
        value, x = results[k]
        est = Estimate(value, None, "exact", {"pair": _pair_label(pairs[k]), "word": x.tolist()})
        desc = "exhaustive search over all input words (by per-cell composition)"
    elif strategy in ("midpoint", "hillclimb"):
        def run(k):
            (a, m), (b, l) = pairs[k]
            x = midpoint_word(cw[a, m], cw[b, l])
            u = rng_for(seed, k).random((trials, book.n))
            return joint_acceptance_mc(W, cw[a, m], cw[b, l], x, eps, u), x

        results = map_ordered(run, list(range(len(pairs))), threads)
        k = int(np.argmax([r[0] for r in results]))
        value, x = results[k]
        (a, m), (b, l) = pairs[k]
        detail: dict = {"pair": _pair_label(pairs[k])}
        desc = "Hamming midpoint of each cross-message codeword pair"
        if strategy == "hillclimb":
            value, x, steps = _hillclimb(W, cw[a, m], cw[b, l], x, eps, trials, seed, budget)
            detail["accepted_moves"] = steps
            desc = f"single-letter hill climbing from the best midpoint, budget {budget}"
        detail["word"] = x.tolist()
        detail["exact_value_of_word"] = exact_or_none(cw[a, m], cw[b, l], x)
        p = value
        est = Estimate(value, math.sqrt(p * (1 - p) / trials), f"monte_carlo(trials={trials}, seed={seed})", detail)
    else:
        raise ValueError("strategy is midpoint, hillclimb or exhaustive")
    return SecurityReport(
        delta_bind_measured=est,
        attack_description=desc,
        metadata=_meta(book, W, seed=seed, strategy=strategy),
    )


def _pair_label(pair) -> list[list[int]]:
    (a, m), (b, l) = pair
    return [[a + 1, m + 1], [b + 1, l + 1]]


def _hillclimb(W, c1, c2, x0, eps, trials, seed, budget):
    """Greedy single-letter moves scored with common random numbers."""
    rng = rng_for(seed, 2**32)
    u = rng.random((trials, len(x0)))
    x = np.array(x0)
    best = joint_acceptance_mc(W, c1, c2, x, eps, u)
    accepted = 0
    if W.nx < 2:
        return best, x, 0
    for _ in range(budget):
        pos = int(rng.integers(len(x)))
        letter = int(rng.integers(W.nx - 1))
        letter += letter >= x[pos]
        cand = x.copy()
        cand[pos] = letter
        v = joint_acceptance_mc(W, c1, c2, cand, eps, u)
        if v >= best:
            accepted += v > best
            x, best = cand, v
    return best, x, int(accepted)


# -- exact rational evaluation of tiny schemes -------------------------------------------


def exact_scheme_values(book: Codebook, W: Channel | None = None, limit: int = 10**6) -> dict[str, Fraction]:
    """Concealing distance, soundness and binding optimum as exact fractions.

    Brute force over every input and output word; every float in the channel
    is converted to its exact binary rational, so dyadic channels give exact
    answers. Only for very small |X|^n |Z|^n.
    """
    W = _channel(book, W)
    n = book.n
    if (W.nx * W.nz) ** n > limit:
        raise EnumerationLimitError("scheme too large for exact rational enumeration")
    F = [[Fraction(v) for v in row] for row in W.matrix]
    zs = np.array(list(itertools.product(range(W.nz), repeat=n)), dtype=np.int64)

    def law(x):
        return [math.prod((F[xk][zk] for xk, zk in zip(x, z)), start=Fraction(1)) for z in zs]

    acc = {(a, m): cond_typical_batch(zs, book.channel, book.codewords[a, m], book.eps_test)
           for a in range(book.K) for m in range(book.L)}
    per_msg = []
    sound = Fraction(1)
    for a in range(book.K):
        laws = [law(book.codewords[a, m]) for m in range(book.L)]
        per_msg.append([sum(col, Fraction(0)) / book.L for col in zip(*laws)])
        ok = sum((sum((p for p, t in zip(laws[m], acc[(a, m)]) if t), Fraction(0)) for m in range(book.L)),
                 Fraction(0)) / book.L
        sound = min(sound, ok)
    eps = max(
        (sum((abs(p - q) for p, q in zip(per_msg[a], per_msg[b])), Fraction(0)) / 2
         for a, b in itertools.combinations(range(book.K), 2)),
        default=Fraction(0),
    )
    bind = Fraction(0)
    for x in itertools.product(range(W.nx), repeat=n):
        px = law(x)
        for (p, q) in _cross_pairs(book):
            both = acc[p] & acc[q]
            bind = max(bind, sum((v for v, t in zip(px, both) if t), Fraction(0)))
    return {"epsilon": eps, "soundness": sound, "delta_bind": bind}


def f_channel() -> Channel:
    """Four-letter cyclic channel: input x gives output x or x+1 (mod 4) evenly."""
    m = np.zeros((4, 4))
    for x in range(4):
        m[x, x] = m[x, (x + 1) % 4] = 0.5
    labels = tuple(str(i) for i in range(4))
    return Channel(labels, labels, m)


def remark_f_scheme() -> tuple[Channel, Codebook, SecurityReport]:
    """The one-letter scheme on the cyclic channel: bit b sent as b + 2c.

    The acceptance test with width 1/2 at n = 1 is exactly "z - x is 0 or 1
    mod 4". Values in the report are exact rationals.
    """
    W = f_channel()
    params = derive_parameters(W, np.full(4, 0.25), 1, 0.25, "desk", K=2, L=2, eps_code=0.75, eps_test=0.5)
    words = np.array([[[b + 2 * c] for c in range(2)] for b in range(2)], dtype=np.int64)
    book = Codebook(words, params, W, 0, {"construction": "fixed: codeword (b, c) = b + 2c"})
    vals = exact_scheme_values(book)
    report = SecurityReport(
        epsilon_measured=Estimate(vals["epsilon"], None, "exact_rational"),
        delta_sound_measured=Estimate(1 - vals["soundness"], None, "exact_rational",
                                      {"soundness": str(vals["soundness"])}),
        delta_bind_measured=Estimate(vals["delta_bind"], None, "exact_rational"),
        attack_description="exhaustive over all inputs and cross-message revelations",
        metadata=_meta(book, W, seed=0),
    )
    return W, book, report


# -- converse audit -----------------------------------------------------------------------


def _H(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def h_envelope(t: float) -> float:
    """Binary entropy made monotone: equal to 1 once its argument passes 1/2."""
    return 1.0 if t >= 0.5 else binary_entropy(t)


@dataclass
class ConverseAudit:
    n: int
    joint: np.ndarray  # (K, L, |Z|^n): Pr{A=a, key=m, Z^n=z}; the input word is fixed by (a, m)
    H_A: float
    I_A_Z: float
    H_A_given_ZX: float
    H_X_given_Z: float
    sum_H_Xk_given_Zk: float
    epsilon: float
    delta: float
    epsilon_prime: float
    delta_prime: float
    side_bits: int
    max_equivocation: float
    bound_rhs: float
    checks: dict
    holds: bool

    def to_dict(self) -> dict:
        d = {k: v for k, v in self.__dict__.items() if k != "joint"}
        d["joint_shape"] = list(self.joint.shape)
        return d

    @property
    def all_checks_pass(self) -> bool:
        return all(c["ok"] for c in self.checks.values())


def converse_audit(
    W: Channel | None,
    book: Codebook,
    limit: int = ENUM_LIMIT,
    tol: float = 1e-9,
    capacity_options: AscentOptions | None = None,
) -> ConverseAudit:
    """Exact audit of the rate upper bound on a single-block scheme.

    Messages and keys are uniform and no side communication takes place, so
    the noiseless budget is zero and its log term is dropped.
    """
    W = _channel(book, W)
    n, K, L = book.n, book.K, book.L
    if K < 2:
        raise ValueError("audit needs at least two messages")
    if (W.nx * W.nz) ** n > limit:
        raise EnumerationLimitError(f"(|X||Z|)^n = {(W.nx * W.nz) ** n} exceeds {limit}")
    joint = np.stack([[word_output_pmf(W, book.codewords[a, m]) for m in range(L)] for a in range(K)]) / (K * L)

    p_z = joint.sum(axis=(0, 1))
    p_az = joint.sum(axis=1)
    H_A = _H(joint.sum(axis=(1, 2)))
    I_AZ = max(0.0, H_A + _H(p_z) - _H(p_az.ravel()))

    # group (a, m) by input word to get the laws of (A, X^n, Z^n) and (X^n, Z^n)
    words = book.flat()
    uniq, inv = np.unique(words, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    flat = joint.reshape(K * L, -1)
    p_xz = np.zeros((len(uniq), flat.shape[1]))
    np.add.at(p_xz, inv, flat)
    p_axz = np.zeros((K, len(uniq), flat.shape[1]))
    np.add.at(p_axz, (np.repeat(np.arange(K), L), inv), flat)
    H_XZ = _H(p_xz.ravel())
    H_X_Z = max(0.0, H_XZ - _H(p_z))
    H_A_ZX = max(0.0, _H(p_axz.ravel()) - H_XZ)
    H_AX_Z = max(0.0, _H(p_axz.ravel()) - _H(p_z))
    H_A_Z = max(0.0, _H(p_az.ravel()) - _H(p_z))

    zshape = (W.nz,) * n
    per_pos = 0.0
    for k in range(n):
        pk = np.zeros((W.nx, W.nz))
        marg = flat.reshape((K * L,) + zshape)
        other = tuple(ax + 1 for ax in range(n) if ax != k)
        mz = marg.sum(axis=other) if other else marg
        np.add.at(pk, words[:, k], mz)
        per_pos += max(0.0, _H(pk.ravel()) - _H(pk.sum(axis=0)))

    pmfs = [joint[a].sum(axis=0) * K for a in range(K)]
    eps = max(tv_distance(pmfs[a], pmfs[b]) for a, b in itertools.combinations(range(K), 2))
    delta = binding_attack(book, W, "exhaustive", limit=limit).delta_bind_measured.value
    side_bits = 0
    log_side = 0.0  # no noiseless messages are exchanged
    eps_p = h_envelope(2 * eps) + 2 * n * eps * (log_side + math.log2(W.nz))
    root = 5 * delta ** (1 / 3)
    delta_p = h_envelope(root) + root * math.log2(K)

    opts = capacity_options or AscentOptions(restarts=8)
    red = nonredundant_reduce(W)
    cmax = 0.0 if is_trivial(W) else maximize_equivocation(red.reduced_channel, opts).value
    rhs = n * cmax + n * (eps * (log_side + math.log2(W.nz)) + root * math.log2(W.nx)) + 2
    log_A = math.log2(K)

    def chk(lhs, rel, rhs_, slack=tol):
        ok = lhs <= rhs_ + slack if rel == "<=" else lhs >= rhs_ - slack
        return {"lhs": lhs, "relation": rel, "rhs": rhs_, "ok": bool(ok)}

    checks = {
        "X_given_Z>=AX_given_Z-A_given_ZX": chk(H_X_Z, ">=", H_AX_Z - H_A_ZX),
        "AX_given_Z>=A_given_Z": chk(H_AX_Z, ">=", H_A_Z),
        "A_given_ZX<=delta_prime": chk(H_A_ZX, "<=", delta_p),
        "I_A_Z<=epsilon_prime": chk(I_AZ, "<=", eps_p),
        "X_given_Z>=H_A-epsilon_prime-delta_prime": chk(H_X_Z, ">=", H_A - eps_p - delta_p),
        "X_given_Z<=sum_k": chk(H_X_Z, "<=", per_pos),
        "sum_k<=n*max_equivocation": chk(per_pos, "<=", n * cmax, 1e-6),
        "log_A<=rate_bound": chk(log_A, "<=", rhs),
    }
    return ConverseAudit(
        n=n, joint=joint, H_A=H_A, I_A_Z=I_AZ, H_A_given_ZX=H_A_ZX, H_X_given_Z=H_X_Z,
        sum_H_Xk_given_Zk=per_pos, epsilon=eps, delta=float(delta), epsilon_prime=eps_p,
        delta_prime=delta_p, side_bits=side_bits, max_equivocation=cmax, bound_rhs=rhs,
        checks=checks, holds=log_A <= rhs,
    )


def desk_book(W: Channel, n: int, sigma: float, K: int, L: int, seed: int, eps_test=None, eps_code=None, P=None) -> Codebook:
    """Convenience: desk-mode parameters plus a codebook in one call."""
    P = np.full(W.nx, 1 / W.nx) if P is None else P
    params = derive_parameters(W, P, n, sigma, "desk", K=K, L=L, eps_test=eps_test, eps_code=eps_code)
    return build_codebook(W, params, K, L, seed)
