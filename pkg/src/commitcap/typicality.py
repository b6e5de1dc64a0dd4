"""Types, typical sets and conditionally typical sets.

Words are integer arrays of symbol indices. Set probabilities are computed
exactly by enumerating type classes (compositions of the block length), with
log-space accumulation; Monte Carlo is used only where enumeration exceeds
``TYPE_LIMIT`` compositions.

Boundary ties count as typical. Count comparisons carry a slack of
``COUNT_SLACK`` so that ``eps * n`` computed in floating point does not
exclude a word sitting exactly on the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy.special import gammaln, logsumexp

from .channel import Channel, check_distribution, entropy, output_distribution, row_entropies

TYPE_LIMIT = 10**7
COUNT_SLACK = 1e-9
LN2 = math.log(2.0)


class EnumerationLimitError(RuntimeError):
    """The exact computation would enumerate more objects than allowed."""


# -- words -------------------------------------------------------------------


def encode_word(symbols: Iterable, alphabet: Sequence) -> np.ndarray:
    """Map a sequence of labels to an index array over ``alphabet``."""
    lookup = {str(s): i for i, s in enumerate(alphabet)}
    try:
        return np.array([lookup[str(s)] for s in symbols], dtype=np.int64)
    except KeyError as exc:
        raise ValueError(f"symbol {exc.args[0]!r} not in alphabet") from None


def letter_counts(word, k: int) -> np.ndarray:
    word = np.asarray(word)
    if word.size and (word.min() < 0 or word.max() >= k):
        raise ValueError("word has symbols outside the alphabet")
    return np.bincount(word, minlength=k)


def type_of(word, k: int) -> np.ndarray:
    """Empirical letter distribution N(x|w)/n of a non-empty word."""
    word = np.asarray(word)
    if word.size == 0:
        raise ValueError("type of an empty word is undefined")
    return letter_counts(word, k) / word.size


def hamming_distance(u, v) -> int:
    u, v = np.asarray(u), np.asarray(v)
    if u.shape != v.shape:
        raise ValueError("words have different lengths")
    return int(np.count_nonzero(u != v))


def representative_word(P, n: int) -> np.ndarray:
    """A length-``n`` word whose type is the largest-remainder rounding of ``P``."""
    P = check_distribution(P)
    raw = P * n
    counts = np.floor(raw).astype(int)
    short = n - counts.sum()
    order = np.argsort(-(raw - counts), kind="stable")
    counts[order[:short]] += 1
    return np.repeat(np.arange(P.size), counts)


# -- membership ----------------------------------------------------------------


def _band_ok(counts: np.ndarray, m, ref: np.ndarray, tol: float) -> np.ndarray:
    """Vectorized test |counts - m*ref| <= tol with the zero-support clause.

    ``counts`` has shape (..., k); ``m`` broadcasts against the leading axes.
    """
    m = np.asarray(m, dtype=float)[..., None]
    dev_ok = np.abs(counts - m * ref) <= tol + COUNT_SLACK
    zero_ok = (counts == 0) | (ref > 0)
    return np.all(dev_ok & zero_ok, axis=-1)


def is_typical(word, P, eps: float) -> bool:
    """Membership of ``word`` in the eps-typical set of ``P``."""
    P = check_distribution(P)
    word = np.asarray(word)
    if eps <= 0:
        raise ValueError("eps must be positive")
    counts = letter_counts(word, P.size)
    return bool(_band_ok(counts, word.size, P, eps * word.size))


def joint_counts(xn, zn, nx: int, nz: int) -> np.ndarray:
    """N(xz | x^n z^n) as an (nx, nz) matrix; ``zn`` may carry leading batch axes."""
    xn = np.asarray(xn)
    zn = np.asarray(zn)
    out = np.zeros(zn.shape[:-1] + (nx, nz), dtype=np.int64)
    for x in range(nx):
        cols = zn[..., xn == x]
        for z in range(nz):
            out[..., x, z] = np.count_nonzero(cols == z, axis=-1)
    return out


def cond_typical_batch(zs, W: Channel, xn, eps: float) -> np.ndarray:
    """Conditional typicality of each row of ``zs`` given input word ``xn``."""
    xn = np.asarray(xn)
    zs = np.asarray(zs)
    if zs.shape[-1] != xn.size:
        raise ValueError("output and input words differ in length")
    n = xn.size
    N = joint_counts(xn, zs, W.nx, W.nz)
    nx_counts = letter_counts(xn, W.nx)
    dev_ok = np.abs(N - nx_counts[:, None] * W.matrix) <= eps * n + COUNT_SLACK
    zero_ok = (N == 0) | (W.matrix > 0)
    return np.all(dev_ok & zero_ok, axis=(-2, -1))


def is_cond_typical(zn, W: Channel, xn, eps: float) -> bool:
    """Membership of ``zn`` in the eps-conditionally-typical set of ``xn``.

    This is the receiver's acceptance test in the commitment protocol.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    zn = np.asarray(zn)
    if zn.ndim != 1:
        raise ValueError("expected a single word")
    if zn.size and (zn.min() < 0 or zn.max() >= W.nz):
        raise ValueError("output word has symbols outside the alphabet")
    letter_counts(xn, W.nx)
    return bool(cond_typical_batch(zn, W, xn, eps))


def typical_batch(words, P, eps: float) -> np.ndarray:
    words = np.asarray(words)
    P = np.asarray(P, dtype=float)
    counts = np.stack([np.count_nonzero(words == x, axis=-1) for x in range(P.size)], axis=-1)
    return _band_ok(counts, words.shape[-1], P, eps * words.shape[-1])


# -- exact enumeration -----------------------------------------------------------


def n_compositions(m: int, k: int) -> int:
    return math.comb(m + k - 1, k - 1)


@lru_cache(maxsize=64)
def _compositions_cached(m: int, k: int) -> np.ndarray:
    if k == 1:
        return np.array([[m]], dtype=np.int64)
    blocks = []
    for first in range(m, -1, -1):
        rest = _compositions_cached(m - first, k - 1)
        blocks.append(np.column_stack([np.full(len(rest), first, dtype=np.int64), rest]))
    out = np.concatenate(blocks)
    out.setflags(write=False)
    return out


def compositions(m: int, k: int, limit: int = TYPE_LIMIT) -> np.ndarray:
    """All nonnegative integer vectors of length ``k`` summing to ``m``."""
    if n_compositions(m, k) > limit:
        raise EnumerationLimitError(
            f"{n_compositions(m, k)} type classes for length {m} over {k} letters exceeds {limit}"
        )
    return _compositions_cached(m, k)


def log_multinomial(comps: np.ndarray) -> np.ndarray:
    """Natural log of the multinomial coefficient of each composition row."""
    m = comps.sum(axis=-1)
    return gammaln(m + 1.0) - gammaln(comps + 1.0).sum(axis=-1)


def _log_word_prob(comps: np.ndarray, measure: np.ndarray) -> np.ndarray:
    """Natural log of the probability of one word with the given letter counts."""
    with np.errstate(divide="ignore", invalid="ignore"):
        logm = np.log(measure)
        terms = np.where(comps > 0, comps * logm, 0.0)
    return terms.sum(axis=-1)


def _band_log_prob(m: int, ref: np.ndarray, tol: float, measure: np.ndarray, limit: int) -> float:
    """log Pr{counts in band} for counts ~ Multinomial(m, measure)."""
    if m == 0:
        return 0.0
    comps = compositions(m, ref.size, limit)
    ok = _band_ok(comps, m, ref, tol)
    if not ok.any():
        return -math.inf
    lp = log_multinomial(comps[ok]) + _log_word_prob(comps[ok], measure)
    return float(logsumexp(lp))


def typical_prob_exact(P, n: int, eps: float, measure=None, limit: int = TYPE_LIMIT) -> float:
    """Exact probability of the eps-typical set of ``P`` under ``measure``^n.

    ``measure`` defaults to ``P``.
    """
    P = check_distribution(P)
    measure = P if measure is None else check_distribution(measure, P.size, "measure")
    return math.exp(_band_log_prob(n, P, eps * n, measure, limit))


def typical_set_log2_size(P, n: int, eps: float, limit: int = TYPE_LIMIT) -> float:
    """log2 of the exact number of eps-typical words of length ``n``."""
    P = check_distribution(P)
    comps = compositions(n, P.size, limit)
    ok = _band_ok(comps, n, P, eps * n)
    if not ok.any():
        return -math.inf
    return float(logsumexp(log_multinomial(comps[ok])) / LN2)


def _classes(W: Channel, xn) -> list[tuple[int, int]]:
    counts = letter_counts(xn, W.nx)
    return [(x, int(c)) for x, c in enumerate(counts) if c > 0]


def cond_typical_prob_exact(W: Channel, xn, eps: float, limit: int = TYPE_LIMIT) -> float:
    """Exact W^n_{x^n} probability of the conditionally typical set of ``xn``.

    The set factors over the letter classes of ``xn``: on the positions where
    ``xn`` equals ``x`` the output counts must be typical for ``W_x`` with an
    absolute tolerance of ``eps * n``.
    """
    xn = np.asarray(xn)
    n = xn.size
    classes = _classes(W, xn)
    if sum(n_compositions(c, W.nz) for _, c in classes) > limit:
        raise EnumerationLimitError("conditional type enumeration exceeds limit")
    total = 0.0
    for x, c in classes:
        total += _band_log_prob(c, W.matrix[x], eps * n, W.matrix[x], limit)
        if total == -math.inf:
            return 0.0
    return math.exp(total)


def cond_typical_set_log2_size(W: Channel, xn, eps: float, limit: int = TYPE_LIMIT) -> float:
    xn = np.asarray(xn)
    n = xn.size
    total = 0.0
    for x, c in _classes(W, xn):
        comps = compositions(c, W.nz, limit)
        ok = _band_ok(comps, c, W.matrix[x], eps * n)
        if not ok.any():
            return -math.inf
        total += float(logsumexp(log_multinomial(comps[ok])))
    return total / LN2


def count_pmf(W: Channel, letters: np.ndarray, limit: int = TYPE_LIMIT) -> tuple[np.ndarray, np.ndarray]:
    """Distribution of output letter counts over a set of positions.

    ``letters`` are the input symbols sent on those positions (any mix).
    Returns ``(comps, probs)``: each row of ``comps`` is a count vector over the
    output alphabet and ``probs`` its exact probability. Built by a dense
    position-by-position convolution over the first ``nz - 1`` coordinates.
    """
    letters = np.asarray(letters, dtype=np.int64)
    m = letters.size
    nz = W.nz
    if nz == 1:
        return np.array([[m]], dtype=np.int64), np.ones(1)
    shape = (m + 1,) * (nz - 1)
    if math.prod(shape) > limit:
        raise EnumerationLimitError(f"count table of size {math.prod(shape)} exceeds {limit}")
    arr = np.zeros(shape)
    arr[(0,) * (nz - 1)] = 1.0
    for x in letters:
        w = W.matrix[x]
        new = w[-1] * arr
        for z in range(nz - 1):
            if w[z] == 0:
                continue
            src = [slice(None)] * (nz - 1)
            dst = [slice(None)] * (nz - 1)
            src[z] = slice(0, m)
            dst[z] = slice(1, m + 1)
            new[tuple(dst)] += w[z] * arr[tuple(src)]
        arr = new
    idx = np.argwhere(arr > 0)
    last = m - idx.sum(axis=1)
    keep = last >= 0
    idx = idx[keep]
    comps = np.column_stack([idx, last[keep]]).astype(np.int64)
    return comps, arr[tuple(idx.T)]


def cond_typical_prob_sender(W: Channel, xn, yn, eps: float, limit: int = TYPE_LIMIT) -> float:
    """Exact W^n_{y^n} probability of the conditionally typical set of ``xn``.

    The sender's word ``yn`` may differ from ``xn``; per class of ``xn`` the
    output counts are a convolution of the rows selected by ``yn``.
    """
    xn = np.asarray(xn)
    yn = np.asarray(yn)
    if xn.shape != yn.shape:
        raise ValueError("words differ in length")
    n = xn.size
    prob = 1.0
    for x, c in _classes(W, xn):
        comps, probs = count_pmf(W, yn[xn == x], limit)
        ok = _band_ok(comps, c, W.matrix[x], eps * n)
        prob *= float(probs[ok].sum())
    return min(prob, 1.0)


# -- bound verification ------------------------------------------------------------


@dataclass
class BoundCheckResult:
    bound_name: str
    analytical_value: float
    measured_value: float
    method: str
    satisfied: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "bound_name": self.bound_name,
            "analytical_value": self.analytical_value,
            "measured_value": self.measured_value,
            "method": self.method,
            "satisfied": self.satisfied,
            "detail": self.detail,
        }


def const_D(P) -> float:
    P = np.asarray(P, dtype=float)
    return float(-np.log2(P[P > 0]).sum())


def const_E(W: Channel) -> float:
    """max over inputs of the summed surprisal of the row's support."""
    return float(max(-np.log2(r[r > 0]).sum() for r in W.matrix))


def const_E_sum(W: Channel, letters: Iterable[int] | None = None) -> float:
    """Summed surprisal over all (x, z) cells with W(z|x) > 0, restricted to ``letters``."""
    rows = W.matrix if letters is None else W.matrix[list(letters)]
    return float(sum(-np.log2(r[r > 0]).sum() for r in rows))


def _mc_method(trials: int, seed: int) -> str:
    return f"monte_carlo(trials={trials}, seed={seed})"


def sample_words(P, n: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    return rng.choice(P.size, size=(trials, n), p=P)


def sample_channel_batch(W: Channel, xn, trials: int, rng: np.random.Generator) -> np.ndarray:
    """``trials`` independent outputs of W^n on input ``xn``; shape (trials, n)."""
    xn = np.asarray(xn)
    cdf = np.cumsum(W.matrix, axis=1)[:, :-1]
    u = rng.random((trials, xn.size))
    return (u[..., None] >= cdf[xn]).sum(axis=-1)


def _shadow_min_log2_size(P, n: int, eta: float, limit: int) -> float:
    """log2 of the smallest set of words with P^n-probability at least ``eta``."""
    comps = compositions(n, P.size, limit)
    lw = _log_word_prob(comps, P)
    order = np.argsort(-lw, kind="stable")
    lw = lw[order]
    lm = log_multinomial(comps[order])
    cls_prob = np.exp(lm + lw)
    cum = np.cumsum(cls_prob)
    j = int(np.searchsorted(cum, eta - 1e-15))
    j = min(j, len(cum) - 1)
    before = cum[j - 1] if j > 0 else 0.0
    need = max(eta - before, 0.0)
    # words needed from class j: ceil(need / p_word), computed in log space when huge
    log_partial = math.log(need) - lw[j] if need > 0 else -math.inf
    if log_partial < 40:
        log_partial = math.log(max(math.ceil(math.exp(log_partial) - 1e-9), 0)) if need > 0 else -math.inf
    pieces = [log_partial]
    if j > 0:
        pieces.append(float(logsumexp(lm[:j])))
    return float(logsumexp(pieces) / LN2)


def verify_bound_suite(
    W: Channel,
    P,
    grid: Sequence[tuple[int, float]],
    trials: int = 10_000,
    seed: int = 0,
    limit: int = TYPE_LIMIT,
    shadow_eta: float = 0.5,
) -> list[BoundCheckResult]:
    """Check every typical-sequence estimate on each ``(n, eps)`` grid point.

    Exact type-class enumeration is used wherever it fits in ``limit``;
    otherwise set probabilities are estimated from ``trials`` samples. The
    containment of conditionally typical words in the typical set of the
    output distribution is always checked on ``trials`` sampled words.

    The per-word conditional estimate is reported twice: once with the
    constant ``E = max_x sum_z -log W_x(z)`` as usually stated, and once with
    the sum over all input letters, which is what the count tolerances imply.
    """
    P = check_distribution(P, W.nx, "input distribution")
    H = entropy(P)
    D = const_D(P)
    E = const_E(W)
    results: list[BoundCheckResult] = []
    for gi, (n, eps) in enumerate(grid):
        rng = np.random.default_rng([seed, gi])
        tag = {"n": n, "eps": eps}
        slack = 1 - 2 * W.nx * 2.0 ** (-n * eps**2 / 2)
        cslack = 1 - 2 * W.nx * W.nz * 2.0 ** (-n * eps**2 / 2)

        # unconditional set probability
        try:
            prob = typical_prob_exact(P, n, eps, limit=limit)
            method = "exact"
        except EnumerationLimitError:
            prob = float(typical_batch(sample_words(P, n, trials, rng), P, eps).mean())
            method = _mc_method(trials, seed)
        results.append(BoundCheckResult("typ:probability", slack, prob, method, prob >= slack, dict(tag)))

        exact_types = n_compositions(n, W.nx) <= limit
        if exact_types:
            comps = compositions(n, W.nx, limit)
            ok = _band_ok(comps, n, P, eps * n)
            dev = np.abs(_log_word_prob(comps[ok], P) / LN2 + n * H)
            worst = float(dev.max()) if ok.any() else 0.0
            results.append(
                BoundCheckResult("typ:value", n * eps * D, worst, "exact", worst <= n * eps * D + 1e-9, dict(tag))
            )
            log_size = typical_set_log2_size(P, n, eps, limit)
            up = n * H + n * eps * D
            results.append(
                BoundCheckResult("typ:upper", up, log_size, "exact", log_size <= up + 1e-9, dict(tag, unit="log2"))
            )
            if slack > 0:
                lo = math.log2(slack) + n * H - n * eps * D
                sat = log_size >= lo - 1e-9
            else:
                lo, sat = -math.inf, True
            results.append(
                BoundCheckResult(
                    "typ:lower", lo, log_size, "exact", sat, dict(tag, unit="log2", vacuous=slack <= 0)
                )
            )
            pre = shadow_eta - 2 * W.nx * 2.0 ** (-n * eps**2 / 2)
            cmin = _shadow_min_log2_size(P, n, shadow_eta, limit)
            if pre > 0:
                lo = math.log2(pre) + n * H - n * eps * D
                sat = cmin >= lo - 1e-9
            else:
                lo, sat = -math.inf, True
            results.append(
                BoundCheckResult(
                    "shadow:lower", lo, cmin, "exact", sat,
                    dict(tag, unit="log2", set_probability=shadow_eta, vacuous=pre <= 0),
                )
            )
        else:
            words = sample_words(P, n, trials, rng)
            typ = words[typical_batch(words, P, eps)]
            if len(typ):
                counts = np.stack([np.count_nonzero(typ == x, axis=1) for x in range(W.nx)], axis=1)
                dev = np.abs(_log_word_prob(counts, P) / LN2 + n * H)
                worst = float(dev.max())
            else:
                worst = 0.0
            results.append(
                BoundCheckResult(
                    "typ:value", n * eps * D, worst, _mc_method(trials, seed), worst <= n * eps * D + 1e-9, dict(tag)
                )
            )

        # conditional quantities on a representative input word of type ~P
        xn = representative_word(P, n)
        Pxn = type_of(xn, W.nx)
        Hc = float(Pxn @ row_entropies(W))
        try:
            cprob = cond_typical_prob_exact(W, xn, eps, limit)
            method = "exact"
        except EnumerationLimitError:
            cprob = float(cond_typical_batch(sample_channel_batch(W, xn, trials, rng), W, xn, eps).mean())
            method = _mc_method(trials, seed)
        results.append(
            BoundCheckResult("c-typ:probability", cslack, cprob, method, cprob >= cslack, dict(tag))
        )

        try:
            lo_dev, hi_dev = 0.0, 0.0
            for x, c in _classes(W, xn):
                comps = compositions(c, W.nz, limit)
                ok = _band_ok(comps, c, W.matrix[x], eps * n)
                d = _log_word_prob(comps[ok], W.matrix[x]) / LN2 + c * row_entropies(W)[x]
                hi_dev += float(d.max())
                lo_dev += float(d.min())
            worst = max(hi_dev, -lo_dev)
            E_sum = const_E_sum(W, [x for x, _ in _classes(W, xn)])
            results.append(
                BoundCheckResult(
                    "c-typ:value", n * eps * E, worst, "exact", worst <= n * eps * E + 1e-9, dict(tag, E=E)
                )
            )
            results.append(
                BoundCheckResult(
                    "c-typ:value[sum]", n * eps * E_sum, worst, "exact",
                    worst <= n * eps * E_sum + 1e-9, dict(tag, E_sum=E_sum),
                )
            )
            log_size = cond_typical_set_log2_size(W, xn, eps, limit)
            up = n * Hc + n * eps * E
            results.append(
                BoundCheckResult("c-typ:upper", up, log_size, "exact", log_size <= up + 1e-9, dict(tag, unit="log2"))
            )
            up_sum = n * Hc + n * eps * E_sum
            results.append(
                BoundCheckResult(
                    "c-typ:upper[sum]", up_sum, log_size, "exact", log_size <= up_sum + 1e-9,
                    dict(tag, unit="log2", E_sum=E_sum),
                )
            )
            if cslack > 0:
                lo = math.log2(cslack) + n * Hc - n * eps * E
                sat = log_size >= lo - 1e-9
            else:
                lo, sat = -math.inf, True
            results.append(
                BoundCheckResult(
                    "c-typ:lower", lo, log_size, "exact", sat, dict(tag, unit="log2", vacuous=cslack <= 0)
                )
            )
        except EnumerationLimitError:
            pass

        # containment of conditionally typical outputs in the typical set of Q
        Q = output_distribution(W, Pxn)
        collected, violations, rounds = 0, 0, 0
        while collected < trials and rounds < 50:
            zs = sample_channel_batch(W, xn, trials, rng)
            zs = zs[cond_typical_batch(zs, W, xn, eps)][: trials - collected]
            violations += int(np.count_nonzero(~typical_batch(zs, Q, eps * W.nx)))
            collected += len(zs)
            rounds += 1
        results.append(
            BoundCheckResult(
                "c-typ:in:typ", 0.0, float(violations), _mc_method(trials, seed), violations == 0,
                dict(tag, samples=collected),
            )
        )
    return results


def chernoff_check(p: float, eta: float, N: int, trials: int, seed: int) -> BoundCheckResult:
    """Empirical tails of a mean of ``N`` Bernoulli(p) draws against the Chernoff bound.

    Both the upper tail {mean >= (1+eta)p} and the lower tail
    {mean <= (1-eta)p} are compared to exp2(-N p eta^2 / (2 ln 2)).
    """
    if not 0 < p <= 1 or eta <= 0 or N < 1:
        raise ValueError("need 0 < p <= 1, eta > 0, N >= 1")
    from scipy.stats import binom

    rng = np.random.default_rng(seed)
    sums = rng.binomial(N, p, size=trials)
    hi = (1 + eta) * p * N
    lo = (1 - eta) * p * N
    upper = float(np.count_nonzero(sums >= hi - COUNT_SLACK) / trials)
    lower = float(np.count_nonzero(sums <= lo + COUNT_SLACK) / trials)
    bound = 2.0 ** (-N * p * eta**2 / (2 * LN2))
    exact_upper = float(binom.sf(math.ceil(hi - COUNT_SLACK) - 1, N, p))
    exact_lower = float(binom.cdf(math.floor(lo + COUNT_SLACK), N, p)) if lo >= 0 else 0.0
    return BoundCheckResult(
        "chernoff",
        bound,
        upper,
        _mc_method(trials, seed),
        upper <= bound and lower <= bound,
        {
            "p": p, "eta": eta, "N": N,
            "lower_tail": lower,
            "exact_upper_tail": exact_upper,
            "exact_lower_tail": exact_lower,
        },
    )


def separation_test_width(W: Channel, sigma: float, eta: float) -> float:
    return sigma**2 * eta / (2 * W.nx**2 * W.nz)


def distinct_types_check(
    W: Channel,
    x,
    y,
    sigma: float,
    trials: int,
    seed: int,
    eta: float | None = None,
    limit: int = TYPE_LIMIT,
) -> BoundCheckResult:
    """Probability that the output for ``y`` looks typical for a distant ``x``.

    With ``eps = sigma^2 eta / (2|X|^2|Z|)`` the probability is compared to
    ``2 * exp2(-n eps^4 / 2)``. The Monte Carlo estimate is the measured value;
    the exact value is added to ``detail`` whenever it can be enumerated.
    """
    from .channel import separation_eta

    x, y = np.asarray(x), np.asarray(y)
    n = x.size
    if y.size != n:
        raise ValueError("words differ in length")
    if sigma <= 0 or hamming_distance(x, y) < sigma * n - COUNT_SLACK:
        raise ValueError(f"need d_H(x, y) >= sigma*n = {sigma * n}")
    if eta is None:
        eta = separation_eta(W)
    eps = separation_test_width(W, sigma, eta)
    bound = 2 * 2.0 ** (-n * eps**4 / 2)
    detail: dict = {"n": n, "eps": eps, "eta": eta, "sigma": sigma}
    try:
        detail["exact"] = cond_typical_prob_sender(W, x, y, eps, limit)
    except EnumerationLimitError:
        pass
    if trials > 0:
        rng = np.random.default_rng(seed)
        zs = sample_channel_batch(W, y, trials, rng)
        measured = float(cond_typical_batch(zs, W, x, eps).mean())
        method = _mc_method(trials, seed)
    else:
        measured, method = detail["exact"], "exact"
    return BoundCheckResult("distinct_types", bound, measured, method, measured <= bound, detail)
