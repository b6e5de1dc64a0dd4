"""Random commitment codes, their parameters, and the commit/reveal protocol.

Alice commits to a message ``a`` by choosing a key ``mu`` uniformly and sending
codeword ``(a, mu)`` through the noisy channel. To reveal she announces both
indices; Bob accepts iff his output is conditionally typical for that codeword.

Two parameter regimes exist. *Theory* mode evaluates the asymptotic formulas
exactly (they are vacuous at any block length a desktop can simulate).
*Desk* mode takes user-chosen sizes and typicality widths and only promises
the structural properties: pairwise distance and typical codewords.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .channel import (
    Channel,
    ChannelError,
    binary_entropy,
    channel_from_dict,
    check_distribution,
    equivocation,
    is_trivial,
    mutual_information,
    nonredundant_reduce,
    output_distribution,
    separation_eta,
)
from .rng import check_seed, derive_seed, rng_for
from .typicality import (
    cond_typical_batch,
    cond_typical_prob_exact,
    const_D,
    const_E,
    hamming_distance,
    representative_word,
    sample_channel_batch,
    typical_batch,
    typical_prob_exact,
)

SECURITY_TARGET = 0.01


class CodebookConstructionError(RuntimeError):
    pass


class Verdict(str, enum.Enum):
    ACC = "ACC"
    REJ = "REJ"


def g_doubleprime(sigma: float, nx: int) -> float:
    """Rate loss from the distance constraint: H(2s, 1-2s) + 2s log|X|."""
    return binary_entropy(2 * sigma) + 2 * sigma * math.log2(nx)


def tau_of(sigma: float, eta: float, nx: int, nz: int) -> float:
    return sigma**4 * eta**2 / (8 * nx**4 * nz**2)


@dataclass
class ParameterSet:
    P: np.ndarray
    n: int
    sigma: float
    tau: float
    eta: float
    epsilon_test: float
    epsilon_code: float
    D: float
    E: float
    F: float
    G: float
    G_prime: float
    G_doubleprime: float
    K_bound: float  # log2 of the guaranteed number of messages
    L_bound: float  # log2 of the key-count ceiling
    rate_lower_bound: float
    epsilon_bound: float
    epsilon_code_bound: float
    delta_bound: float
    crossover_n_epsilon: int
    crossover_n_delta: int
    mode: str = "theory"
    K: int | None = None
    L: int | None = None

    @property
    def analytic_bounds_apply(self) -> bool:
        return self.mode == "theory"

    @property
    def K_bound_at_least_one(self) -> bool:
        return self.K_bound >= 0

    def to_dict(self) -> dict:
        d = {k: v for k, v in self.__dict__.items()}
        d["P"] = self.P.tolist()
        d["analytic_bounds_apply"] = self.analytic_bounds_apply
        d["K_bound_at_least_one"] = self.K_bound_at_least_one
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ParameterSet":
        d = {k: v for k, v in d.items() if k in cls.__dataclass_fields__}
        d["P"] = np.asarray(d["P"], dtype=float)
        return cls(**d)


def _crossover(target: float, prefactor: float, exponent_rate: float) -> int:
    """Smallest n with prefactor * 2^(-n * rate) < target."""
    if exponent_rate <= 0:
        return -1
    return int(math.floor(math.log2(prefactor / target) / exponent_rate)) + 1


def desk_eps(check, target: float, iters: int = 40) -> float:
    """Smallest width in (0, 1] with ``check(width) >= target``, by bisection."""
    lo, hi = 0.0, 1.0
    if check(hi) < target:
        return hi
    for _ in range(iters):
        mid = (lo + hi) / 2
        if check(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi


def derive_parameters(
    W: Channel,
    P,
    n: int,
    sigma: float,
    mode: str = "theory",
    *,
    K: int | None = None,
    L: int | None = None,
    eps_code: float | None = None,
    eps_test: float | None = None,
    test_target: float = 0.995,
    code_target: float = 0.9,
) -> ParameterSet:
    """Evaluate every constant of the random-coding construction.

    In theory mode both typicality widths equal sqrt(2 tau). In desk mode the
    widths default to the smallest values whose exact honest-acceptance
    (resp. codeword-typicality) probability reaches ``test_target``
    (resp. ``code_target``) at this block length.
    """
    if not 0 < sigma < 0.5:
        raise ValueError("sigma must lie in (0, 1/2)")
    if n < 1:
        raise ValueError("block length must be positive")
    if mode not in ("theory", "desk"):
        raise ValueError("mode is 'theory' or 'desk'")
    P = check_distribution(P, W.nx, "input distribution")
    red = nonredundant_reduce(W)
    if red.reduced_channel.nx != W.nx:
        raise ChannelError("channel is redundant; reduce it first")
    if is_trivial(W):
        raise ChannelError("trivial channel: no commitment is possible")

    nx, nz = W.nx, W.nz
    eta = separation_eta(W)
    tau = tau_of(sigma, eta, nx, nz)
    Q = output_distribution(W, P)
    D = const_D(P)
    E = const_E(W)
    F = float(-np.log2(Q[Q > 0]).sum())
    G = 3 + nx * F + nx * math.log2(nz) + E
    Gp = G + 2 * D
    Gpp = g_doubleprime(sigma, nx)
    root = math.sqrt(2 * tau)
    hxz = equivocation(W, P)
    ixz = mutual_information(W, P)
    c = 3 + math.log2(nx) + math.log2(nz)
    K_bound = -1 - math.log2(n) - math.log2(c) + n * (hxz - root * Gp - Gpp)
    L_bound = math.log2(n) + math.log2(c) + n * (ixz + root * G)

    if mode == "theory":
        e_test = e_code = root
    else:
        xn = representative_word(P, n)
        e_test = eps_test if eps_test is not None else desk_eps(
            lambda e: cond_typical_prob_exact(W, xn, e), test_target
        )
        e_code = eps_code if eps_code is not None else desk_eps(
            lambda e: typical_prob_exact(P, n, e), code_target
        )
    return ParameterSet(
        P=P, n=n, sigma=sigma, tau=tau, eta=eta,
        epsilon_test=e_test, epsilon_code=e_code,
        D=D, E=E, F=F, G=G, G_prime=Gp, G_doubleprime=Gpp,
        K_bound=K_bound, L_bound=L_bound,
        rate_lower_bound=hxz - root * Gp - Gpp,
        epsilon_bound=50 * nx * nz * 2.0 ** (-n * tau),
        epsilon_code_bound=25 * nx * nz * 2.0 ** (-n * tau),
        delta_bound=2 * nx * nz * 2.0 ** (-2 * n * tau**2),
        crossover_n_epsilon=_crossover(SECURITY_TARGET, 50 * nx * nz, tau),
        crossover_n_delta=_crossover(SECURITY_TARGET, 2 * nx * nz, 2 * tau**2),
        mode=mode, K=K, L=L,
    )


# -- codebook ----------------------------------------------------------------------


@dataclass
class Codebook:
    """K x L array of length-n codewords, with its channel and parameters.

    Messages ``a`` and keys ``mu`` are 1-based in the public API.
    """

    codewords: np.ndarray  # shape (K, L, n), symbol indices
    params: ParameterSet
    channel: Channel
    seed: int
    construction_log: dict = field(default_factory=dict)

    @property
    def K(self) -> int:
        return self.codewords.shape[0]

    @property
    def L(self) -> int:
        return self.codewords.shape[1]

    @property
    def n(self) -> int:
        return self.codewords.shape[2]

    @property
    def eps_test(self) -> float:
        return self.params.epsilon_test

    def codeword(self, a: int, mu: int) -> np.ndarray:
        if not (1 <= a <= self.K and 1 <= mu <= self.L):
            raise IndexError(f"codeword ({a}, {mu}) outside 1..{self.K} x 1..{self.L}")
        return self.codewords[a - 1, mu - 1]

    def flat(self) -> np.ndarray:
        return self.codewords.reshape(self.K * self.L, self.n)

    def min_distance(self) -> int:
        words = self.flat()
        if len(words) < 2:
            return self.n
        d = pairwise_hamming(words, self.channel.nx)
        np.fill_diagonal(d, self.n + 1)
        return int(d.min())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "K": self.K,
            "L": self.L,
            "input_alphabet": list(self.channel.input_alphabet),
            "channel": self.channel.to_dict(),
            "channel_hash": self.channel.digest(),
            "seed": self.seed,
            "params": self.params.to_dict(),
            "construction_log": self.construction_log,
            "codewords": self.codewords.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Codebook":
        W = channel_from_dict(d["channel"])
        if "channel_hash" in d and d["channel_hash"] != W.digest():
            raise ValueError("codebook channel hash mismatch")
        cw = np.asarray(d["codewords"], dtype=np.int64)
        if cw.shape != (d["K"], d["L"], d["n"]):
            raise ValueError("codeword array does not match K, L, n")
        return cls(cw, ParameterSet.from_dict(d["params"]), W, int(d["seed"]), d.get("construction_log", {}))

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Codebook":
        return cls.from_dict(json.loads(text))

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()


def pairwise_hamming(words: np.ndarray, k: int) -> np.ndarray:
    words = np.asarray(words)
    n = words.shape[1]
    agree = np.zeros((len(words), len(words)), dtype=np.int64)
    for x in range(k):
        onehot = (words == x).astype(np.int64)
        agree += onehot @ onehot.T
    return n - agree


def sample_typical_words(P, n: int, eps: float, count: int, rng: np.random.Generator, max_rounds: int = 1000) -> np.ndarray:
    """``count`` i.i.d. draws from P^n conditioned on the eps-typical set."""
    P = np.asarray(P, dtype=float)
    got: list[np.ndarray] = []
    have = 0
    batch = max(count, 16)
    for _ in range(max_rounds):
        words = rng.choice(P.size, size=(batch, n), p=P)
        words = words[typical_batch(words, P, eps)]
        got.append(words)
        have += len(words)
        if have >= count:
            return np.concatenate(got)[:count]
        batch *= 2 if have == 0 else 1
    raise CodebookConstructionError("typical set is too unlikely to sample from")


def build_codebook(
    W: Channel,
    params: ParameterSet,
    K: int,
    L: int,
    seed: int,
    max_attempts: int = 20,
    oversample: int = 2,
) -> Codebook:
    """Random code with expurgation.

    Draws ``oversample*K`` rows of ``oversample*L`` typical words, marks a
    word bad when another drawn word lies within Hamming distance 2*sigma*n,
    drops bad words, keeps rows that still have at least ``L`` words, and
    truncates to ``K`` rows of ``L``. Retries with fresh randomness when too
    few rows survive.
    """
    if K < 1 or L < 1:
        raise ValueError("need K >= 1 and L >= 1")
    n = params.n
    if not 2 * params.sigma * n < n:
        raise ValueError("2*sigma*n must be below n")
    check_seed(seed)
    if K * L == 1:
        oversample = 1
    Kp, Lp = oversample * K, oversample * L
    min_dist = 2 * params.sigma * n
    rows_seen = []
    for attempt in range(max_attempts):
        rng = rng_for(seed, attempt)
        words = sample_typical_words(params.P, n, params.epsilon_code, Kp * Lp, rng)
        d = pairwise_hamming(words, W.nx)
        np.fill_diagonal(d, n + 1)
        bad = (d < min_dist - 1e-9).any(axis=1).reshape(Kp, Lp)
        good_counts = (~bad).sum(axis=1)
        rows = np.flatnonzero(good_counts >= L)
        rows_seen.append(int(len(rows)))
        if len(rows) >= K:
            grid = words.reshape(Kp, Lp, n)
            chosen = np.stack([grid[r][~bad[r]][:L] for r in rows[:K]])
            log = {
                "attempts": attempt + 1,
                "sampled_rows": Kp,
                "sampled_keys": Lp,
                "bad_entries": int(bad.sum()),
                "rows_dropped": int(Kp - len(rows)),
                "surviving_rows_per_attempt": rows_seen,
            }
            params = params if params.K is not None else _with_sizes(params, K, L)
            return Codebook(chosen, params, W, seed, log)
    raise CodebookConstructionError(
        f"only {max(rows_seen)} of {K} rows survived expurgation in {max_attempts} attempts; "
        f"K*L={K * L} words at pairwise distance {min_dist:g} may not fit in length {n}"
    )


def _with_sizes(params: ParameterSet, K: int, L: int) -> ParameterSet:
    d = dict(params.__dict__)
    d.update(K=K, L=L)
    return ParameterSet(**d)


def verify_codebook(book: Codebook) -> dict:
    """Recheck the structural invariants: distance and codeword typicality."""
    words = book.flat()
    typical = typical_batch(words, book.params.P, book.params.epsilon_code)
    dmin = book.min_distance()
    need = 2 * book.params.sigma * book.n
    return {
        "min_distance": dmin,
        "required_distance": need,
        "distance_ok": len(words) < 2 or dmin >= need - 1e-9,
        "all_typical": bool(typical.all()),
    }


# -- protocol -----------------------------------------------------------------------


def simulate_channel(W: Channel, x, seed: int) -> np.ndarray:
    """One use of W^n on the word ``x``; deterministic given ``seed``."""
    x = np.asarray(x, dtype=np.int64)
    return sample_channel_batch(W, x, 1, rng_for(seed))[0]


@dataclass(frozen=True)
class AliceState:
    a: int
    mu: int


def commit(book: Codebook, a: int, seed: int) -> tuple[AliceState, np.ndarray]:
    if not 1 <= a <= book.K:
        raise IndexError(f"message {a} outside 1..{book.K}")
    mu = int(rng_for(seed).integers(1, book.L + 1))
    return AliceState(a, mu), book.codeword(a, mu)


def reveal_verify(book: Codebook, received, claimed: tuple[int, int]) -> tuple[Verdict, str]:
    """Bob's test: accept iff ``received`` is conditionally typical for the claim.

    Out-of-range claims are rejected with a diagnostic rather than raising.
    """
    a, mu = claimed
    if not (1 <= a <= book.K and 1 <= mu <= book.L):
        return Verdict.REJ, f"claim ({a}, {mu}) outside 1..{book.K} x 1..{book.L}"
    received = np.asarray(received)
    if received.shape != (book.n,):
        return Verdict.REJ, "received word has the wrong length"
    ok = bool(cond_typical_batch(received, book.channel, book.codeword(a, mu), book.eps_test))
    return (Verdict.ACC, "typical") if ok else (Verdict.REJ, "not conditionally typical")


@dataclass
class Transcript:
    a: int
    mu: int
    sent: np.ndarray
    received: np.ndarray
    revealed: tuple[int, int]
    verdict: Verdict
    seed: int

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "mu": self.mu,
            "sent": self.sent.tolist(),
            "received": self.received.tolist(),
            "revealed": list(self.revealed),
            "verdict": self.verdict.value,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Transcript":
        return cls(
            d["a"], d["mu"], np.asarray(d["sent"]), np.asarray(d["received"]),
            tuple(d["revealed"]), Verdict(d["verdict"]), d["seed"],
        )


def run_protocol(book: Codebook, W: Channel | None, a: int, seed: int) -> Transcript:
    """Honest commit, channel use and reveal.

    ``W`` is the physical channel; ``None`` means the codebook's own.
    """
    W = book.channel if W is None else W
    state, sent = commit(book, a, derive_seed(seed, 0))
    received = simulate_channel(W, sent, derive_seed(seed, 1))
    verdict, _ = reveal_verify(book, received, (state.a, state.mu))
    return Transcript(a, state.mu, sent, received, (state.a, state.mu), verdict, seed)


def replay_verdict(book: Codebook, t: Transcript) -> Verdict:
    return reveal_verify(book, t.received, t.revealed)[0]


def honest_acceptance_floor(book: Codebook) -> float:
    """Smallest exact honest-acceptance probability over all codewords."""
    return min(cond_typical_prob_exact(book.channel, w, book.eps_test) for w in book.flat())


def codeword_distance_to(book: Codebook, x) -> np.ndarray:
    return np.array([[hamming_distance(book.codewords[a, m], x) for m in range(book.L)] for a in range(book.K)])
