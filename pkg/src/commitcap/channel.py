"""Discrete memoryless channels and their information functionals.

A channel is a row-stochastic matrix: row ``x`` is the output distribution
``W_x`` over the output alphabet. Every information quantity is in bits.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

ROW_SUM_TOL = 1e-9
EXTREMAL_TOL = 1e-9
SUPPORT_TOL = 1e-12


class ChannelError(ValueError):
    """Raised for malformed channel descriptions or mismatched dimensions."""


@dataclass(frozen=True, eq=False)
class Channel:
    input_alphabet: tuple[str, ...]
    output_alphabet: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        ins = tuple(str(s) for s in self.input_alphabet)
        outs = tuple(str(s) for s in self.output_alphabet)
        if not ins or not outs:
            raise ChannelError("alphabets must be non-empty")
        if len(set(ins)) != len(ins) or len(set(outs)) != len(outs):
            raise ChannelError("duplicate alphabet labels")
        m = np.array(self.matrix, dtype=float)
        if m.shape != (len(ins), len(outs)):
            raise ChannelError(
                f"matrix shape {m.shape} does not match alphabets ({len(ins)}, {len(outs)})"
            )
        if not np.all(np.isfinite(m)):
            raise ChannelError("matrix has non-finite entries")
        if np.any(m < 0):
            raise ChannelError("negative transition probability")
        sums = m.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > ROW_SUM_TOL)
        if bad.size:
            raise ChannelError(f"row {ins[bad[0]]!r} sums to {sums[bad[0]]!r}, not 1")
        m = m / sums[:, None]
        m.setflags(write=False)
        object.__setattr__(self, "input_alphabet", ins)
        object.__setattr__(self, "output_alphabet", outs)
        object.__setattr__(self, "matrix", m)

    @property
    def nx(self) -> int:
        return len(self.input_alphabet)

    @property
    def nz(self) -> int:
        return len(self.output_alphabet)

    def row(self, x: int) -> np.ndarray:
        return self.matrix[x]

    def to_dict(self) -> dict:
        return {
            "input": list(self.input_alphabet),
            "output": list(self.output_alphabet),
            "matrix": self.matrix.tolist(),
        }

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form; stable across runs."""
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def restrict(self, inputs: Sequence[int]) -> "Channel":
        idx = list(inputs)
        return Channel(
            tuple(self.input_alphabet[i] for i in idx),
            self.output_alphabet,
            self.matrix[idx],
        )

    def __repr__(self):
        return f"Channel({list(self.input_alphabet)} -> {list(self.output_alphabet)})"


@dataclass(frozen=True)
class ReductionReport:
    """Outcome of removing non-extremal inputs.

    ``removed_symbols`` pairs each removed label with its witness, a mapping
    from retained labels to convex weights reproducing the removed row.
    ``deduplicated`` lists groups of labels with identical rows; the first
    label of each group is the one kept.
    """

    reduced_channel: Channel
    removed_symbols: list[tuple[str, dict[str, float]]]
    deduplicated: list[list[str]]
    retained_indices: tuple[int, ...] = field(default=())


def channel_from_dict(obj: dict) -> Channel:
    try:
        return Channel(tuple(obj["input"]), tuple(obj["output"]), np.asarray(obj["matrix"], dtype=float))
    except (KeyError, TypeError) as exc:
        raise ChannelError(f"bad channel object: {exc}") from exc


def load_channel(content: str) -> Channel:
    """Parse a channel from its JSON text form.

    The object needs ``input``, ``output`` (label arrays) and ``matrix``
    (one row per input). Rows are renormalized only when already within
    1e-9 of summing to one.
    """
    try:
        obj = json.loads(content)
    except json.JSONDecodeError as exc:
        raise ChannelError(f"cannot parse channel: {exc}") from exc
    if not isinstance(obj, dict):
        raise ChannelError("channel file must hold a single object")
    return channel_from_dict(obj)


def dump_channel(W: Channel) -> str:
    return json.dumps(W.to_dict(), indent=2) + "\n"


def bsc(p: float) -> Channel:
    """Binary symmetric channel with crossover probability ``p``."""
    return Channel(("0", "1"), ("0", "1"), np.array([[1 - p, p], [p, 1 - p]]))


def check_distribution(p, size: int | None = None, name: str = "distribution") -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise ChannelError(f"{name} must be a vector")
    if size is not None and p.size != size:
        raise ChannelError(f"{name} has length {p.size}, expected {size}")
    if np.any(p < 0) or abs(p.sum() - 1.0) > ROW_SUM_TOL:
        raise ChannelError(f"{name} is not a probability vector")
    return p


def _plogp(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p, dtype=float)
    nz = p > 0
    out[nz] = p[nz] * np.log2(p[nz])
    return out


def entropy(p) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0."""
    p = check_distribution(p)
    return float(max(0.0, -_plogp(p).sum()))


def binary_entropy(p: float) -> float:
    if p <= 0 or p >= 1:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def output_distribution(W: Channel, P) -> np.ndarray:
    P = check_distribution(P, W.nx, "input distribution")
    return P @ W.matrix


def row_entropies(W: Channel) -> np.ndarray:
    return -_plogp(W.matrix).sum(axis=1)


def conditional_entropy(W: Channel, P) -> float:
    """H(W|P) = sum_x P(x) H(W_x)."""
    P = check_distribution(P, W.nx, "input distribution")
    return float(P @ row_entropies(W))


def equivocation(W: Channel, P) -> float:
    """H(X|Z) for X ~ P sent through W, via H(P) + H(W|P) - H(Q)."""
    P = check_distribution(P, W.nx, "input distribution")
    val = entropy(P) + conditional_entropy(W, P) - entropy(output_distribution(W, P))
    return max(0.0, val)


def mutual_information(W: Channel, P) -> float:
    """I(X;Z) = H(Q) - H(W|P)."""
    P = check_distribution(P, W.nx, "input distribution")
    return max(0.0, entropy(output_distribution(W, P)) - conditional_entropy(W, P))


def hull_distance(target: np.ndarray, points: np.ndarray) -> tuple[float, np.ndarray]:
    """L1 distance from ``target`` to the convex hull of the rows of ``points``.

    Solved as a linear program; the returned distance is recomputed from the
    (clipped, renormalized) weights so it is always attained by them.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    m, d = points.shape
    if m == 1:
        return float(np.abs(target - points[0]).sum()), np.ones(1)
    # variables: weights (m), slacks (d); minimize sum of slacks
    c = np.concatenate([np.zeros(m), np.ones(d)])
    a_ub = np.block([[-points.T, -np.eye(d)], [points.T, -np.eye(d)]])
    b_ub = np.concatenate([-target, target])
    a_eq = np.concatenate([np.ones(m), np.zeros(d)])[None, :]
    res = linprog(
        c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[1.0], bounds=(0, None), method="highs",
        options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
    )
    if res.status != 0:  # pragma: no cover - tiny LPs are always feasible
        raise RuntimeError(f"hull distance LP failed: {res.message}")
    lam = np.clip(res.x[:m], 0, None)
    lam /= lam.sum()
    return float(np.abs(target - lam @ points).sum()), lam


def _dedupe(W: Channel) -> tuple[list[int], list[list[int]]]:
    keep: list[int] = []
    groups: dict[int, list[int]] = {}
    for x in range(W.nx):
        for k in keep:
            if np.abs(W.matrix[x] - W.matrix[k]).sum() < EXTREMAL_TOL:
                groups[k].append(x)
                break
        else:
            keep.append(x)
            groups[x] = [x]
    return keep, [g for g in groups.values() if len(g) > 1]


def nonredundant_reduce(W: Channel) -> ReductionReport:
    """Drop every input whose row is not an extreme point of the row hull.

    Duplicate rows are merged first (lowest index kept), then each remaining
    row is tested against the hull of the others.
    """
    keep, dup_groups = _dedupe(W)
    retained = []
    for x in keep:
        others = [y for y in keep if y != x]
        if not others:
            retained.append(x)
            continue
        dist, _ = hull_distance(W.matrix[x], W.matrix[others])
        if dist >= EXTREMAL_TOL:
            retained.append(x)
    removed = []
    for x in keep:
        if x in retained:
            continue
        dist, lam = hull_distance(W.matrix[x], W.matrix[retained])
        witness = {W.input_alphabet[y]: float(w) for y, w in zip(retained, lam) if w > 0}
        removed.append((W.input_alphabet[x], witness))
    return ReductionReport(
        reduced_channel=W.restrict(retained),
        removed_symbols=removed,
        deduplicated=[[W.input_alphabet[i] for i in g] for g in dup_groups],
        retained_indices=tuple(retained),
    )


def witness_error(W: Channel, symbol: str, witness: dict[str, float]) -> float:
    """L1 error of a removal witness against the original row."""
    idx = {s: i for i, s in enumerate(W.input_alphabet)}
    mix = sum(w * W.matrix[idx[s]] for s, w in witness.items())
    return float(np.abs(W.matrix[idx[symbol]] - mix).sum())


def is_trivial(W: Channel) -> bool:
    """True when the reduced rows have pairwise disjoint supports."""
    R = nonredundant_reduce(W).reduced_channel.matrix
    support = R > SUPPORT_TOL
    overlap = support.astype(int) @ support.T.astype(int)
    np.fill_diagonal(overlap, 0)
    return not overlap.any()


def separation_eta(W: Channel) -> float:
    """Smallest L1 distance from a row to the hull of the remaining rows.

    Requires a non-redundant channel. A single-input channel has no "other"
    rows and gets ``inf``.
    """
    if W.nx == 1:
        return math.inf
    eta = math.inf
    for x in range(W.nx):
        others = [y for y in range(W.nx) if y != x]
        dist, _ = hull_distance(W.matrix[x], W.matrix[others])
        eta = min(eta, dist)
    if eta < EXTREMAL_TOL:
        raise ChannelError("channel is redundant; reduce it before computing eta")
    return eta


BUNDLED = ("bsc_0.1", "T", "V", "F", "identity2")


def bundled_channel(name: str) -> Channel:
    """Load one of the channel files shipped with the package (see ``BUNDLED``)."""
    from importlib.resources import files

    if name not in BUNDLED:
        raise ChannelError(f"no bundled channel {name!r}; choose from {BUNDLED}")
    return load_channel(files("commitcap.data").joinpath(f"{name}.json").read_text())
