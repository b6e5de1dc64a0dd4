"""Commitment capacity (maximal equivocation) and transmission capacity.

The equivocation H(X|Z) is maximized over the input simplex by projected
gradient ascent from many starting points; for up to three inputs the result
is certified against a dense simplex grid with local refinement. Blahut-Arimoto
gives the ordinary capacity for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import (
    Channel,
    ChannelError,
    check_distribution,
    equivocation,
    is_trivial,
    mutual_information,
    nonredundant_reduce,
    row_entropies,
    separation_eta,
)

LN2 = math.log(2.0)
BOUNDARY_CLIP = 1e-12


@dataclass
class CapacityResult:
    value: float
    argmax: np.ndarray
    method: str
    iterations: int
    gap_estimate: float
    diagnostics: dict = field(default_factory=dict)


@dataclass
class AscentOptions:
    tolerance: float = 1e-6
    restarts: int = 32
    seed: int = 0
    grad_tol: float = 1e-9
    max_iter: int = 10_000
    grid_step: float = 1e-3
    use_grid: bool | None = None  # None: grid oracle whenever |X| <= 3


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    ind = np.arange(1, v.size + 1)
    rho = np.count_nonzero(u - css / ind > 0)
    theta = css[rho - 1] / rho
    return np.maximum(v - theta, 0.0)


def _entropy_rows(A: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(A > 0, A * np.log2(A), 0.0)
    return -t.sum(axis=-1)


def equivocation_many(W: Channel, Ps: np.ndarray) -> np.ndarray:
    """H(X|Z) for each row of ``Ps``."""
    Ps = np.atleast_2d(Ps)
    return _entropy_rows(Ps) + Ps @ row_entropies(W) - _entropy_rows(Ps @ W.matrix)


def equivocation_gradient(W: Channel, P) -> np.ndarray:
    """Gradient of H(P) + sum_x P(x) H(W_x) - H(PW) at an interior point.

    Coordinates are the unconstrained entries of ``P``; only differences
    between components matter on the simplex.
    """
    P = check_distribution(P, W.nx, "input distribution")
    if np.any(P <= 0):
        raise ChannelError("gradient is singular on the simplex boundary")
    return _gradient(W.matrix, row_entropies(W), P)


def _gradient(M: np.ndarray, h: np.ndarray, P: np.ndarray) -> np.ndarray:
    Q = P @ M
    with np.errstate(divide="ignore"):
        logq = np.where(Q > 0, np.log2(Q), 0.0)
    return -np.log2(P) - 1 / LN2 + h + M @ (logq + 1 / LN2)


def _ascend(W: Channel, P0: np.ndarray, opts: AscentOptions) -> tuple[np.ndarray, float, int, float]:
    M, h = W.matrix, row_entropies(W)

    def clip(P):
        P = np.maximum(P, BOUNDARY_CLIP)
        return P / P.sum()

    def F(P):
        return float(equivocation_many(W, P)[0])

    P = clip(P0)
    f = F(P)
    t = 1.0
    resid = math.inf
    it = 0
    for it in range(1, opts.max_iter + 1):
        g = _gradient(M, h, P)
        resid = float(np.abs(project_simplex(P + g) - P).max())
        if resid < opts.grad_tol:
            break
        while True:
            Pn = clip(project_simplex(P + t * g))
            fn = F(Pn)
            if fn >= f + 1e-4 * float(g @ (Pn - P)) or t < 1e-14:
                break
            t *= 0.5
        if fn <= f and np.abs(Pn - P).max() < 1e-15:
            break
        P, f = Pn, fn
        t = min(2 * t, 1e3)
    return P, f, it, resid


def _simplex_grid(nx: int, step: float) -> np.ndarray:
    from .typicality import compositions

    m = int(round(1 / step))
    return compositions(m, nx, limit=10**8) / m


def _grid_oracle(W: Channel, step: float) -> tuple[np.ndarray, float]:
    Ps = _simplex_grid(W.nx, step)
    vals = equivocation_many(W, Ps)
    best = int(np.argmax(vals))
    P, f = Ps[best], float(vals[best])
    h = step
    for _ in range(4):
        half = 2 * h
        h /= 10
        axes = [np.arange(P[i] - half, P[i] + half + h / 2, h) for i in range(W.nx - 1)]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, W.nx - 1)
        last = 1 - mesh.sum(axis=1)
        cand = np.column_stack([mesh, last])
        cand = cand[np.all(cand >= -1e-15, axis=1)]
        cand = np.clip(cand, 0, None)
        cand /= cand.sum(axis=1, keepdims=True)
        vals = equivocation_many(W, cand)
        j = int(np.argmax(vals))
        if vals[j] > f:
            P, f = cand[j], float(vals[j])
    return P, f


def _embed(P_red: np.ndarray, retained, nx: int) -> np.ndarray:
    out = np.zeros(nx)
    out[list(retained)] = P_red
    return out


def maximize_equivocation(W: Channel, options: AscentOptions | None = None) -> CapacityResult:
    """Commitment capacity: max over input distributions of H(X|Z).

    The channel is reduced to its extremal inputs first; a trivial channel
    returns zero at once. The argmax is reported over the original inputs,
    with zero mass on removed symbols.
    """
    opts = options or AscentOptions()
    red = nonredundant_reduce(W)
    R = red.reduced_channel
    if is_trivial(W):
        P = _embed(np.full(R.nx, 1 / R.nx), red.retained_indices, W.nx)
        return CapacityResult(0.0, P, "trivial", 0, 0.0, {"trivial": True})

    rng = np.random.default_rng(opts.seed)
    starts = [np.full(R.nx, 1 / R.nx)] + [rng.dirichlet(np.ones(R.nx)) for _ in range(opts.restarts - 1)]
    runs = []
    total_iter = 0
    for P0 in starts:
        P, f, it, resid = _ascend(R, P0, opts)
        total_iter += it
        runs.append((f, P, resid))
    values = sorted((r[0] for r in runs), reverse=True)
    best_f, best_P, best_resid = runs[0]
    for f, P, resid in runs[1:]:
        if f > best_f:
            best_f, best_P, best_resid = f, P, resid
    diag = {
        "restarts": len(runs),
        "restart_spread": values[0] - values[-1],
        "projected_gradient_residual": best_resid,
        "reduced_inputs": list(R.input_alphabet),
    }
    method = "multistart_ascent"
    gap = values[0] - values[1] if len(values) > 1 else 0.0

    use_grid = opts.use_grid if opts.use_grid is not None else R.nx <= 3
    if use_grid:
        gP, gf = _grid_oracle(R, opts.grid_step)
        gap = abs(gf - best_f)
        diag.update(grid_value=gf, grid_argmax=gP.tolist(), certified=gap <= opts.tolerance)
        if gf > best_f:
            best_f, best_P = gf, gP
            method = "grid"

    P = _embed(best_P, red.retained_indices, W.nx)
    value = equivocation(W, P)
    return CapacityResult(value, P, method, total_iter, gap, diag)


def blahut_arimoto(W: Channel, tolerance: float = 1e-9, max_iter: int = 100_000) -> CapacityResult:
    """Transmission capacity max_P I(X;Z) by alternating maximization.

    Stops once the bracket  I(P) <= C <= max_x D(W_x || PW)  is narrower than
    ``tolerance``. The lower-bound history is kept in ``diagnostics``.
    """
    M = W.matrix
    P = np.full(W.nx, 1 / W.nx)
    history = []
    lower = upper = 0.0
    it = 0
    for it in range(1, max_iter + 1):
        Q = P @ M
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(M > 0, M * np.log2(M / Q), 0.0)
        Dx = ratio.sum(axis=1)
        lower = float(P @ Dx)
        upper = float(Dx.max())
        history.append(lower)
        if upper - lower < tolerance:
            break
        P = P * np.exp2(Dx - Dx.max())
        P /= P.sum()
    value = mutual_information(W, P)
    return CapacityResult(
        value, P, "blahut_arimoto", it, upper - lower,
        {"lower_history": history, "upper": upper},
    )


@dataclass
class CapacityReport:
    C_com: float
    C: float
    argmax_com: np.ndarray
    argmax_C: np.ndarray
    trivial: bool
    eta: float | None
    total: float
    entropy_ceiling: float
    exceeds_ceiling: bool
    removed_symbols: list
    deduplicated: list

    def to_dict(self) -> dict:
        return {
            "C_com": self.C_com,
            "C": self.C,
            "argmax_com": self.argmax_com.tolist(),
            "argmax_C": self.argmax_C.tolist(),
            "trivial": self.trivial,
            "eta": self.eta,
            "sum": self.total,
            "log_min_alphabet": self.entropy_ceiling,
            "sum_exceeds_log_min_alphabet": self.exceeds_ceiling,
            "removed_symbols": [[s, w] for s, w in self.removed_symbols],
            "deduplicated": self.deduplicated,
        }


def capacity_report(W: Channel, options: AscentOptions | None = None) -> CapacityReport:
    opts = options or AscentOptions()
    red = nonredundant_reduce(W)
    com = maximize_equivocation(W, opts)
    ba = blahut_arimoto(W, tolerance=min(opts.tolerance, 1e-9))
    eta = separation_eta(red.reduced_channel)
    ceiling = math.log2(min(W.nx, W.nz))
    total = com.value + ba.value
    return CapacityReport(
        C_com=com.value,
        C=ba.value,
        argmax_com=com.argmax,
        argmax_C=ba.argmax,
        trivial=com.method == "trivial",
        eta=None if math.isinf(eta) else eta,
        total=total,
        entropy_ceiling=ceiling,
        exceeds_ceiling=total > ceiling + opts.tolerance,
        removed_symbols=red.removed_symbols,
        deduplicated=red.deduplicated,
    )
