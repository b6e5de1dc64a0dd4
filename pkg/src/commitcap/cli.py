"""Command-line front end.

Every command prints a human-readable report (or JSON with ``--json``) and
can write the machine-readable report with ``--report``. Exit status is 0
when every check in the report passed, 1 when a check failed and 2 for
usage or input errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .capacity import AscentOptions, capacity_report, maximize_equivocation, blahut_arimoto
from .channel import BUNDLED, Channel, ChannelError, bundled_channel, load_channel, witness_error
from .commitment import (
    Codebook,
    CodebookConstructionError,
    Transcript,
    build_codebook,
    derive_parameters,
    replay_verdict,
    run_protocol,
    verify_codebook,
)
from .report import Report, to_jsonable
from .rng import derive_seed
from .security import binding_attack, converse_audit, measure_concealing, measure_soundness, remark_f_scheme
from .typicality import EnumerationLimitError, chernoff_check, verify_bound_suite

THREADS_ENV = "COMMITCAP_THREADS"


class UsageError(Exception):
    pass


# -- input helpers ---------------------------------------------------------------------


def read_channel(source: str) -> Channel:
    """A file path, or the name of a bundled channel."""
    path = Path(source)
    if path.is_file():
        return load_channel(path.read_text())
    if source in BUNDLED:
        return bundled_channel(source)
    raise UsageError(f"no channel file {source!r} (bundled names: {', '.join(BUNDLED)})")


def read_codebook(path: str) -> Codebook:
    try:
        return Codebook.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read codebook: {exc}") from exc
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad codebook file {path}: {exc}") from exc


def parse_distribution(text: str | None, size: int) -> np.ndarray:
    if text is None:
        return np.full(size, 1 / size)
    try:
        P = np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"bad distribution {text!r}") from exc
    if P.size != size:
        raise UsageError(f"distribution needs {size} entries")
    return P


def parse_grid(text: str) -> list[tuple[int, float]]:
    """``"50:0.1,20:0.2"`` -> [(50, 0.1), (20, 0.2)]."""
    out = []
    for item in text.split(","):
        try:
            n, eps = item.split(":")
            out.append((int(n), float(eps)))
        except ValueError as exc:
            raise UsageError(f"bad grid point {item!r}; use n:eps") from exc
    return out


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


def _meta(args, **extra) -> dict:
    meta = {"tool": "commitcap", "version": __version__, "seed": getattr(args, "seed", None)}
    if getattr(args, "threads", 1) != 1:
        meta["threads"] = args.threads
    if getattr(args, "timestamp", False):
        meta["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    meta.update(extra)
    return meta


def _opts(args) -> AscentOptions:
    return AscentOptions(tolerance=args.tolerance, seed=args.seed)


# -- commands ----------------------------------------------------------------------------


def cmd_channel_info(args) -> Report:
    W = read_channel(args.channel)
    cap = capacity_report(W, _opts(args))
    rep = Report("channel info", _meta(args, channel_hash=W.digest(), inputs=list(W.input_alphabet),
                                       outputs=list(W.output_alphabet)))
    rep.add_rows("reduction", [
        {"removed": s, "witness": w, "witness_error": witness_error(W, s, w)} for s, w in cap.removed_symbols
    ] + [{"duplicates": g} for g in cap.deduplicated])
    rep.add_rows("capacity", [{
        "trivial": cap.trivial, "eta": cap.eta,
        "C_com": cap.C_com, "argmax_com": cap.argmax_com,
        "C": cap.C, "argmax_C": cap.argmax_C,
        "C_plus_C_com": cap.total, "log_min_alphabet": cap.entropy_ceiling,
        "sum_exceeds_log_min_alphabet": cap.exceeds_ceiling,
    }])
    for s, w in cap.removed_symbols:
        rep.check(f"witness[{s}]", witness_error(W, s, w) <= 1e-9)
    return rep


def cmd_capacity(args) -> Report:
    W = read_channel(args.channel)
    opts = _opts(args)
    com = maximize_equivocation(W, opts)
    ba = blahut_arimoto(W, tolerance=min(args.tolerance, 1e-9))
    rep = Report("capacity", _meta(args, channel_hash=W.digest()))
    rep.add_rows("capacity", [
        {"quantity": "C_com", "value": com.value, "argmax": com.argmax, "method": com.method,
         "iterations": com.iterations, "gap_estimate": com.gap_estimate},
        {"quantity": "C", "value": ba.value, "argmax": ba.argmax, "method": ba.method,
         "iterations": ba.iterations, "gap_estimate": ba.gap_estimate},
    ])
    if "certified" in com.diagnostics:
        rep.check("grid_certificate", com.diagnostics["certified"])
    rep.check("blahut_arimoto_bracket", ba.gap_estimate <= max(args.tolerance, 1e-9))
    return rep


def _param_rows(params) -> list[dict]:
    d = params.to_dict()
    return [{"name": k, "value": v} for k, v in d.items() if k != "P"] + [{"name": "P", "value": d["P"]}]


def cmd_params(args) -> Report:
    W = read_channel(args.channel)
    P = parse_distribution(args.P, W.nx)
    params = derive_parameters(W, P, args.n, args.sigma, args.mode, K=args.K, L=args.L,
                               eps_code=args.eps_code, eps_test=args.eps_test)
    rep = Report("params", _meta(args, channel_hash=W.digest(), mode=args.mode))
    rep.add_rows("parameters", _param_rows(params))
    return rep


def cmd_codebook_build(args) -> Report:
    W = read_channel(args.channel)
    P = parse_distribution(args.P, W.nx)
    params = derive_parameters(W, P, args.n, args.sigma, args.mode, K=args.K, L=args.L,
                               eps_code=args.eps_code, eps_test=args.eps_test)
    book = build_codebook(W, params, args.K, args.L, args.seed, max_attempts=args.max_attempts)
    text = book.dumps()
    _write(args.out, text)
    status = verify_codebook(book)
    rep = Report("codebook build", _meta(args, channel_hash=W.digest(), codebook_hash=book.digest(),
                                         mode=args.mode, codebook_file=args.out))
    rep.add_rows("parameters", _param_rows(params))
    rep.add_rows("construction", [{**book.construction_log, **status}])
    rep.check("min_distance", status["distance_ok"])
    rep.check("codewords_typical", status["all_typical"])
    return rep


def cmd_protocol_run(args) -> Report:
    book = read_codebook(args.codebook)
    W = read_channel(args.channel) if args.channel else None
    messages = [args.message] if args.message else [1 + t % book.K for t in range(args.trials)]
    lines, verdicts, replay_ok = [], [], True
    for t in range(args.trials):
        seed = derive_seed(args.seed, t)
        tr = run_protocol(book, W, messages[t % len(messages)], seed)
        replay_ok &= replay_verdict(book, Transcript.from_dict(tr.to_dict())) == tr.verdict
        lines.append(tr.to_json())
        verdicts.append(tr.verdict.value)
    _write(args.out, "\n".join(lines) + "\n")
    acc = verdicts.count("ACC") / len(verdicts)
    rep = Report("protocol run", _meta(args, codebook_hash=book.digest(), transcript_file=args.out))
    rep.add_rows("protocol", [{"trials": args.trials, "accepted": verdicts.count("ACC"), "acceptance": acc,
                               "stderr": math.sqrt(acc * (1 - acc) / len(verdicts))}])
    rep.check("replay_consistent", replay_ok)
    if args.min_accept is not None:
        rep.check(f"acceptance>={args.min_accept}", acc >= args.min_accept)
    return rep


def _scheme(args):
    if args.scheme == "remark-f":
        W, book, ref = remark_f_scheme()
        return W, book, ref
    if not args.codebook:
        raise UsageError("need --codebook PATH or --scheme remark-f")
    book = read_codebook(args.codebook)
    W = read_channel(args.channel) if args.channel else book.channel
    return W, book, None


def cmd_attack_binding(args) -> Report:
    W, book, ref = _scheme(args)
    sec = binding_attack(book, W, args.strategy, trials=args.trials, seed=args.seed,
                         budget=args.budget, threads=args.threads)
    rep = Report("attack binding", _meta(args, **sec.metadata))
    est = sec.delta_bind_measured
    rows = [{"quantity": "delta_bind", "value": est.value, "stderr": est.stderr, "method": est.method,
             "attack": sec.attack_description}]
    if ref is not None:
        rows += [{"quantity": "delta_bind (reference)", "value": float(ref.delta_bind_measured.value),
                  "exact": str(ref.delta_bind_measured.value), "method": "exact_rational"}]
        rep.check("matches_reference", est.value == float(ref.delta_bind_measured.value))
    rep.add_rows("security", rows)
    rep.sections["detail"] = [to_jsonable(est.detail)]
    if args.max_delta is not None:
        rep.check(f"delta_bind<={args.max_delta}", est.value <= args.max_delta)
    return rep


def cmd_attack_concealing(args) -> Report:
    W, book, ref = _scheme(args)
    est = measure_concealing(book, W, args.a, args.a_prime, args.conceal_mode, trials=args.trials, seed=args.seed)
    rep = Report("attack concealing", _meta(args, channel_hash=W.digest(), codebook_hash=book.digest()))
    rep.add_rows("security", [{"quantity": "epsilon", "value": est.value, "stderr": est.stderr,
                               "method": est.method, **to_jsonable(est.detail)}])
    if "triangle_ok" in est.detail:
        rep.check("triangle_consistency", est.detail["triangle_ok"])
    if args.max_eps is not None:
        rep.check(f"epsilon<={args.max_eps}", est.value <= args.max_eps)
    return rep


def cmd_attack_soundness(args) -> Report:
    W, book, _ = _scheme(args)
    est = measure_soundness(book, W, args.trials, args.seed, threads=args.threads)
    rep = Report("attack soundness", _meta(args, channel_hash=W.digest(), codebook_hash=book.digest()))
    rep.add_rows("security", [{"quantity": "delta_sound", "value": est.value, "stderr": est.stderr,
                               "method": est.method, **to_jsonable(est.detail)}])
    if est.detail.get("within_3se") is not None:
        rep.check("exact_cross_check", est.detail["within_3se"])
    return rep


def cmd_audit_converse(args) -> Report:
    W, book, _ = _scheme(args)
    audit = converse_audit(W, book)
    rep = Report("audit converse", _meta(args, channel_hash=W.digest(), codebook_hash=book.digest()))
    d = audit.to_dict()
    checks = d.pop("checks")
    rep.add_rows("quantities", [{"name": k, "value": v} for k, v in d.items()])
    rep.add_rows("chain", [{"inequality": k, **v} for k, v in checks.items()])
    for k, v in checks.items():
        rep.check(k, v["ok"])
    return rep


def cmd_bounds_typicality(args) -> Report:
    W = read_channel(args.channel)
    P = parse_distribution(args.P, W.nx)
    results = verify_bound_suite(W, P, parse_grid(args.grid), trials=args.trials, seed=args.seed)
    rep = Report("bounds typicality", _meta(args, channel_hash=W.digest(), grid=args.grid))
    rep.add_rows("bounds", [
        {"bound": r.bound_name, "n": r.detail.get("n"), "eps": r.detail.get("eps"),
         "analytical": r.analytical_value, "measured": r.measured_value, "method": r.method,
         "satisfied": r.satisfied}
        for r in results
    ])
    for r in results:
        rep.check(f"{r.bound_name}@n={r.detail.get('n')},eps={r.detail.get('eps')}", r.satisfied)
    return rep


def cmd_bounds_chernoff(args) -> Report:
    r = chernoff_check(args.p, args.eta, args.N, args.trials, args.seed)
    rep = Report("bounds chernoff", _meta(args))
    rep.add_rows("bounds", [{"bound": r.bound_name, "analytical": r.analytical_value,
                             "measured": r.measured_value, **r.detail, "satisfied": r.satisfied}])
    rep.check("chernoff", r.satisfied)
    return rep


def cmd_report_render(args) -> Report:
    try:
        return Report.from_json(Path(args.input).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read report: {exc}") from exc
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad report file: {exc}") from exc


# -- parser ------------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, channel=True, seed=True) -> None:
    if channel:
        p.add_argument("--channel", help="channel JSON file or bundled name")
    if seed:
        p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=int(os.environ.get(THREADS_ENV, "1")))
    p.add_argument("--report", help="write the machine-readable report here")
    p.add_argument("--json", action="store_true", help="print JSON instead of text")
    p.add_argument("--timestamp", action="store_true", help="add a timestamp to the metadata")
    p.add_argument("--tolerance", type=float, default=1e-6)


def _code_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--K", type=int)
    p.add_argument("--L", type=int)
    p.add_argument("--P", help="input distribution, comma separated (default uniform)")
    p.add_argument("--mode", choices=("theory", "desk"), default="desk")
    p.add_argument("--eps-test", dest="eps_test", type=float)
    p.add_argument("--eps-code", dest="eps_code", type=float)


def _scheme_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--codebook")
    p.add_argument("--scheme", choices=("remark-f",), help="built-in one-letter scheme on the cyclic channel")
    p.add_argument("--trials", type=int, default=2000)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="commitcap", description="Commitment capacity toolkit")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    ch = sub.add_parser("channel").add_subparsers(dest="sub", required=True)
    p = ch.add_parser("info", help="reduction, triviality, eta and both capacities")
    _common(p)
    p.set_defaults(func=cmd_channel_info, need_channel=True)

    p = sub.add_parser("capacity", help="commitment and transmission capacity")
    _common(p)
    p.set_defaults(func=cmd_capacity, need_channel=True)

    p = sub.add_parser("params", help="parameter calculus for a block length and sigma")
    _common(p)
    _code_args(p)
    p.set_defaults(func=cmd_params, need_channel=True)

    cb = sub.add_parser("codebook").add_subparsers(dest="sub", required=True)
    p = cb.add_parser("build", help="random codebook with expurgation")
    _common(p)
    _code_args(p)
    p.add_argument("--max-attempts", dest="max_attempts", type=int, default=20)
    p.add_argument("--out", help="codebook output file")
    p.set_defaults(func=cmd_codebook_build, need_channel=True, need_sizes=True)

    pr = sub.add_parser("protocol").add_subparsers(dest="sub", required=True)
    p = pr.add_parser("run", help="honest commit and reveal runs")
    _common(p)
    p.add_argument("--codebook", required=True)
    p.add_argument("--message", type=int, help="1-based message (default: round-robin)")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--min-accept", dest="min_accept", type=float)
    p.add_argument("--out", help="transcript log (one JSON object per line)")
    p.set_defaults(func=cmd_protocol_run)

    at = sub.add_parser("attack").add_subparsers(dest="sub", required=True)
    p = at.add_parser("binding", help="cheating-sender search")
    _common(p)
    _scheme_args(p)
    p.add_argument("--strategy", choices=("midpoint", "hillclimb", "exhaustive"), default="midpoint")
    p.add_argument("--budget", type=int, default=200)
    p.add_argument("--max-delta", dest="max_delta", type=float)
    p.set_defaults(func=cmd_attack_binding)
    p = at.add_parser("concealing", help="distance between two messages' output laws")
    _common(p)
    _scheme_args(p)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--a-prime", dest="a_prime", type=int, default=2)
    p.add_argument("--mode", dest="conceal_mode", choices=("exact", "mc"), default="exact")
    p.add_argument("--max-eps", dest="max_eps", type=float)
    p.set_defaults(func=cmd_attack_concealing)
    p = at.add_parser("soundness", help="honest rejection frequency")
    _common(p)
    _scheme_args(p)
    p.set_defaults(func=cmd_attack_soundness)

    au = sub.add_parser("audit").add_subparsers(dest="sub", required=True)
    p = au.add_parser("converse", help="exact audit of the rate upper bound")
    _common(p)
    _scheme_args(p)
    p.set_defaults(func=cmd_audit_converse)

    bd = sub.add_parser("bounds").add_subparsers(dest="sub", required=True)
    p = bd.add_parser("typicality", help="typical-sequence estimates on a grid")
    _common(p)
    p.add_argument("--P")
    p.add_argument("--grid", default="50:0.1")
    p.add_argument("--trials", type=int, default=10_000)
    p.set_defaults(func=cmd_bounds_typicality, need_channel=True)
    p = bd.add_parser("chernoff", help="empirical binomial tails against the Chernoff bound")
    _common(p, channel=False)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.set_defaults(func=cmd_bounds_chernoff)

    rp = sub.add_parser("report").add_subparsers(dest="sub", required=True)
    p = rp.add_parser("render", help="print a saved report as text")
    p.add_argument("input")
    p.add_argument("--json", action="store_true")
    p.add_argument("--report")
    p.set_defaults(func=cmd_report_render)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "need_channel", False) and not args.channel:
            raise UsageError("--channel is required")
        if getattr(args, "need_sizes", False) and (args.K is None or args.L is None):
            raise UsageError("--K and --L are required")
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be positive")
        rep = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CodebookConstructionError as exc:
        print(f"error: {exc}\nhint: lower K*L or sigma, raise n, or allow more --max-attempts", file=sys.stderr)
        return 2
    except EnumerationLimitError as exc:
        print(f"error: {exc}\nhint: use a smaller n or a Monte Carlo mode", file=sys.stderr)
        return 2
    except (ChannelError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write(args.report, rep.to_json())
    sys.stdout.write(rep.to_json() if args.json else rep.render())
    return 0 if rep.passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
