"""Command-line front end: verification campaigns, single-instance checks,
saturation searches, and reproduction of the headline identities.

Exit codes: 0 success, 1 inequality or structural failure, 2 input error.
Every flag can also be supplied through an environment variable with the
``VARBOUNDS_`` prefix (e.g. ``VARBOUNDS_SEED=7``); explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import dataclass

from . import bounds, matcore, roperator, saturation
from .bounds import BoundKind
from .matcore import InvariantError, Observable, State

ENV_PREFIX = "VARBOUNDS_"
GAP_FAIL_THRESHOLD = -1e-9
STRUCTURAL_FAIL_THRESHOLD = 1e-10

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2

ALL_KINDS = [k.value for k in BoundKind]


class InputError(Exception):
    pass


def _env_default(name: str, fallback):
    raw = os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"))
    return fallback if raw is None else raw


@dataclass
class CampaignConfig:
    kinds: list[BoundKind]
    dims: list[int]
    instances: int
    seed: int
    out: str | None
    format: str

    def __post_init__(self):
        if any(d < 2 for d in self.dims):
            raise InputError("dims must be >= 2")
        if self.instances < 1:
            raise InputError("instances must be >= 1")
        if self.format not in ("json", "csv"):
            raise InputError(f"unknown format {self.format!r}")


def _random_instance(kind: BoundKind, dim: int, seed: int):
    hs = [matcore.random_observable(dim, [seed, j])
          for j in range(kind.n_observables)]
    s = matcore.random_state(dim, pure=False, seed=[seed, 99])
    return hs, s


def run_campaign(cfg: CampaignConfig):
    """Evaluate random instances for every (kind, dim) cell; returns
    (rows, summary).  Rows are sorted by (kind, dim, index) and per-instance
    seeds derive from the base seed plus a running index, so results do not
    depend on evaluation order."""
    start = time.perf_counter()
    rows = []
    counts = {k.value: 0 for k in cfg.kinds}
    min_gap = math.inf
    max_residual = 0.0
    index = 0
    for kind in cfg.kinds:
        for dim in cfg.dims:
            for _ in range(cfg.instances):
                hs, s = _random_instance(kind, dim, cfg.seed + index)
                report = bounds.evaluate(kind, hs, s, centered=kind is not BoundKind.RSS3)
                rows.append(report)
                counts[kind.value] += 1
                min_gap = min(min_gap, report.gap)
                if kind.n_observables in (3, 4):
                    residual = max(roperator.structural_check(hs))
                    max_residual = max(max_residual, residual)
                index += 1
    summary = {
        "counts": counts,
        "min_gap": min_gap,
        "max_structural_residual": max_residual,
        "wall_time_s": time.perf_counter() - start,
        "seed": cfg.seed,
    }
    return rows, summary


def _write_reports(rows, summary, cfg: CampaignConfig):
    if cfg.out is None:
        return
    try:
        if cfg.format == "csv":
            with open(cfg.out, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(bounds.CSV_COLUMNS)
                for r in rows:
                    writer.writerow(r.to_csv_row())
        else:
            payload = {"reports": [r.to_json() for r in rows], "summary": summary}
            with open(cfg.out, "w") as fh:
                json.dump(payload, fh, indent=1)
                fh.write("\n")
    except OSError as exc:
        raise InputError(f"cannot write {cfg.out}: {exc}") from exc


def cmd_verify(args) -> int:
    cfg = CampaignConfig(
        kinds=[BoundKind(k) for k in args.kinds],
        dims=args.dims,
        instances=args.instances,
        seed=args.seed,
        out=args.out,
        format=args.format,
    )
    rows, summary = run_campaign(cfg)
    _write_reports(rows, summary, cfg)
    print(json.dumps(summary, indent=1))
    failed = (summary["min_gap"] < GAP_FAIL_THRESHOLD
              or summary["max_structural_residual"] > STRUCTURAL_FAIL_THRESHOLD)
    return EXIT_FAIL if failed else EXIT_OK


def load_instance_file(path: str):
    """Read {kind, observables, state, centered?} in the shared JSON format,
    validating every matrix invariant and naming the offender on failure."""
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot parse {path}: {exc}") from exc
    try:
        kind = BoundKind(obj["kind"])
    except (KeyError, ValueError) as exc:
        raise InputError(f"bad or missing bound kind: {exc}") from exc
    observables = []
    for i, entry in enumerate(obj.get("observables", [])):
        try:
            observables.append(matcore.observable_from_json(entry))
        except (InvariantError, ValueError, KeyError) as exc:
            name = getattr(exc, "invariant", "format")
            raise InputError(f"observable {i}: {name} invariant violated: {exc}") from exc
    try:
        state = matcore.state_from_json(obj["state"])
    except (InvariantError, ValueError, KeyError) as exc:
        name = getattr(exc, "invariant", "format")
        raise InputError(f"state: {name} invariant violated: {exc}") from exc
    centered = bool(obj.get("centered", True))
    if len(observables) != kind.n_observables:
        raise InputError(f"{kind.value} needs {kind.n_observables} observables, "
                         f"got {len(observables)}")
    return kind, observables, state, centered


def cmd_check(args) -> int:
    kind, observables, state, centered = load_instance_file(args.instance)
    report = bounds.evaluate(kind, observables, state, centered)
    print(json.dumps(report.to_json(), indent=1))
    return EXIT_OK


BUILTIN_INSTANCES = {
    "pauli3": saturation.tight3_pauli,
    "tight4": saturation.tight4_family,
}


def cmd_saturate(args) -> int:
    if args.instance in BUILTIN_INSTANCES:
        inst = BUILTIN_INSTANCES[args.instance]()
        observables, kind = inst.observables, inst.kind
    else:
        kind, observables, _, _ = load_instance_file(args.instance)
    cfg = saturation.SearchConfig(
        restarts=args.restarts,
        max_iters=args.max_iters,
        seed=args.seed,
        pure_only=args.pure_only,
    )
    result = saturation.search_min_ratio(observables, kind, cfg)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                json.dump(result.to_json(), fh, indent=1)
                fh.write("\n")
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc}") from exc
    recheck = bounds.evaluate(kind, observables, result.best_state,
                              centered=kind is not BoundKind.RSS3)
    print(json.dumps({
        "kind": kind.value,
        "best_ratio": result.best_ratio,
        "recomputed_ratio": recheck.lhs / recheck.rhs,
        "evaluations": result.evaluations,
        "converged": result.converged,
    }, indent=1))
    return EXIT_OK


def _print_identity(label: str, value: float, tol: float) -> bool:
    ok = abs(value) <= tol
    print(f"{label}: residual {value:.3e} [{'PASS' if ok else 'FAIL'}]")
    return ok


def cmd_paper(args) -> int:
    """Reproduce the named headline computation and print PASS/FAIL lines."""
    ok = True
    which = args.which
    if which == "robertson":
        sx, sy = Observable(matcore.PAULI_1), Observable(matcore.PAULI_2)
        ket0 = matcore.basis_state(2, 0)
        rep = bounds.robertson(sx, sy, ket0)
        print(f"robertson equality case: lhs {rep.lhs:.6f} rhs {rep.rhs:.6f}")
        ok &= _print_identity("gap", rep.gap, 1e-10)
    elif which == "triple":
        inst = saturation.tight3_pauli()
        rep = bounds.triple_sum(inst.observables, inst.state)
        prod = bounds.triple_product(inst.observables, inst.state)
        print(f"triple sum: lhs {rep.lhs:.6f} rhs {rep.rhs:.6f}")
        print(f"triple product: lhs {prod.lhs:.6f} rhs {prod.rhs:.6f}")
        ok &= _print_identity("sum gap", rep.gap, 1e-9)
        ok &= _print_identity("product gap", prod.gap, 1e-9)
    elif which == "quad":
        inst = saturation.tight4_family()
        rep = inst.evaluate()
        print(f"quad sum: lhs {rep.lhs:.6f} rhs {rep.rhs:.6f}")
        ok &= _print_identity("gap", rep.gap, 1e-9)
    elif which == "reductions":
        rng_seed = args.seed
        hs = [matcore.random_observable(3, [rng_seed, j]) for j in range(3)]
        s = matcore.random_state(3, pure=False, seed=[rng_seed, 99])
        quad, triple = saturation.reduce_h4_identity(hs, s)
        ok &= _print_identity("H4=I lhs", quad.lhs - triple.lhs, 1e-12)
        ok &= _print_identity("H4=I rhs", quad.rhs - triple.rhs, 1e-12)
        rep = saturation.robertson_via_r(hs[0], hs[1], s)
        print(f"H3=0 sum form: lhs {rep.lhs:.6f} rhs {rep.rhs:.6f}")
        ok &= _print_identity("H3=0 nonnegativity", min(rep.gap, 0.0), 1e-9)
    elif which == "pauli-decomp":
        for n in (3, 4):
            hs = [matcore.random_observable(4, [args.seed, n, j]) for j in range(n)]
            residual = roperator.pauli_decomposition_check(hs)
            ok &= _print_identity(f"tensor form residual ({n} observables)",
                                  residual, 1e-14)
    else:
        raise InputError(f"unknown reproduction {which!r}")
    return EXIT_OK if ok else EXIT_FAIL


def _int_list(raw: str) -> list[int]:
    return [int(tok) for tok in str(raw).split(",") if tok]


def _str_list(raw: str) -> list[str]:
    return [tok for tok in str(raw).split(",") if tok]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="varbounds",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="random verification campaign")
    verify.add_argument("--kinds", type=_str_list,
                        default=_env_default("kinds", ",".join(ALL_KINDS)))
    verify.add_argument("--dims", type=_int_list,
                        default=_env_default("dims", "2,3,4"))
    verify.add_argument("--instances", type=int,
                        default=_env_default("instances", 1000))
    verify.add_argument("--seed", type=int, default=_env_default("seed", 0))
    verify.add_argument("--out", default=_env_default("out", None))
    verify.add_argument("--format", choices=["json", "csv"],
                        default=_env_default("format", "json"))
    verify.set_defaults(func=cmd_verify)

    check = sub.add_parser("check", help="evaluate one instance file")
    check.add_argument("instance")
    check.set_defaults(func=cmd_check)

    saturate = sub.add_parser("saturate", help="search for minimal lhs/rhs ratio")
    saturate.add_argument("instance",
                          help=f"instance file or builtin: {sorted(BUILTIN_INSTANCES)}")
    saturate.add_argument("--restarts", type=int,
                          default=_env_default("restarts", 20))
    saturate.add_argument("--max-iters", type=int,
                          default=_env_default("max_iters", 2000))
    saturate.add_argument("--seed", type=int, default=_env_default("seed", 0))
    saturate.add_argument("--pure-only", action=argparse.BooleanOptionalAction,
                          default=bool(int(_env_default("pure_only", 1))))
    saturate.add_argument("--out", default=_env_default("out", None))
    saturate.set_defaults(func=cmd_saturate)

    paper = sub.add_parser("paper", help="reproduce a headline identity")
    paper.add_argument("which", choices=["robertson", "triple", "quad",
                                         "reductions", "pauli-decomp"])
    paper.add_argument("--seed", type=int, default=_env_default("seed", 0))
    paper.set_defaults(func=cmd_paper)

    return parser


def _normalize(args) -> None:
    # env-sourced defaults arrive as strings; coerce them like flags
    for name, conv in (("kinds", _str_list), ("dims", _int_list),
                       ("instances", int), ("seed", int), ("restarts", int),
                       ("max_iters", int)):
        if hasattr(args, name) and isinstance(getattr(args, name), str):
            setattr(args, name, conv(getattr(args, name)))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _normalize(args)
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
