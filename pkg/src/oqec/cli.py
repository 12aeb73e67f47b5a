"""Command line front end.

Verbs: check, recover, factorize, dpi, codes. Exit codes: 0 for a positive
verdict, 1 for a negative one (condition failed, not correctable, residual
over tolerance, monotonicity violated), 2 for usage or input errors. The
OQEC_TOL environment variable overrides the default tolerance; an explicit
--tol beats both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import __version__
from .channels import Channel, validate
from .conditions import (
    check_condition_b,
    check_condition_c,
    check_condition_d,
    dpi_trace,
    purify,
)
from .errors import FormatError, NotCorrectableError
from .recovery import (
    factorize_product,
    synthesize_schmidt_recovery,
    synthesize_universal_recovery,
    verify_recovery,
)
from .serialize import (
    channel_from_json,
    channel_to_json,
    condition_report_to_json,
    decomposition_from_json,
    decomposition_to_json,
    dump_json_file,
    load_json_file,
)
from . import codes as codes_mod

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2

DEFAULT_TOLERANCE = 1e-9


@dataclass
class RunConfig:
    tolerance: float = DEFAULT_TOLERANCE
    seed: int = 0
    trials: int = 50
    out: str | None = None
    json_output: bool = False

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")


def _env_tolerance() -> float:
    raw = os.environ.get("OQEC_TOL")
    if raw is None:
        return DEFAULT_TOLERANCE
    try:
        return float(raw)
    except ValueError as exc:
        raise ValueError(f"OQEC_TOL={raw!r} is not a number") from exc


def _config(args) -> RunConfig:
    tol = args.tol if args.tol is not None else _env_tolerance()
    return RunConfig(
        tolerance=tol,
        seed=getattr(args, "seed", 0),
        trials=getattr(args, "trials", 50),
        out=getattr(args, "out", None),
        json_output=getattr(args, "json", False),
    )


def _meta(cfg: RunConfig) -> dict:
    return {
        "tool": "oqec",
        "version": __version__,
        "tolerance": cfg.tolerance,
        "seed": cfg.seed,
    }


def _load_pair(args):
    dec = decomposition_from_json(load_json_file(args.decomposition), "decomposition")
    ch = channel_from_json(load_json_file(args.channel), "channel")
    if ch.dim_in != dec.dim_v or ch.dim_out != dec.dim_v:
        raise FormatError(
            "channel",
            f"acts on {ch.dim_in} -> {ch.dim_out} but the decomposition has dim_v={dec.dim_v}",
        )
    return dec, ch


def cmd_check(args) -> int:
    cfg = _config(args)
    dec, ch = _load_pair(args)
    wanted = ["b", "c", "d"] if args.condition == "all" else [args.condition]
    reports = []
    ps = None
    for cond in wanted:
        if cond == "b":
            reports.append(check_condition_b(dec, ch, cfg.tolerance))
        else:
            if ps is None:
                ps = purify(dec, ch)
            if cond == "c":
                reports.append(check_condition_c(ps, cfg.tolerance))
            else:
                reports.append(check_condition_d(ps, cfg.tolerance))
    payload = {
        "meta": _meta(cfg),
        "conditions": [condition_report_to_json(r) for r in reports],
        "passed": all(r.passed for r in reports),
    }
    if cfg.json_output:
        print(json.dumps(payload, indent=1))
    else:
        for r in reports:
            verdict = "PASS" if r.passed else "FAIL"
            print(
                f"condition {r.condition}: {verdict} "
                f"(residual {r.residual:.3e}, tol {r.tol:g})"
            )
    if cfg.out:
        dump_json_file(cfg.out, payload)
    return EXIT_PASS if payload["passed"] else EXIT_FAIL


def cmd_recover(args) -> int:
    cfg = _config(args)
    dec, ch = _load_pair(args)
    synth = (
        synthesize_schmidt_recovery
        if args.method == "schmidt"
        else synthesize_universal_recovery
    )
    try:
        rec = synth(dec, ch, tol=cfg.tolerance)
    except NotCorrectableError as exc:
        print(f"not correctable: {exc}", file=sys.stderr)
        return EXIT_FAIL
    report = verify_recovery(dec, ch, rec, trials=cfg.trials, seed=cfg.seed)
    ok = (
        report.max_infidelity <= cfg.tolerance
        and report.b_marginal_drift <= cfg.tolerance
        and report.support_leak <= cfg.tolerance
    )
    chan_report = validate(rec.channel)
    metadata = {
        **_meta(cfg),
        "method": rec.method,
        "kraus_count": len(rec.channel.kraus),
        "completeness_defect": chan_report.defect,
        "condition_b_residual": rec.data["condition_b_residual"],
        "verification": {
            "max_infidelity": report.max_infidelity,
            "b_marginal_drift": report.b_marginal_drift,
            "support_leak": report.support_leak,
            "trials": report.trials,
            "seed": report.seed,
        },
    }
    out = cfg.out or "recovery.json"
    dump_json_file(out, channel_to_json(rec.channel, metadata))
    print(
        f"{rec.method} recovery: {len(rec.channel.kraus)} Kraus operators -> {out}\n"
        f"max infidelity {report.max_infidelity:.3e}, "
        f"B-marginal drift {report.b_marginal_drift:.3e}, "
        f"support leak {report.support_leak:.3e} "
        f"over {report.trials} trials (seed {report.seed})"
    )
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_factorize(args) -> int:
    cfg = _config(args)
    dec, ch = _load_pair(args)
    try:
        fac = factorize_product(dec, ch, tol=cfg.tolerance)
    except NotCorrectableError as exc:
        print(f"not factorizable: {exc}", file=sys.stderr)
        return EXIT_FAIL
    outdir = cfg.out or "."
    os.makedirs(outdir, exist_ok=True)
    u_path = os.path.join(outdir, "factor_unitary.json")
    n_path = os.path.join(outdir, "factor_channel_b.json")
    meta = {**_meta(cfg), "residual": fac.residual}
    dump_json_file(u_path, channel_to_json(Channel((fac.u,)), {**meta, "kind": "unitary"}))
    dump_json_file(n_path, channel_to_json(fac.n_b, {**meta, "kind": "b_factor"}))
    print(f"residual {fac.residual:.3e}; wrote {u_path} and {n_path}")
    return EXIT_PASS if fac.residual <= cfg.tolerance else EXIT_FAIL


def cmd_dpi(args) -> int:
    cfg = _config(args)
    dec = decomposition_from_json(load_json_file(args.decomposition), "decomposition")
    chain = []
    for i, path in enumerate(args.channels):
        ch = channel_from_json(load_json_file(path), f"channel[{i}]")
        chain.append(ch)
    values = dpi_trace(dec, chain, atol=cfg.tolerance)
    slack = 1e-9
    monotone = all(values[i + 1] <= values[i] + slack for i in range(len(values) - 1))
    for i, v in enumerate(values):
        label = "input" if i == 0 else f"after step {i}"
        print(f"{label}: {v:.12f}")
    print(f"monotone within {slack:g}: {'yes' if monotone else 'NO'}")
    if cfg.out:
        dump_json_file(
            cfg.out,
            {"meta": _meta(cfg), "coherent_information": values, "monotone": monotone},
        )
    return EXIT_PASS if monotone else EXIT_FAIL


def cmd_codes(args) -> int:
    if args.action == "list":
        for entry in codes_mod.catalog(extended=args.extended):
            verdict = "correctable" if all(entry.expected.values()) else "not correctable"
            print(
                f"{entry.name}: dim_a={entry.dec.dim_a} dim_b={entry.dec.dim_b} "
                f"dim_c={entry.dec.dim_c}, {len(entry.noise.kraus)} Kraus, {verdict}"
            )
        return EXIT_PASS
    entry = codes_mod.get(args.name)
    outdir = args.outdir
    os.makedirs(outdir, exist_ok=True)
    dec_path = os.path.join(outdir, f"{entry.name}.decomposition.json")
    noise_path = os.path.join(outdir, f"{entry.name}.noise.json")
    dump_json_file(dec_path, decomposition_to_json(entry.dec))
    dump_json_file(noise_path, channel_to_json(entry.noise, {"name": entry.name, "note": entry.note}))
    print(f"wrote {dec_path} and {noise_path}")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oqec",
        description="Operator quantum error correction toolbox",
    )
    parser.add_argument("--version", action="version", version=f"oqec {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, trials=False, seed=False):
        p.add_argument("--tol", type=float, default=None, help="pass/fail tolerance")
        p.add_argument("--out", default=None, help="write a JSON report/artifact here")
        p.add_argument("--json", action="store_true", help="print the JSON report to stdout")
        if seed:
            p.add_argument("--seed", type=int, default=0)
        if trials:
            p.add_argument("--trials", type=int, default=50)

    p = sub.add_parser("check", help="test correctability conditions")
    p.add_argument("decomposition")
    p.add_argument("channel")
    p.add_argument("--condition", choices=["b", "c", "d", "all"], default="all")
    common(p, seed=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("recover", help="synthesize and verify a recovery channel")
    p.add_argument("decomposition")
    p.add_argument("channel")
    p.add_argument("--method", choices=["schmidt", "universal"], default="schmidt")
    common(p, trials=True, seed=True)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("factorize", help="split a correctable channel on A tensor B")
    p.add_argument("decomposition")
    p.add_argument("channel")
    common(p, seed=True)
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser("dpi", help="coherent information through a channel chain")
    p.add_argument("decomposition")
    p.add_argument("channels", nargs="+")
    common(p, seed=True)
    p.set_defaults(func=cmd_dpi)

    p = sub.add_parser("codes", help="catalog of worked examples")
    codes_sub = p.add_subparsers(dest="action", required=True)
    pl = codes_sub.add_parser("list", help="list catalog entries")
    pl.add_argument("--extended", action="store_true", help="include large entries")
    pl.set_defaults(func=cmd_codes)
    pe = codes_sub.add_parser("export", help="write one entry's files")
    pe.add_argument("name")
    pe.add_argument("outdir")
    pe.set_defaults(func=cmd_codes)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotCorrectableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (FormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
