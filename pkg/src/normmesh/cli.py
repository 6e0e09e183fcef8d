"""Command line front end.

Subcommands: dims, bounds, mesh, embed, distort, entropy.  Reports are
JSON (default) or flattened CSV, written to stdout or --out.  With
--no-timestamp the output is a pure function of the arguments and seed,
byte for byte.  Exit codes: 0 success, 2 validation or input error,
3 violated certificate or precision audit.  NORMMESH_THREADS caps worker
threads for distortion probes.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from datetime import datetime, timezone

import mpmath as mp

from . import __version__, bounds, landau, meshgen, polyspace, sets
from .errors import InvariantViolation, ValidationError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"ERROR[2]: {message}", file=sys.stderr)
        raise SystemExit(2)


def _parse_reals(text: str, flag: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok != ""]
    except ValueError as exc:
        raise ValidationError(f"{flag} expects comma-separated reals: {exc}") from exc
    if not values:
        raise ValidationError(f"{flag} received no values")
    return values


def _parse_schedule(text: str) -> tuple[int, int, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValidationError("--schedule expects s,k,chat")
    try:
        s, k = int(parts[0]), int(parts[1])
        chat = float(parts[2])
    except ValueError as exc:
        raise ValidationError(f"--schedule expects s,k,chat as int,int,real: {exc}") from exc
    return s, k, chat


def _threads() -> int:
    raw = os.environ.get("NORMMESH_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValidationError(f"NORMMESH_THREADS must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValidationError(f"NORMMESH_THREADS must be at least 1, got {value}")
    return value


def _set_from_args(args) -> sets.CompactSetModel:
    kind = args.set
    if args.n is None:
        raise ValidationError("--n is required to build a set")
    n = args.n
    params = _parse_reals(args.params, "--params") if args.params else None
    if kind == "box":
        if params is None:
            pairs = [(-1.0, 1.0)] * n
        else:
            if len(params) != 2 * n:
                raise ValidationError(
                    f"box in R^{n} expects 2n = {2 * n} params (lo,hi per axis), "
                    f"got {len(params)}")
            pairs = [(params[2 * i], params[2 * i + 1]) for i in range(n)]
        return sets.box(pairs, args.resolution)
    if kind in ("ball", "sphere"):
        if params is None:
            center, radius = [0.0] * n, 1.0
        else:
            if len(params) != n + 1:
                raise ValidationError(
                    f"{kind} in R^{n} expects n+1 = {n + 1} params (center, radius), "
                    f"got {len(params)}")
            center, radius = params[:n], params[n]
        build = sets.ball if kind == "ball" else sets.sphere
        return build(center, radius, args.resolution)
    if kind == "cloud":
        if not args.cloud:
            raise ValidationError("--cloud <path> is required with --set cloud")
        return sets.load_point_cloud(args.cloud, n)
    raise ValidationError(f"unknown set kind {kind!r}")


def _meta(args, anchors: list[str], seed: int | None = None,
          grid_size: int | None = None) -> dict:
    meta = {
        "tool": "normmesh",
        "version": __version__,
        "seed": seed,
        "grid_size": grid_size,
        "paper_anchor": anchors,
    }
    if not args.no_timestamp:
        meta["timestamp"] = datetime.now(timezone.utc).isoformat()
    return meta


def _require(args, *names) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise ValidationError(f"--{name} is required for this command")


def _cmd_dims(args) -> dict:
    _require(args, "n", "d")
    space = polyspace.poly_space(args.n, args.d)
    report = {
        "command": "dims",
        "inputs": {"n": args.n, "d": args.d},
        "dim_full": space.dim,
    }
    anchors = ["space-dim"]
    if args.set is not None:
        model = _set_from_args(args)
        rank = polyspace.trace_dimension(space, model)
        report["inputs"]["set"] = model.describe()
        report["trace_dimension"] = rank
        report["determining"] = rank == space.dim
        anchors.append("trace-dim")
        report["meta"] = _meta(args, anchors, grid_size=int(sets.grid(model).shape[0]))
    else:
        report["meta"] = _meta(args, anchors)
    return report


def _cmd_bounds(args) -> dict:
    _require(args, "n", "d")
    report = bounds.poly_bound_report(args.n, args.d)
    values = report.to_json_values()
    anchors = [row[2] for row in values]
    inputs = dict(report.inputs)
    if args.schedule:
        s, k, chat = _parse_schedule(args.schedule)
        extra = bounds.schedule_bound_report(args.d, k, chat, s)
        values += extra.to_json_values()
        anchors += [row[2] for row in extra.to_json_values()]
        inputs.update({"s": s, "k": k, "c_hat": chat})
    return {
        "command": "bounds",
        "inputs": inputs,
        "values": values,
        "meta": _meta(args, list(dict.fromkeys(anchors))),
    }


def _cmd_mesh(args) -> dict:
    _require(args, "n", "d")
    model = _set_from_args(args)
    space = polyspace.poly_space(args.n, args.d)
    node_set = meshgen.select_nodes(space, model, seed=args.seed)
    constant = meshgen.grid_norming_constant(node_set, model)
    return {
        "command": "mesh",
        "inputs": {
            "n": args.n, "d": args.d, "set": model.describe(),
            "resolution": args.resolution, "seed": args.seed,
        },
        "node_set": node_set.to_json_dict(),
        "grid_constant": constant,
        "meta": _meta(args, ["norming-nodes"], seed=args.seed,
                      grid_size=node_set.grid_size),
    }


def _build_certificate(args) -> landau.EmbeddingCertificate:
    _require(args, "n", "d")
    model = _set_from_args(args)
    space = polyspace.poly_space(args.n, args.d)
    if (args.p is None) == (args.schedule is None):
        raise ValidationError("provide exactly one of --p or --schedule s,k,chat")
    if args.schedule:
        s, k, chat = _parse_schedule(args.schedule)
        p, c = landau.power_schedule(args.d, k, chat, s)
        return landau.embed(space, model, p, seed=args.seed, schedule_c=c)
    return landau.embed(space, model, args.p, seed=args.seed)


def _cmd_embed(args) -> dict:
    cert = _build_certificate(args)
    anchors = ["power-embedding"] + (["power-schedule"] if args.schedule else [])
    return {
        "command": "embed",
        "inputs": {
            "n": args.n, "d": args.d, "p": cert.p, "set": cert.set_model.describe(),
            "resolution": args.resolution, "seed": args.seed,
        },
        "certificate": cert.to_json_dict(),
        "meta": _meta(args, anchors, seed=args.seed, grid_size=cert.grid_size),
    }


def _cmd_distort(args) -> dict:
    cert = _build_certificate(args)
    workers = min(_threads(), args.trials)
    landau.estimate_distortion(cert, trials=args.trials, seed=args.seed,
                               workers=workers)
    anchors = ["power-embedding", "distortion-probe"]
    if args.schedule:
        anchors.append("power-schedule")
    return {
        "command": "distort",
        "inputs": {
            "n": args.n, "d": args.d, "p": cert.p, "set": cert.set_model.describe(),
            "resolution": args.resolution, "seed": args.seed, "trials": args.trials,
        },
        "certificate": cert.to_json_dict(),
        "meta": _meta(args, anchors, seed=args.seed, grid_size=cert.grid_size),
    }


def _cmd_entropy(args) -> dict:
    _require(args, "d", "eps")
    if args.schedule:
        _, k, chat = _parse_schedule(args.schedule)
    elif args.n is not None:
        k, chat = args.n, math.exp(2 * args.n)
    else:
        raise ValidationError("entropy needs --schedule s,k,chat or --n for defaults")
    if args.nbar is not None:
        nbar = args.nbar
    elif args.n is not None:
        nbar = polyspace.dim_full(args.n, args.d)
    else:
        raise ValidationError("entropy needs --nbar or --n to size the blocks")
    report = bounds.entropy_chain(args.d, k, chat, nbar, args.eps)
    values = report.to_json_values()
    return {
        "command": "entropy",
        "inputs": dict(report.inputs),
        "values": values,
        "meta": _meta(args, [row[2] for row in values]),
    }


_COMMANDS = {
    "dims": _cmd_dims,
    "bounds": _cmd_bounds,
    "mesh": _cmd_mesh,
    "embed": _cmd_embed,
    "distort": _cmd_distort,
    "entropy": _cmd_entropy,
}


def _flatten(value, prefix: str, rows: list[tuple[str, object]]) -> None:
    if isinstance(value, dict):
        for key, sub in value.items():
            _flatten(sub, f"{prefix}{key}." if prefix else f"{key}.", rows)
        return
    if isinstance(value, list):
        # Only formula triples flatten; node coordinate lists stay JSON-only.
        for item in value:
            if isinstance(item, list) and len(item) == 3 and isinstance(item[0], str) \
                    and not isinstance(item[1], (list, dict)):
                rows.append((f"{prefix}{item[0]}", item[1]))
        return
    rows.append((prefix[:-1] if prefix.endswith(".") else prefix, value))


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    rows: list[tuple[str, object]] = []
    _flatten(report, "", rows)
    lines = ["key,value"]
    for key, value in rows:
        text = "" if value is None else str(value)
        if "," in text or '"' in text:
            text = '"' + text.replace('"', '""') + '"'
        lines.append(f"{key},{text}")
    return "\n".join(lines) + "\n"


def _emit(report: dict, args) -> None:
    payload = _render(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(payload)
    else:
        sys.stdout.write(payload)


def _build_parser() -> _Parser:
    parser = _Parser(prog="normmesh",
                     description="Certified norming meshes and embedding bounds "
                                 "for polynomial spaces on compact sets.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("dims", "space dimension and grid trace rank"),
            ("bounds", "closed-form mesh sizes and distortion constants"),
            ("mesh", "select and certify a norming node set"),
            ("embed", "build a sup-norm embedding certificate"),
            ("distort", "embed plus randomized distortion probes"),
            ("entropy", "metric entropy budget for an embedded family")):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--set", choices=["box", "ball", "sphere", "cloud"],
                         default="box" if name in ("mesh", "embed", "distort") else None)
        cmd.add_argument("--params", help="comma-separated reals for the set")
        cmd.add_argument("--cloud", help="path to a point cloud text file")
        cmd.add_argument("--n", type=int)
        cmd.add_argument("--d", type=int)
        cmd.add_argument("--p", type=int)
        cmd.add_argument("--schedule", help="s,k,chat")
        cmd.add_argument("--resolution", type=int, default=101)
        cmd.add_argument("--seed", type=int, default=0)
        cmd.add_argument("--trials", type=int, default=32)
        cmd.add_argument("--eps", type=float)
        cmd.add_argument("--nbar", type=int)
        cmd.add_argument("--out")
        cmd.add_argument("--format", choices=["json", "csv"], default="json")
        cmd.add_argument("--no-timestamp", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        report = _COMMANDS[args.command](args)
        _emit(report, args)
    except InvariantViolation as exc:
        print(f"ERROR[3]: {exc}", file=sys.stderr)
        return 3
    except ValidationError as exc:
        print(f"ERROR[2]: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"ERROR[2]: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
