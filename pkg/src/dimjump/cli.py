"""Command-line entry point: ``dimjump <subcommand> [flags]``."""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .ccz import equivariant_solve, induced_logical_tensor, read_triples, verify_cup_validity, write_triples
from .chain_map import cnot_schedule, inclusion_chain_map, induced_logical_map, verify_chain_map, write_schedule
from .codes import logical_basis
from .f2 import write_alist, write_mtx
from .registry import CodeSpec, build_code, build_pair, registry_load, spec_from_config

log = logging.getLogger("dimjump")

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2

# flag name -> default; a config value is used only when the flag was left at its default
_DEFAULTS = {
    "code": None,
    "seed": 0,
    "shots": 10000,
    "p": None,
    "rounds": None,
    "format": "json",
    "out": None,
    "q": 1,
    "weight_cap": None,
    "budget": 2_000_000,
    "experiment": "memory",
    "noise": "code_capacity",
    "direction": "to3D",
}


class CliError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


def _hash(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, default=str).encode()).hexdigest()[:16]


def _merge_config(args: argparse.Namespace) -> dict:
    """Effective settings: config file values, overridden by explicitly given flags."""
    eff = {k: getattr(args, k, v) for k, v in _DEFAULTS.items()}
    if not args.config:
        return eff
    try:
        cfg = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError("config", f"cannot read config {args.config}: {exc}") from None
    if not isinstance(cfg, dict):
        raise CliError("config", "config must be a JSON object")
    if "group" in cfg:  # a bare code definition
        cfg = {"code": cfg}
    noise = cfg.get("noise")
    if isinstance(noise, dict):
        cfg = {**cfg, "noise": noise.get("mode", _DEFAULTS["noise"])}
        if "p" in noise and "p" not in cfg:
            cfg["p"] = noise["p"]
    for key, val in cfg.items():
        key = key.replace("-", "_")
        if key not in _DEFAULTS:
            log.warning("config key %r ignored", key)
            continue
        flag = getattr(args, key, _DEFAULTS[key])
        if flag != _DEFAULTS[key] and flag != val:
            log.warning("flag --%s=%s overrides config value %s", key.replace("_", "-"), flag, val)
            continue
        eff[key] = val
    return eff


def _spec(eff: dict) -> CodeSpec:
    code = eff.get("code")
    if code is None:
        raise CliError("usage", "no code given (use --code NAME or a config file)")
    if isinstance(code, dict):
        try:
            return spec_from_config(code, code.get("name", "config"))
        except ValueError as exc:
            raise CliError("config", str(exc)) from None
    try:
        return registry_load(code)
    except KeyError as exc:
        raise CliError("unknown_code", exc.args[0]) from None


def _report(args, eff: dict, results, started: float) -> dict:
    return {
        "command": args.command,
        "argv": sys.argv[1:],
        "version": __version__,
        "config_hash": _hash(eff),
        "results": results,
        "seconds": round(time.perf_counter() - started, 3),
    }


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=1, default=str) + "\n"
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise CliError("write", f"cannot write {out}: {exc}") from None
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- subcommands


def cmd_report_table1(args, eff):
    from .report import table1

    t0 = time.perf_counter()
    names = [eff["code"]] if eff["code"] else None
    rows = table1(names, distances=not args.no_distance, weight_cap=eff["weight_cap"], isd_iterations=args.isd, ccz_budget=eff["budget"] if args.ccz else 0, seed=eff["seed"])
    for r in rows:
        print(r.line(), file=sys.stderr)
    if eff["out"]:
        _emit(_report(args, eff, [r.to_dict() for r in rows], t0), eff["out"])
    return EXIT_OK if all(r.nk_ok for r in rows) else EXIT_FAIL


def cmd_export(args, eff):
    spec = _spec(eff)
    code = build_code(spec, args.dim)
    out = Path(eff["out"] or ".")
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError("write", str(exc)) from None
    mats = {"Hx": code.hx, "Hz": code.hz}
    if code.mz is not None:
        mats["Mz"] = code.mz
    fmt = eff["format"]
    written = []
    stem = f"{spec.name}_{args.dim}d"
    try:
        if fmt == "json":
            path = out / f"{stem}.json"
            path.write_text(json.dumps({"name": code.label(), "n": code.n, "k": code.k, **{k: m.to_dense().tolist() for k, m in mats.items()}}) + "\n")
            written.append(str(path))
        else:
            writer = write_mtx if fmt == "mtx" else write_alist
            for key, m in mats.items():
                path = out / f"{stem}_{key}.{fmt}"
                writer(m, path)
                written.append(str(path))
    except OSError as exc:
        raise CliError("write", str(exc)) from None
    print(json.dumps({"written": written}))
    return EXIT_OK


def _pair_and_map(eff):
    spec = _spec(eff)
    c2, c3 = build_pair(spec)
    g = inclusion_chain_map(spec.classical_codes(), int(eff["q"]))
    return spec, c2, c3, g


def cmd_map_build(args, eff):
    _, c2, c3, g = _pair_and_map(eff)
    pairs = cnot_schedule(g.binary(1))
    fmt = "json" if eff["format"] == "json" else "text"
    if eff["out"]:
        write_schedule(pairs, eff["out"], fmt)
    else:
        sys.stdout.write(json.dumps({"cnots": [list(p) for p in pairs]}) + "\n" if fmt == "json" else "".join(f"{a} {b}\n" for a, b in pairs))
    return EXIT_OK


def cmd_map_verify(args, eff):
    _, c2, c3, g = _pair_and_map(eff)
    fail = verify_chain_map(g)
    if fail is not None:
        print(f"chain map FAILED: {fail}")
        return EXIT_FAIL
    lm = induced_logical_map(g, c2, c3)
    rw, cw = lm.physical_weights
    parts = ["chain map ok"]
    parts.append("physically transversal" if rw <= 1 and cw <= 1 else f"not physically transversal (weights {rw},{cw})")
    parts.append(f"logically transversal (rank {lm.rank})" if lm.injective else f"not logically transversal (rank {lm.rank} of {lm.source_basis.k})")
    print("; ".join(parts))
    return EXIT_OK if lm.injective and rw <= 1 and cw <= 1 else EXIT_FAIL


def cmd_ccz_find(args, eff):
    t0 = time.perf_counter()
    spec = _spec(eff)
    code = build_code(spec, 3)
    res = equivariant_solve(code, depth_target=2, budget=int(eff["budget"]), seed=int(eff["seed"]))
    result = {"code": spec.name, "nodes": res.nodes, "found": res.delta is not None, "reason": res.reason}
    if res.delta is not None:
        result["depth"] = res.delta.depth
        result["triples"] = len(res.delta.triples)
        if eff["out"]:
            write_triples(res.delta, eff["out"], "json" if eff["format"] == "json" else "text")
    print(json.dumps(_report(args, eff, result, t0)))
    return EXIT_OK if res.delta is not None else EXIT_FAIL


def cmd_ccz_verify(args, eff):
    spec = _spec(eff)
    code = build_code(spec, 3)
    try:
        delta = read_triples(args.triples)
    except (OSError, ValueError, KeyError) as exc:
        raise CliError("input", f"cannot read triples: {exc}") from None
    bad = verify_cup_validity(delta, [code] * 3)
    if bad is not None:
        print(f"invalid: {bad}")
        return EXIT_FAIL
    lb = logical_basis(code)
    _, depth, nontrivial = induced_logical_tensor(delta, [lb] * 3, check=False)
    print(f"valid; depth {depth}; {'nontrivial' if nontrivial else 'trivial'}")
    return EXIT_OK if nontrivial else EXIT_FAIL


def cmd_sim_run(args, eff):
    from .sim import NoiseModel, monte_carlo, teleport_pair

    t0 = time.perf_counter()
    spec = _spec(eff)
    ps = eff["p"] if eff["p"] is not None else [0.001]
    ps = [float(x) for x in (ps if isinstance(ps, (list, tuple)) else [ps])]
    exp = eff["experiment"]
    direction = eff["direction"]
    if exp == "teleport":
        target = teleport_pair(spec, int(eff["q"]))
        data_pauli = "Z" if direction == "to3D" else "X"
    else:
        target = build_code(spec, 3 if exp == "single_shot" or spec.expected_2d is None else args.dim)
        data_pauli = "X" if exp == "single_shot" else "Z"
    rows = []
    for p in ps:
        noise = NoiseModel(eff["noise"], p, data_pauli=data_pauli)
        r = monte_carlo(exp, target, noise, int(eff["shots"]), int(eff["seed"]), rounds=eff["rounds"], direction=direction)
        rows.append(r)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "shots", "failures", "P", "p_L"])
    for r in rows:
        w.writerow([repr(r.p), r.shots, r.failures, repr(r.P), repr(r.p_L)])
    if eff["out"]:
        out = Path(eff["out"])
        try:
            out.write_text(buf.getvalue())
            out.with_suffix(".json").write_text(json.dumps(_report(args, eff, [r.to_dict() for r in rows], t0), indent=1) + "\n")
        except OSError as exc:
            raise CliError("write", str(exc)) from None
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


COMMANDS = {
    "report-table1": cmd_report_table1,
    "export": cmd_export,
    "map-build": cmd_map_build,
    "map-verify": cmd_map_verify,
    "ccz-find": cmd_ccz_find,
    "ccz-verify": cmd_ccz_verify,
    "sim-run": cmd_sim_run,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--code", default=_DEFAULTS["code"], help="registry name (see report-table1)")
    common.add_argument("--config", help="JSON config; explicit flags take precedence")
    common.add_argument("--seed", type=int, default=_DEFAULTS["seed"])
    common.add_argument("--out", default=_DEFAULTS["out"])
    common.add_argument("--format", choices=["mtx", "alist", "json", "text"], default=_DEFAULTS["format"])
    common.add_argument("--q", type=int, default=_DEFAULTS["q"], help="check row of H_C used by the inclusion (1-based)")
    common.add_argument("--weight-cap", type=int, default=_DEFAULTS["weight_cap"])
    common.add_argument("--budget", type=int, default=_DEFAULTS["budget"], help="CCZ search node budget")
    common.add_argument("--shots", type=int, default=_DEFAULTS["shots"])
    common.add_argument("--p", type=float, nargs="+", default=_DEFAULTS["p"])
    common.add_argument("--rounds", type=int, default=_DEFAULTS["rounds"])
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="dimjump", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    t1 = sub.add_parser("report-table1", parents=[common], help="parameters of all registry pairs")
    t1.add_argument("--no-distance", action="store_true")
    t1.add_argument("--isd", type=int, default=40, help="random information-set iterations for upper bounds")
    t1.add_argument("--ccz", action="store_true", help="also run the CCZ solver within --budget")
    ex = sub.add_parser("export", parents=[common], help="write check matrices")
    ex.add_argument("--dim", type=int, choices=[2, 3], default=3)
    sub.add_parser("map-build", parents=[common], help="physical CNOT schedule of the inclusion map")
    sub.add_parser("map-verify", parents=[common], help="chain-map and transversality checks")
    sub.add_parser("ccz-find", parents=[common], help="search a depth-2 equivariant CCZ")
    cv = sub.add_parser("ccz-verify", parents=[common], help="check a triple file")
    cv.add_argument("triples")
    sr = sub.add_parser("sim-run", parents=[common], help="Monte Carlo experiments")
    sr.add_argument("--experiment", choices=["memory", "teleport", "single_shot"], default=_DEFAULTS["experiment"])
    sr.add_argument("--noise", choices=["code_capacity", "phenomenological", "circuit_level"], default=_DEFAULTS["noise"])
    sr.add_argument("--direction", choices=["to3D", "to2D"], default=_DEFAULTS["direction"])
    sr.add_argument("--dim", type=int, choices=[2, 3], default=3)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        eff = _merge_config(args)
        return COMMANDS[args.command](args, eff)
    except CliError as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "kind": exc.kind}) + "\n")
        return EXIT_ERROR
    except ValueError as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "kind": "value"}) + "\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
