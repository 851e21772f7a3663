"""``kgv``: batch front end with TOML configs and machine-readable reports.

Exit codes: 0 success, 1 usage or input error, 2 verification failure.

Settings are resolved as command-line flag, then the ``[<command>]`` table (or
top-level key) of the ``--config`` file, then the built-in default.  Reports
record the seed and the resolved settings but no timings, so a rerun with the
same settings writes byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import bilinear, certifier, sharpness
from .kgfun import KGFunctionError

log = logging.getLogger("kgverify")

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2

COMMON_DEFAULTS = {"out": "kgv-out", "seed": 0, "workers": None, "tolerance": None}

DEFAULTS = {
    "certify": {
        "target": "E2", "constant": None, "max_depth": 40, "min_width": 1e-8,
        "box_budget": 10_000_000, "substitution_width": 1e-4,
        "validation_samples": 100_000, "alphas": [], "spot_samples": 100_000,
    },
    "sharpness": {
        "exponents": list(sharpness.DEFAULT_EXPONENTS),
        "constants": list(sharpness.DEFAULT_CONSTANTS),
        "trace": [], "trace_samples": 6, "blowup_alpha": [], "blowup_xi1": 1.0,
    },
    "bilinear": {
        "profile1": "bump:1,2", "profile2": "bump:3,4", "dxi": bilinear.DEFAULT_DXI,
        "t0": 25.0, "pad": 64.0, "dx": 0.5, "dt": 0.25, "max_doublings": 8,
    },
    "replay": {"path": None},
    "weights": {
        "region": [-3.0, 3.0, -3.0, 3.0], "resolution": 101, "delta": 1e-3,
        "ordering_samples": 0,
    },
}

DEFAULT_TOLERANCE = {"bilinear": 0.05, "certify": 1e-10}


class UsageError(Exception):
    pass


# -- parsing ---------------------------------------------------------------------

def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _names(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML file with settings")
    common.add_argument("--out", help="output directory (default kgv-out)")
    common.add_argument("--seed", type=int, help="random seed recorded in every report")
    common.add_argument("--workers", type=int, help="worker processes (env KGV_WORKERS)")
    common.add_argument("--tolerance", type=float, help="command-specific tolerance")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="kgv", description="Batch runs with TOML configs and machine-readable reports.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("certify", parents=[common], help="interval certificate for a target")
    c.add_argument("--target", help="E2, E5 or Elem2")
    c.add_argument("--constant", type=float, help="constant (default: the sharp value)")
    c.add_argument("--max-depth", type=int)
    c.add_argument("--min-width", type=float)
    c.add_argument("--box-budget", type=int)
    c.add_argument("--substitution-width", type=float)
    c.add_argument("--validation-samples", type=int)
    c.add_argument("--alphas", type=_floats,
                   help="with Elem2 at constant 2: interpolate to these alphas")
    c.add_argument("--spot-samples", type=int)

    s = sub.add_parser("sharpness", parents=[common], help="violations and extremal traces")
    s.add_argument("--exponents", type=_floats)
    s.add_argument("--constants", type=_floats)
    s.add_argument("--trace", type=_names, help="sigma1_over_J and/or sigma2_over_J")
    s.add_argument("--trace-samples", type=int)
    s.add_argument("--blowup-alpha", type=_floats, help="alphas in (0, 1] for the slope fit")
    s.add_argument("--blowup-xi1", type=float)

    b = sub.add_parser("bilinear", parents=[common], help="space-time vs frequency side")
    b.add_argument("--profile1", help="KIND:a,b[,re,im] or csv:PATH")
    b.add_argument("--profile2")
    b.add_argument("--dxi", type=float)
    b.add_argument("--t0", type=float)
    b.add_argument("--pad", type=float)
    b.add_argument("--dx", type=float)
    b.add_argument("--dt", type=float)
    b.add_argument("--max-doublings", type=int)

    r = sub.add_parser("replay", parents=[common], help="re-check a certificate file")
    r.add_argument("path", nargs="?", type=Path)

    w = sub.add_parser("weights", parents=[common], help="pointwise weight comparison map")
    w.add_argument("--region", type=_floats, help="x0,x1,y0,y1")
    w.add_argument("--resolution", type=int)
    w.add_argument("--delta", type=float)
    w.add_argument("--ordering-samples", type=int)
    return p


def resolve(args: argparse.Namespace) -> dict:
    """Merge flags over the config file over defaults; reject unknown keys."""
    cmd = args.command
    allowed = {**COMMON_DEFAULTS, **DEFAULTS[cmd]}
    merged = dict(allowed)
    if args.config is not None:
        try:
            data = tomllib.loads(Path(args.config).read_text())
        except FileNotFoundError:
            raise UsageError(f"config file {args.config} not found")
        except tomllib.TOMLDecodeError as e:
            raise UsageError(f"config file {args.config}: {e}")
        tables = {k for k, v in data.items() if isinstance(v, dict)}
        unknown_tables = tables - set(DEFAULTS)
        if unknown_tables:
            raise UsageError(f"unknown config tables: {sorted(unknown_tables)}")
        top = {k: v for k, v in data.items() if k not in tables}
        for source in (top, data.get(cmd, {})):
            if source is top:
                # top-level keys may be common settings only
                bad = set(source) - set(COMMON_DEFAULTS)
            else:
                bad = set(source) - set(allowed)
            if bad:
                raise UsageError(f"unknown config keys: {sorted(bad)}")
            merged.update(source)
        for name in tables & set(DEFAULTS) - {cmd}:
            bad = set(data[name]) - set(COMMON_DEFAULTS) - set(DEFAULTS[name])
            if bad:
                raise UsageError(f"unknown config keys in [{name}]: {sorted(bad)}")
    for key in allowed:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    if merged["workers"] is None:
        env = os.environ.get("KGV_WORKERS")
        try:
            merged["workers"] = int(env) if env else 1
        except ValueError:
            raise UsageError(f"KGV_WORKERS must be an integer, got {env!r}")
    if merged["workers"] < 1:
        raise UsageError("workers must be at least 1")
    if merged["tolerance"] is None:
        merged["tolerance"] = DEFAULT_TOLERANCE.get(cmd, 1e-12)
    if not merged["tolerance"] > 0:
        raise UsageError("tolerance must be positive")
    merged["seed"] = int(merged["seed"])
    if not 0 <= merged["seed"] < 2**64:
        raise UsageError("seed must be a 64-bit unsigned integer")
    return merged


# -- output helpers --------------------------------------------------------------

def _outdir(cfg) -> Path:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _settings(cfg) -> dict:
    # worker count changes nothing in the results, so it stays out of reports
    return {k: v for k, v in cfg.items() if k not in ("workers", "out")}


# -- commands --------------------------------------------------------------------

def cmd_certify(cfg) -> int:
    try:
        target = certifier.make_target(cfg["target"], cfg["constant"])
    except ValueError as e:
        raise UsageError(str(e))
    alphas = [float(a) for a in cfg["alphas"]]
    if alphas:
        if target.family != "Elem2" or target.constant != 2.0:
            raise UsageError("--alphas needs --target Elem2 with constant 2")
        if any(not 1.0 <= a <= 2.0 for a in alphas):
            raise UsageError("alphas must lie in [1, 2]")
    conf = certifier.CertifyConfig(
        max_depth=cfg["max_depth"], min_width=cfg["min_width"], box_budget=cfg["box_budget"],
        workers=cfg["workers"], substitution_width=cfg["substitution_width"],
        validation_samples=cfg["validation_samples"], seed=cfg["seed"])
    out = _outdir(cfg)
    tag = target.id.replace("[", "_").replace("]", "").replace("=", "")
    try:
        check = certifier.validate_reformulation(target, conf.validation_samples,
                                                 seed=conf.seed, tol=cfg["tolerance"])
        res = certifier.certify(target, conf, validate=False)
    except certifier.ReformulationMismatch as e:
        log.error("reformulation check failed: %s", e)
        return EXIT_FAIL
    except certifier.BudgetExhausted as e:
        log.error("%s", e)
        return EXIT_FAIL
    report = {"command": "certify", "settings": _settings(cfg), "target": target.to_json(),
              "reformulation": {"samples": check.samples,
                                "max_rel_discrepancy": check.max_rel_discrepancy}}
    if isinstance(res, certifier.CertFailure):
        b = res.suspect
        log.error("certification of %s failed at depth %d; suspect box t1=[%r, %r] "
                  "t2=[%r, %r], margin bound [%r, %r]", target.id, res.depth,
                  b.t1.lo, b.t1.hi, b.t2.lo, b.t2.hi, res.bound.lo, res.bound.hi)
        report.update(result="failure", failure=res.to_json())
        _write_json(out / f"certify_{tag}.json", report)
        return EXIT_FAIL
    cert_path = out / f"certificate_{tag}.json"
    res.dump(cert_path)
    report.update(result="certificate", certificate=cert_path.name, count=res.count,
                  evaluated=res.evaluated, lemmas=list(res.lemmas),
                  tiling_sha256=res.tiling_digest())
    status = EXIT_OK
    if alphas:
        e2 = certifier.certify(certifier.make_target("E2"), conf, validate=True)
        if isinstance(e2, certifier.CertFailure):
            log.error("E2 certificate needed for interpolation failed")
            return EXIT_FAIL
        e2.dump(out / "certificate_E2.json")
        concl = [certifier.compose_interpolation(e2, res, a, cfg["spot_samples"], cfg["seed"])
                 for a in alphas]
        report["interpolation"] = [c.to_json() for c in concl]
        if any(c.violations for c in concl):
            log.error("interpolated conclusion failed its spot check")
            status = EXIT_FAIL
    _write_json(out / f"certify_{tag}.json", report)
    log.info("%s: %d boxes, written to %s", target.id, res.count, cert_path)
    return status


def cmd_sharpness(cfg) -> int:
    exps, consts = [float(a) for a in cfg["exponents"]], [float(c) for c in cfg["constants"]]
    if not exps or not consts:
        raise UsageError("need at least one exponent and one constant")
    for a in exps:
        if not 0.5 < a < 0.75:
            raise UsageError(f"exponent {a} outside (1/2, 3/4)")
    for C in consts:
        if not C >= 1:
            raise UsageError(f"constant {C} must be >= 1")
    for fam in cfg["trace"]:
        if fam not in ("sigma1_over_J", "sigma2_over_J"):
            raise UsageError(f"unknown trace family {fam!r}")
    for a in cfg["blowup_alpha"]:
        if not 0 < a <= 1:
            raise UsageError(f"blowup alpha {a} outside (0, 1]")
    out = _outdir(cfg)
    report = {"command": "sharpness", "settings": _settings(cfg)}
    status = EXIT_OK
    try:
        vs = sharpness.violation_grid(exps, consts, workers=cfg["workers"])
    except sharpness.SearchFailed as e:
        log.error("%s", e)
        vs, status = [], EXIT_FAIL
        report["error"] = str(e)
    (out / "violations.csv").write_text(sharpness.violations_to_csv(vs))
    (out / "violations.jsonl").write_text(sharpness.violations_to_jsonl(vs))
    report["violations"] = len(vs)
    report["all_rechecked"] = all(v.recheck() for v in vs)
    traces = {}
    for fam in cfg["trace"]:
        tr = sharpness.extremal_ratio(fam, cfg["trace_samples"])
        (out / f"trace_{fam}.csv").write_text(sharpness.trace_to_csv(tr))
        traces[fam] = tr.final
    report["trace_final"] = traces
    report["blowup_slopes"] = {repr(float(a)): sharpness.alpha_blowup_slope(a, cfg["blowup_xi1"])
                               for a in cfg["blowup_alpha"]}
    _write_json(out / "sharpness.json", report)
    return status


def parse_profile(spec: str) -> bilinear.FrequencyProfile:
    """``bump:1,2``, ``semicircle:0,1,2.0,0.5`` (support, then amplitude) or ``csv:PATH``."""
    kind, _, rest = str(spec).partition(":")
    if kind == "csv":
        try:
            return bilinear.FrequencyProfile.from_csv(rest)
        except OSError as e:
            raise UsageError(f"cannot read profile {rest}: {e}")
    try:
        nums = [float(v) for v in rest.split(",")]
    except ValueError:
        raise UsageError(f"bad profile spec {spec!r}")
    if len(nums) not in (2, 4):
        raise UsageError(f"profile spec {spec!r} needs a,b or a,b,re,im")
    amp = complex(nums[2], nums[3]) if len(nums) == 4 else 1.0
    return bilinear.FrequencyProfile.named(kind, nums[0], nums[1], amp)


def cmd_bilinear(cfg) -> int:
    try:
        p1, p2 = parse_profile(cfg["profile1"]), parse_profile(cfg["profile2"])
        rep = bilinear.evaluate_pair(
            p1, p2, tolerance=cfg["tolerance"], dxi=cfg["dxi"], workers=cfg["workers"],
            T0=cfg["t0"], pad=cfg["pad"], dx=cfg["dx"], dt=cfg["dt"],
            max_doublings=cfg["max_doublings"])
    except bilinear.BilinearError as e:
        raise UsageError(str(e))
    except bilinear.NotConverged as e:
        log.error("%s", e)
        return EXIT_FAIL
    out = _outdir(cfg)
    _write_json(out / "bilinear.json", {"command": "bilinear", "settings": _settings(cfg),
                                        "report": rep.to_json()})
    header = ",".join(rep.CSV_COLUMNS)
    (out / "bilinear.csv").write_text(header + "\n" + ",".join(rep.csv_row()) + "\n")
    if not rep.identity_ok:
        log.error("identity check: relative error %.3e exceeds tolerance %.3e",
                  rep.relative_error, rep.tolerance)
    if not rep.ordering_ok:
        log.error("frequency value exceeds a weighted bound")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_replay(cfg) -> int:
    path = cfg["path"]
    if path is None:
        raise UsageError("replay needs a certificate path")
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"certificate {path} not found")
    try:
        cert = certifier.load_certificate(path)
        certifier.replay(cert)
    except (certifier.ReplayError, ValueError, KeyError, TypeError, IndexError) as e:
        log.error("replay of %s failed: %s: %s", path, type(e).__name__, e)
        return EXIT_FAIL
    log.info("replay of %s passed: %d boxes", path, cert.count)
    return EXIT_OK


def cmd_weights(cfg) -> int:
    region = cfg["region"]
    if len(region) != 4:
        raise UsageError("region needs x0,x1,y0,y1")
    try:
        wm = bilinear.weight_comparison(region, cfg["resolution"], cfg["delta"])
    except (ValueError, KGFunctionError) as e:
        raise UsageError(str(e))
    out = _outdir(cfg)
    (out / "weights.csv").write_text(wm.to_csv())
    report = {"command": "weights", "settings": _settings(cfg), "map": wm.summary()}
    status = EXIT_OK
    if cfg["ordering_samples"]:
        rep = bilinear.verify_pointwise_weight_ordering(cfg["ordering_samples"], cfg["seed"])
        report["ordering"] = rep.to_json()
        if not rep.ok:
            status = EXIT_FAIL
    _write_json(out / "weights.json", report)
    return status


COMMANDS = {"certify": cmd_certify, "sharpness": cmd_sharpness, "bilinear": cmd_bilinear,
            "replay": cmd_replay, "weights": cmd_weights}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](cfg)
    except UsageError as e:
        print(f"kgv {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
