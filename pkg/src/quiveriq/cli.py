"""Command-line front end: ``quiveriq {verify,ifun,fixed-points,oracle}``.

Configs are YAML files; rationals inside them are written as ``"p/q"``
strings.  Reports are JSON with sorted keys so identical runs are byte
identical.  Exit codes: 0 pass, 1 mismatch, 2 configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import yaml

from . import __version__
from .duality import (DEFAULT_DIRECTION, DIRECTIONS, CaseTag, am_box, classify_case,
                      select_fixed_points, verify_pair)
from .exact import as_rat, format_monomial
from .iseries import EffBox, i_am, i_bm
from .oracle import run_oracle_suite
from .quiver import (AnQuiverSpec, NegativeRankError, ParamAssignment, QuiverError,
                     enumerate_fixed_points, iota, mutate, sample_params)

EXIT_PASS, EXIT_MISMATCH, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


def rat_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass
class RunConfig:
    gauge_ranks: tuple
    frame_rank: int
    taut_rank: int = 0
    node: int | None = None
    caps: tuple | None = None
    seeds: tuple = (1,)
    fixed_points: str | int = "all"   # "all" or a sample size
    direction: str = DEFAULT_DIRECTION
    negative_control: bool = False
    lambdas: tuple | None = None      # explicit parameters override seeded sampling
    etas: tuple = ()
    oracle: dict = field(default_factory=dict)

    @property
    def spec(self) -> AnQuiverSpec:
        return AnQuiverSpec(self.gauge_ranks, self.frame_rank, self.taut_rank)

    def echo(self) -> dict:
        return {
            "quiver": {"gauge_ranks": list(self.gauge_ranks), "frame_rank": self.frame_rank,
                       "taut_rank": self.taut_rank},
            "node": self.node, "caps": list(self.caps) if self.caps else None,
            "seeds": list(self.seeds), "fixed_points": self.fixed_points,
            "direction": self.direction, "negative_control": self.negative_control,
            "params": None if self.lambdas is None else {
                "lambdas": [rat_str(v) for v in self.lambdas],
                "etas": [rat_str(v) for v in self.etas]},
        }

    def params(self, seed: int, cap: int) -> ParamAssignment:
        if self.lambdas is None:
            return sample_params(self.spec, seed, cap)
        return ParamAssignment(self.lambdas, self.etas, seed)


def _key_lines(text: str) -> dict:
    """Map dotted YAML key paths to 1-based line numbers for error messages."""
    out = {}

    def walk(node, prefix):
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                path = f"{prefix}.{k.value}" if prefix else str(k.value)
                out[path] = k.start_mark.line + 1
                walk(v, path)

    try:
        walk(yaml.compose(text), "")
    except yaml.YAMLError:
        pass
    return out


def _int_list(value, what) -> tuple:
    if isinstance(value, str):
        value = [v for v in value.replace(";", ",").split(",") if v.strip()]
    try:
        return tuple(int(v) for v in value)
    except (TypeError, ValueError):
        raise ConfigError(f"{what} must be a list of integers, got {value!r}") from None


def load_config(path: str | None, args) -> RunConfig:
    raw, lines, src = {}, {}, "<flags>"
    if path:
        src = path
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ConfigError(f"{path}: cannot read config: {e}") from None
        try:
            raw = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"{path}: invalid YAML: {e}") from None
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be a mapping")
        lines = _key_lines(text)

    def where(key):
        return f"{src}:{lines[key]}" if key in lines else src

    q = raw.get("quiver")
    if args.quiver:
        q = parse_quiver(args.quiver)
    if not isinstance(q, dict):
        raise ConfigError(f"{where('quiver')}: missing 'quiver' section (or pass --quiver)")
    try:
        cfg = RunConfig(
            gauge_ranks=_int_list(q.get("gauge_ranks", ()), "quiver.gauge_ranks"),
            frame_rank=int(q.get("frame_rank", 0)),
            taut_rank=int(q.get("taut_rank", 0)),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{where('quiver')}: {e}") from None
    try:
        spec = cfg.spec
    except QuiverError as e:
        raise ConfigError(f"{where('quiver.gauge_ranks')}: {e}") from None

    node = args.node if args.node is not None else raw.get("node")
    if node is not None:
        node = int(node)
        if not 1 <= node <= spec.D - 1:
            raise ConfigError(f"{where('node')}: node {node} out of range 1..{spec.D - 1}")
        try:
            mutate(spec, node)
        except NegativeRankError as e:
            raise ConfigError(f"{where('node')}: {e}") from None
    cfg.node = node

    caps = args.caps if args.caps is not None else raw.get("caps")
    if caps is not None:
        caps = _int_list(caps, "caps")
        if len(caps) != spec.D - 1 or any(c < 0 for c in caps):
            raise ConfigError(f"{where('caps')}: need {spec.D - 1} nonnegative caps, got {list(caps)}")
    cfg.caps = caps

    seeds = args.seed or raw.get("seeds") or [1]
    cfg.seeds = _int_list(seeds if isinstance(seeds, (list, tuple)) else [seeds], "seeds")

    fpm = raw.get("fixed_points", "all")
    if isinstance(fpm, dict) and "sample" in fpm:
        fpm = int(fpm["sample"])
    if fpm != "all" and not isinstance(fpm, int):
        raise ConfigError(f"{where('fixed_points')}: expected 'all' or {{sample: n}}")
    cfg.fixed_points = fpm

    direction = args.direction or raw.get("direction", DEFAULT_DIRECTION)
    if direction not in DIRECTIONS:
        raise ConfigError(f"{where('direction')}: direction must be one of {DIRECTIONS}")
    cfg.direction = direction
    cfg.negative_control = bool(args.negative_control or raw.get("negative_control", False))
    cfg.oracle = raw.get("oracle") or {}
    if raw.get("params") is not None:
        cfg.lambdas, cfg.etas = _explicit_params(raw["params"], spec, where("params"))
    return cfg


def _explicit_params(block, spec: AnQuiverSpec, loc: str) -> tuple:
    if not isinstance(block, dict):
        raise ConfigError(f"{loc}: params must be a mapping with 'lambdas' and 'etas'")
    try:
        lams = tuple(as_rat(v) for v in block.get("lambdas", ()))
        etas = tuple(as_rat(v) for v in block.get("etas", ()))
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"{loc}: rationals must be 'p/q' strings or integers ({e})") from None
    if len(lams) != spec.frame_rank or len(etas) != spec.taut_rank:
        raise ConfigError(f"{loc}: need {spec.frame_rank} lambdas and {spec.taut_rank} etas")
    if not ParamAssignment(lams, etas).is_generic():
        raise ConfigError(f"{loc}: parameters must have pairwise non-integer differences")
    return lams, etas


def parse_quiver(text: str) -> dict:
    """``"1,2;3"`` or ``"1,2;3;N0=1"`` into a quiver mapping."""
    parts = [p.strip() for p in text.split(";")]
    if len(parts) < 2:
        raise ConfigError(f"--quiver expects 'N1,...,N_(D-1);N_D[;N0=..]', got {text!r}")
    taut = 0
    if len(parts) > 2:
        taut = int(parts[2].split("=")[-1])
    return {"gauge_ranks": _int_list(parts[0], "--quiver"), "frame_rank": int(parts[1]),
            "taut_rank": taut}


def _require(cfg: RunConfig, *names):
    for n in names:
        if getattr(cfg, n) is None:
            raise ConfigError(f"'{n}' is required for this command (config key or --{n})")


def _fps(cfg: RunConfig, seed: int):
    spec = cfg.spec
    if cfg.fixed_points == "all":
        return select_fixed_points(spec, seed)
    return select_fixed_points(spec, seed, limit=0, sample=min(cfg.fixed_points,
                                                               len(enumerate_fixed_points(spec))))


def _report_entry(rep) -> dict:
    return {
        "case": rep.case.value, "k": rep.k, "caps": list(rep.caps), "seed": rep.seed,
        "direction": rep.direction, "negative_control": rep.negative_control,
        "window_size": rep.window_size, "verdict": rep.verdict,
        "pairs": [{
            "fixed_point": p.fp, "image": p.image, "window_size": p.window_size,
            "verdict": "pass" if p.passed else "fail",
            "mismatches": [{"monomial": format_monomial(m.monomial), "lhs": rat_str(m.lhs),
                            "rhs": rat_str(m.rhs)} for m in p.mismatches],
        } for p in rep.pairs],
    }


def cmd_verify(cfg: RunConfig) -> tuple:
    _require(cfg, "node", "caps")
    runs = []
    for seed in cfg.seeds:
        rep = verify_pair(cfg.spec, cfg.node, cfg.caps, seed, _fps(cfg, seed),
                          cfg.direction, cfg.negative_control,
                          params=cfg.params(seed, max(cfg.caps)))
        runs.append(_report_entry(rep))
    doc = {"runs": runs, "verdict": "pass" if all(r["verdict"] == "pass" for r in runs) else "fail"}
    case = classify_case(cfg.spec, cfg.node)
    if case.tag is CaseTag.EQUAL and case.direction is not None and not cfg.negative_control:
        res = {}
        for d in DIRECTIONS:
            res[d] = "pass" if all(
                verify_pair(cfg.spec, cfg.node, cfg.caps, s, _fps(cfg, s), d,
                            params=cfg.params(s, max(cfg.caps))).passed
                for s in cfg.seeds) else "fail"
        doc["direction_resolution"] = res
    return doc, EXIT_PASS if doc["verdict"] == "pass" else EXIT_MISMATCH


def cmd_ifun(cfg: RunConfig, side: str, fp_id: int) -> tuple:
    _require(cfg, "caps")
    spec = cfg.spec
    fps = enumerate_fixed_points(spec)
    if not 0 <= fp_id < len(fps):
        raise ConfigError(f"unknown fixed point id {fp_id}; valid ids are 0..{len(fps) - 1}")
    fp = fps[fp_id]
    seed = cfg.seeds[0]
    params = cfg.params(seed, max(cfg.caps))
    if side == "bm":
        series = i_bm(spec, fp, params, EffBox(cfg.caps))
        label = fp.label()
    else:
        _require(cfg, "node")
        case = classify_case(spec, cfg.node)
        mfp = iota(fp, cfg.node)
        series = i_am(case.mspec, mfp, params, am_box(case, cfg.caps))
        label = mfp.label()
    table = {format_monomial(e): rat_str(c) for e, c in series.items()}
    doc = {"side": side, "fixed_point_id": fp_id, "fixed_point": label, "seed": seed,
           "lambdas": [rat_str(v) for v in params.lambdas],
           "etas": [rat_str(v) for v in params.etas],
           "box": {"lo": list(series.lo), "hi": list(series.hi)}, "series": table}
    return doc, EXIT_PASS


def cmd_fixed_points(cfg: RunConfig) -> tuple:
    spec = cfg.spec
    nodes = [cfg.node] if cfg.node else list(range(1, spec.D))
    valid = []
    for k in nodes:
        try:
            mutate(spec, k)
            valid.append(k)
        except NegativeRankError:
            pass
    listing = []
    for i, fp in enumerate(enumerate_fixed_points(spec)):
        listing.append({"id": i, "chain": fp.label(),
                        "images": {str(k): iota(fp, k).label() for k in valid}})
    return {"count": len(listing), "fixed_points": listing}, EXIT_PASS


def cmd_oracle(cfg: RunConfig | None) -> tuple:
    opts = cfg.oracle if cfg else {}
    seeds = tuple(cfg.seeds) if cfg else (1, 2)
    rows = run_oracle_suite(seeds, int(opts.get("fuzz_count", 100)),
                            int(opts.get("two_path_cap", 5)), int(opts.get("relation_cap", 4)))
    ok = all(r["outcome"] != "fail" for r in rows)
    return {"checks": rows, "verdict": "pass" if ok else "fail"}, EXIT_PASS if ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quiveriq", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("verify", "ifun", "fixed-points", "oracle"):
        p = sub.add_parser(name)
        p.add_argument("--config", help="YAML run configuration")
        p.add_argument("--quiver", help="inline ranks, e.g. '1,2;3' or '1,2;3;N0=1'")
        p.add_argument("--seed", type=int, action="append", help="parameter seed (repeatable)")
        p.add_argument("--caps", help="comma-separated degree caps, one per gauge node")
        p.add_argument("--node", type=int, help="mutation node k")
        p.add_argument("--side", choices=("bm", "am"), default="bm")
        p.add_argument("--fp", type=int, default=0, help="fixed point id (see fixed-points)")
        p.add_argument("--direction", choices=DIRECTIONS)
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--negative-control", action="store_true",
                       help="perturb the prefactor so verification must fail")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "oracle" and not (args.config or args.quiver):
            cfg = None
            if args.seed:
                cfg = RunConfig((1,), 1, seeds=tuple(args.seed))
        else:
            cfg = load_config(args.config, args)
    except (ValueError, TypeError) as e:   # ConfigError, QuiverError and malformed values
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "verify":
            doc, code = cmd_verify(cfg)
        elif args.command == "ifun":
            doc, code = cmd_ifun(cfg, args.side, args.fp)
        elif args.command == "fixed-points":
            doc, code = cmd_fixed_points(cfg)
        else:
            doc, code = cmd_oracle(cfg)
    except (ConfigError, QuiverError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    doc = {"tool": "quiveriq", "version": __version__, "command": args.command,
           "config": cfg.echo() if cfg else None, **doc}
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
