"""``kzdyn run``: configure a module, run check suites, write a report."""
from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .errors import ConfigError
from .modules import ModuleDescriptor
from .suites import SUITES, SuiteConfig, emit_report, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
_KEYS = {"type", "rank", "modules", "weight", "kappa", "samples", "seed", "suite", "format", "out"}


def read_config_file(path: str) -> dict:
    """key=value lines; '#' starts a comment; repeated ``suite`` keys accumulate."""
    out: dict = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key=value")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.replace("-", "_").lstrip("_")
        if key not in _KEYS:
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        if key == "suite":
            out.setdefault("suite", []).extend(v.strip() for v in value.split(",") if v.strip())
        else:
            out[key] = value
    return out


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kzdyn", description="Exact checks of KZ and dynamical difference operators.")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run check suites")
    run.add_argument("--config", help="key=value file; flags override it")
    run.add_argument("--type", help="Cartan type, e.g. A, A3, G2 (default A)")
    run.add_argument("--rank", help="rank if --type has none (default 2)")
    run.add_argument("--modules", help="comma-separated wedge degrees, e.g. 1,1 (default 1,1)")
    run.add_argument("--weight", help="comma-separated gl_N weight selecting V[nu] for the det suite")
    run.add_argument("--kappa", help="fixed kappa; random per sample if omitted")
    run.add_argument("--samples", help="sample points per check (default 3)")
    run.add_argument("--seed", help="random seed (falls back to KZDYN_SEED, then 0)")
    run.add_argument("--suite", action="append", help=f"one of {', '.join(SUITES)}; repeatable (default all)")
    run.add_argument("--format", choices=("jsonlines", "markdown"))
    run.add_argument("--out", help="report path (default stdout)")
    return p


def _int(name: str, value) -> int:
    try:
        return int(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} must be an integer, got {value!r}") from exc


def _fraction(name: str, value) -> Fraction:
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{name} must be a rational, got {value!r}") from exc


def build_config(args: argparse.Namespace, env: dict | None = None) -> SuiteConfig:
    env = os.environ if env is None else env
    raw = read_config_file(args.config) if args.config else {}
    for key in _KEYS:
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value

    lie_type = str(raw.get("type", "A")).strip()
    has_digits = any(ch.isdigit() for ch in lie_type)
    rank = _int("rank", raw["rank"]) if "rank" in raw else (None if has_digits else 2)
    if "seed" in raw:
        seed = _int("seed", raw["seed"])
    elif env.get("KZDYN_SEED"):
        seed = _int("KZDYN_SEED", env["KZDYN_SEED"])
    else:
        seed = 0
    suites = raw.get("suite") or list(SUITES)
    if isinstance(suites, str):
        suites = [suites]
    config = SuiteConfig(
        lie_type=lie_type,
        rank=rank,
        seed=seed,
        samples=_int("samples", raw.get("samples", 3)),
        kappa=_fraction("kappa", raw["kappa"]) if raw.get("kappa") not in (None, "") else None,
        suites=tuple(suites),
        fmt=raw.get("format", "jsonlines"),
        out=raw.get("out") or None,
    )
    rs = config.root_system()
    config.lie_type, config.rank = rs.letter, rs.rank
    if rs.letter == "A":
        desc = ModuleDescriptor.parse(str(raw.get("modules", "1,1")), rs.rank + 1)
        config.modules = desc.degrees
        if raw.get("weight"):
            config.weight = tuple(_fraction("weight", x) for x in str(raw["weight"]).split(","))
    config.validate()
    return config


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        config = build_config(args)
        result = run_suite(config)
    except ConfigError as exc:
        print(f"kzdyn: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        text = emit_report(config, result)
    except OSError as exc:
        print(f"kzdyn: cannot write report: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if config.out is None:
        sys.stdout.write(text)
    counts = result.counts()
    print(f"PASS {counts['PASS']}  FAIL {counts['FAIL']}  SKIP {counts['SKIP']}", file=sys.stderr)
    return EXIT_OK if result.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
