"""Command line entry point ``slablb``.

Exit codes: 0 when every executed check passes (skipped and vacuous checks do
not count as failures), 1 when any check fails, 2 on a configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field, fields, replace
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Sequence

from .construction import ConstructionConfig, ConstructionInstance, bounds_rows, bounds_table, build_instance
from .lemma_lab import (
    random_multilinear,
    verify_detx_batch,
    verify_interval_bound,
    verify_slicing_chain,
    verify_tweak_batch,
)
from .poly_core import MultiPoly
from .reduction import verify_closed_forms, verify_reduction_equivalence
from .report import FAIL, VerificationReport, write_csv, write_json
from .rng import trial_rng
from .volume_check import CSV_HEADER, condition_report

COMMANDS = ("verify-lemmas", "verify-reduction", "build", "check", "bounds", "all")


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    construction: ConstructionConfig = field(default_factory=ConstructionConfig)
    seed: int = 7
    lemma_trials: int = 100
    closed_form_trials: int = 100
    reduction_trials: int = 10_000
    samples: int = 200_000
    pairs: int = 64
    kappa: float = 4.0

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "RunConfig":
        if not isinstance(obj, Mapping):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kw = dict(obj)
        try:
            kw["construction"] = ConstructionConfig.from_json(kw.get("construction", {}))
            cfg = cls(**kw)
            cfg.construction.validate()
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        return cfg

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RunManifest:
    command: str
    config_path: str | None
    out_dir: str
    seed: int
    timestamp: str


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return RunConfig.from_json(obj)


# ---------------------------------------------------------------------------
# pipeline stages


def _slicing_pair(seed: int, d: int = 4) -> tuple[MultiPoly, MultiPoly]:
    # p2 = p1 - X1 * L(X3..Xd), so every gap depends on the sliced variables
    rng = trial_rng(seed, 0, "near-pair")
    p1 = random_multilinear(rng, d)
    lin = MultiPoly.constant(d, 0)
    for v in range(2, d):
        lin = lin + MultiPoly.variable(d, v) * Fraction(int(rng.integers(1, 9)), 8)
    return p1, p1 - MultiPoly.variable(d, 0) * lin


def lemma_reports(trials: int, seed: int) -> list[VerificationReport]:
    reports = [
        verify_tweak_batch(trials=2 * trials, seed=seed),
        verify_interval_bound(calibration=trials, holdout=trials, seed=seed),
    ]
    reports.extend(verify_detx_batch(trials=trials, seed=seed))
    p1, p2 = _slicing_pair(seed)
    for theta in (0.1, 0.01):
        reports.append(verify_slicing_chain(p1, p2, theta, Fraction(1, 8), trials=2, seed=seed))
    return reports


def reduction_reports(closed_trials: int, trials: int, seed: int) -> list[VerificationReport]:
    return verify_closed_forms(trials=closed_trials, seed=seed) + verify_reduction_equivalence(
        trials=trials, seed=seed)


def _suite(name: str, seed: int, reports: Sequence[VerificationReport]) -> dict:
    return {"suite": name, "seed": seed, "reports": [r.to_json() for r in reports]}


def _failed(reports: Sequence[VerificationReport]) -> bool:
    return any(r.status == FAIL for r in reports)


def _print_reports(reports: Sequence[VerificationReport]) -> None:
    for r in reports:
        print(f"{r.check_id:<32} {r.status}")


def run_verify_lemmas(cfg: RunConfig, out: Path) -> int:
    reports = lemma_reports(cfg.lemma_trials, cfg.seed)
    write_json(out / "lemmas.json", _suite("lemmas", cfg.seed, reports))
    _print_reports(reports)
    return int(_failed(reports))


def run_verify_reduction(cfg: RunConfig, out: Path) -> int:
    reports = reduction_reports(cfg.closed_form_trials, cfg.reduction_trials, cfg.seed)
    write_json(out / "reduction.json", _suite("reduction", cfg.seed, reports))
    _print_reports(reports)
    return int(_failed(reports))


def run_build(cfg: RunConfig, inst_path: Path) -> ConstructionInstance:
    inst = build_instance(cfg.construction)
    write_json(inst_path, inst.to_json())
    print(f"built {len(inst.queries)} queries, {len(inst.inputs)} inputs -> {inst_path}")
    return inst


def run_check(inst: ConstructionInstance, cfg: RunConfig, out: Path) -> int:
    report, rows = condition_report(inst, cfg.samples, cfg.pairs, cfg.seed, cfg.kappa)
    write_csv(out / "conditions.csv", CSV_HEADER + ["seed"], [row + [cfg.seed] for row in rows])
    write_json(out / "conditions.json", {"seed": cfg.seed, "reports": [report.to_json()]})
    c1, c2 = report.measured["condition1"], report.measured["condition2"]
    print(f"condition 1: {c1['queries'] - c1['failures']}/{c1['queries']} queries pass")
    print(f"condition 2: {c2['passed']}/{c2['pairs']} pairs pass ({c2['fraction']:.3f})")
    _print_reports([report])
    return int(report.status == FAIL)


def run_bounds(ds: Sequence[int], seed: int, out: Path | None) -> int:
    table = bounds_table(tuple(ds))
    sys.stdout.write(table)
    if out is not None:
        write_json(out / "bounds.json", {"seed": seed, "rows": bounds_rows(tuple(ds)), "table": table})
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slablb", description="Exact verification of the slab lower-bound construction.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, trials=False):
        p.add_argument("--config", help="JSON run config")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, help="master seed (overrides config)")
        if trials:
            p.add_argument("--trials", type=int, help="trial count (overrides config)")

    common(sub.add_parser("verify-lemmas", help="tweaking, agreement interval, slicing, determinant checks"), True)
    common(sub.add_parser("verify-reduction", help="closed forms and oracle equivalence"), True)
    p = sub.add_parser("build", help="build a desk-scale instance")
    p.add_argument("--config", help="JSON run config")
    p.add_argument("--out", default="inst.json", help="instance file")
    p = sub.add_parser("check", help="Monte-Carlo framework conditions on an instance")
    p.add_argument("--inst", required=True, help="instance file")
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--pairs", type=int, default=64)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--kappa", type=float, default=4.0)
    p.add_argument("--out", default=".", help="output directory")
    p = sub.add_parser("bounds", help="print the exponent table")
    p.add_argument("--d", type=int, nargs="+", default=[3, 4])
    p.add_argument("--out", help="also write bounds.json here")
    common(sub.add_parser("all", help="every stage in order"))
    return parser


def _with_overrides(cfg: RunConfig, args) -> RunConfig:
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    if getattr(args, "trials", None) is not None:
        key = "lemma_trials" if args.command == "verify-lemmas" else "reduction_trials"
        cfg = replace(cfg, **{key: args.trials})
    return cfg


def _load_instance(path: str) -> ConstructionInstance:
    try:
        return ConstructionInstance.from_json(json.loads(Path(path).read_text()))
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"cannot load instance {path}: {exc}") from exc


def run(args) -> int:
    cmd = args.command
    if cmd == "bounds":
        if any(d < 3 for d in args.d):
            raise ConfigError("--d must be at least 3")
        return run_bounds(args.d, 0, Path(args.out) if args.out else None)
    if cmd == "check":
        inst = _load_instance(args.inst)
        cfg = RunConfig(inst.config, seed=args.seed, samples=args.samples, pairs=args.pairs, kappa=args.kappa)
        if args.samples < 10_000 or args.pairs < 1:
            raise ConfigError("need --samples >= 10000 and --pairs >= 1")
        return run_check(inst, cfg, Path(args.out))
    cfg = _with_overrides(load_config(args.config), args)
    if cmd == "build":
        run_build(cfg, Path(args.out))
        return 0
    out = Path(args.out)
    if cmd == "verify-lemmas":
        return run_verify_lemmas(cfg, out)
    if cmd == "verify-reduction":
        return run_verify_reduction(cfg, out)
    # all
    manifest = RunManifest(cmd, args.config, str(out), cfg.seed, datetime.now(timezone.utc).isoformat())
    write_json(out / "manifest.json", asdict(manifest) | {"config": cfg.to_json()})
    codes = [run_verify_lemmas(cfg, out), run_verify_reduction(cfg, out)]
    inst = run_build(cfg, out / "inst.json")
    codes.append(run_check(inst, cfg, out))
    codes.append(run_bounds((3, 4), cfg.seed, out))
    return max(codes)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
