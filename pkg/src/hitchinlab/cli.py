"""Command-line entry point: identity suites, gradient flows, spectral probes.

Commands read a flat INI-style configuration (one section per command,
key=value pairs) and write machine-readable reports:

    hitchin-lab verify   --config run.cfg [--seed S] [--out DIR]
    hitchin-lab solve    --config run.cfg [--seed S] [--out DIR]
    hitchin-lab spectrum --config run.cfg [--seed S] [--out DIR]

Exit codes: 0 success, 1 checked failure, 2 usage/configuration error.
Report payloads carry no timestamps; wall-clock metadata goes to a separate
run_meta.json so payload bytes are reproducible for identical config + seed.
HITCHIN_LAB_THREADS caps trial parallelism in the verify suite.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import kernels
from .configuration import load_configuration, random_configuration, save_configuration
from .errors import ConfigError, DomainError
from .fields import constant_gauge_element, random_matrix_field
from .flow import STATUS_CONVERGED, FlowParams, gradient_flow, seed_solution
from .lattice import D01, D10, LatticeForm, make_torus_grid
from .quillen import (
    DENSE_DIMENSION_CAP,
    ReferenceConnection,
    laplacian_spectrum_invariance,
)
from .reports import write_jsonl
from .suite import VerifySettings, run_suite

VERIFY_REPORT_NAME = "verify_reports.jsonl"
FLOW_TRACE_NAME = "flow_trace.csv"
FINAL_CONFIGURATION_NAME = "final_configuration.bin"
SPECTRUM_REPORT_NAME = "spectrum_report.json"
RUN_META_NAME = "run_meta.json"


@dataclass
class VerifyConfig:
    sites: int = 8
    length: float = 1.0
    rank: int = 2
    seed: int = 42
    trials: int = 100
    tolerance: float | None = None
    out: str = "."


@dataclass
class SolveConfig:
    sites: int = 8
    length: float = 1.0
    rank: int = 1
    seed: int = 7
    amplitude: float = 0.3
    smoothness: int = 2
    step_size: float = 0.25
    max_iters: int = 100_000
    target_residual: float = 1e-8
    backtrack: float = 0.5
    growth: float = 1.25
    restart_every: int = 100
    iteration_offset: int = 0
    initial: str = "random"       # random | zero-higgs-seed | file
    resume_from: str = ""
    initial_step: float | None = None
    out: str = "."


@dataclass
class SpectrumConfig:
    sites: int = 6
    length: float = 1.0
    rank: int = 1
    seed: int = 11
    k: int = 10
    amplitude: float = 0.3
    smoothness: int = 2
    out: str = "."


_CONVERTERS = {int: int, float: float, str: str}


def _coerce(value: str, target_type, key: str):
    value = value.strip()
    try:
        if target_type is int:
            return int(value)
        if target_type is float:
            return float(value)
        return value
    except ValueError as exc:
        raise ConfigError(f"cannot parse {key}={value!r} as {target_type.__name__}") from exc


def _load_section(path: str | None, section: str, config_obj):
    if path is None:
        return config_obj
    parser = configparser.ConfigParser()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not parser.has_section(section):
        return config_obj
    optional_floats = {"tolerance", "initial_step"}
    for key, raw in parser.items(section):
        if not hasattr(config_obj, key):
            raise ConfigError(f"unknown key {key!r} in section [{section}]")
        current = getattr(config_obj, key)
        if key in optional_floats:
            setattr(config_obj, key, _coerce(raw, float, key))
        else:
            setattr(config_obj, key, _coerce(raw, type(current), key))
    return config_obj


def _validate_common(cfg) -> None:
    if cfg.sites < 2:
        raise ConfigError(f"sites must be >= 2, got {cfg.sites}")
    if cfg.length <= 0:
        raise ConfigError(f"length must be positive, got {cfg.length}")
    if cfg.rank < 1:
        raise ConfigError(f"rank must be >= 1, got {cfg.rank}")


def _write_meta(out_dir: Path, command: str, cfg) -> None:
    meta = {
        "command": command,
        "config": {k: v for k, v in vars(cfg).items()},
        "kernel_backend": kernels.backend_name(),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    (out_dir / RUN_META_NAME).write_text(json.dumps(meta, sort_keys=True, indent=2))


def cmd_verify(cfg: VerifyConfig) -> int:
    _validate_common(cfg)
    if cfg.trials < 1:
        raise ConfigError(f"trials must be >= 1, got {cfg.trials}")
    grid = make_torus_grid(cfg.sites, cfg.length)
    settings = VerifySettings(
        grid=grid,
        rank=cfg.rank,
        seed=cfg.seed,
        trials=cfg.trials,
        tolerance_override=cfg.tolerance,
    )
    reports = run_suite(settings)
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_jsonl(reports, out_dir / VERIFY_REPORT_NAME)
    _write_meta(out_dir, "verify", cfg)
    failed = [r.identity_name for r in reports if not r.passed]
    for r in reports:
        print(f"[verify] {r.identity_name}: {'pass' if r.passed else 'FAIL'}")
    if failed:
        print(f"[verify] failed checks: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def cmd_solve(cfg: SolveConfig) -> int:
    _validate_common(cfg)
    grid = make_torus_grid(cfg.sites, cfg.length)
    if cfg.initial == "file":
        if not cfg.resume_from:
            raise ConfigError("initial=file requires resume_from=<path>")
        c0, _ = load_configuration(cfg.resume_from)
    elif cfg.initial == "zero-higgs-seed":
        if cfg.rank != 1:
            raise ConfigError("the constant-Higgs seed start requires rank=1")
        c0 = seed_solution(grid, 1, higgs_constant=1.0 + 2.0j)
    elif cfg.initial == "random":
        c0 = random_configuration(
            grid, cfg.rank, cfg.seed, amplitude=cfg.amplitude, smoothness=cfg.smoothness
        )
    else:
        raise ConfigError(f"unknown initial state {cfg.initial!r}")

    params = FlowParams(
        step_size=cfg.initial_step if cfg.initial_step is not None else cfg.step_size,
        max_iters=cfg.max_iters,
        target_residual=cfg.target_residual,
        backtrack=cfg.backtrack,
        growth=cfg.growth,
        seed=cfg.seed,
        restart_every=cfg.restart_every,
        iteration_offset=cfg.iteration_offset,
    )
    final, trace = gradient_flow(c0, params)
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    trace.write_csv(out_dir / FLOW_TRACE_NAME)
    save_configuration(final, out_dir / FINAL_CONFIGURATION_NAME, seed=cfg.seed)
    _write_meta(out_dir, "solve", cfg)
    print(
        f"[solve] status={trace.status} iterations={trace.terminal['iterations']} "
        f"r1={trace.terminal['r1_norm']:.3e} r2={trace.terminal['r2_norm']:.3e}"
    )
    return 0 if trace.status == STATUS_CONVERGED else 1


def cmd_spectrum(cfg: SpectrumConfig) -> int:
    _validate_common(cfg)
    if cfg.k < 1:
        raise ConfigError(f"k must be >= 1, got {cfg.k}")
    dim = cfg.rank ** 2 * cfg.sites ** 2
    if dim >= DENSE_DIMENSION_CAP:
        raise ConfigError(
            f"section dimension rank^2*sites^2 = {dim} reaches the dense-solver cap "
            f"{DENSE_DIMENSION_CAP}; reduce sites or rank"
        )
    grid = make_torus_grid(cfg.sites, cfg.length)
    a0 = ReferenceConnection(
        LatticeForm(
            grid,
            D01,
            random_matrix_field(grid, cfg.rank, (cfg.seed, 0), smoothness=cfg.smoothness,
                                scale=cfg.amplitude),
        )
    )
    phi = LatticeForm(
        grid,
        D10,
        random_matrix_field(grid, cfg.rank, (cfg.seed, 1), smoothness=cfg.smoothness,
                            scale=cfg.amplitude),
    )
    g = constant_gauge_element(grid, cfg.rank, (cfg.seed, 2))
    report = laplacian_spectrum_invariance(a0, phi, g, min(cfg.k, dim))
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / SPECTRUM_REPORT_NAME).write_bytes(report.to_json().encode("utf-8") + b"\n")
    _write_meta(out_dir, "spectrum", cfg)
    print(
        f"[spectrum] dimension={report.dimension} max_rel_discrepancy="
        f"{report.max_rel_discrepancy:.3e} pass={report.passed}"
    )
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hitchin-lab",
        description="identity suites, gradient flows and spectral probes on the lattice",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("verify", "solve", "spectrum"):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="INI config with a [%s] section" % name)
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--out", default=None, help="override the output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    defaults = {"verify": VerifyConfig, "solve": SolveConfig, "spectrum": SpectrumConfig}
    try:
        cfg = _load_section(args.config, args.command, defaults[args.command]())
        if args.seed is not None:
            cfg.seed = args.seed
        if args.out is not None:
            cfg.out = args.out
        runner = {"verify": cmd_verify, "solve": cmd_solve, "spectrum": cmd_spectrum}
        return runner[args.command](cfg)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
