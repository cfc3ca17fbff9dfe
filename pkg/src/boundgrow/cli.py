"""Command-line front end: grow models, compute statistics, run verification.

Exit codes are a stable contract: 0 success, 1 verification failure,
2 usage/config error, 3 generation/runtime error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
import time

import numpy as np

from . import analytics, kernels
from .engine import ConfigError, GenerationError, GrowthConfig, StepTrace, parse_probability, run
from .graph import NetworkModel
from .seeds import SeedError
from .verify import run_full_verification

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


class FileFormatError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boundgrow",
        description="Generate and verify bound-edge growing network models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_grow = sub.add_parser("grow", help="generate a model and export its artifacts")
    _add_config_options(p_grow)
    p_grow.add_argument("--out", default="boundgrow-out", help="output directory")
    p_grow.add_argument(
        "--sweep",
        metavar="PR:PA[,PR:PA...]",
        help="run a (p_r, p_a) sweep (randomized mode) with derived rng seeds",
    )
    p_grow.set_defaults(func=cmd_grow)

    p_stats = sub.add_parser("stats", help="measure statistics on exported files")
    p_stats.add_argument("edges", help="edge-list file (one 'u v' pair per line)")
    p_stats.add_argument("--provenance", help="provenance CSV from grow")
    p_stats.add_argument("--trace", help="trace CSV from grow")
    p_stats.add_argument("--out", default="boundgrow-out", help="output directory")
    p_stats.add_argument("--format", choices=("text", "json"), default="text")
    p_stats.add_argument("--backend", choices=("numba", "numpy"), default=None)
    p_stats.set_defaults(func=cmd_stats)

    p_verify = sub.add_parser("verify", help="generate and check every closed form")
    _add_config_options(p_verify)
    p_verify.add_argument("--out", default="boundgrow-out", help="output directory")
    p_verify.add_argument(
        "--negative-controls",
        action="store_true",
        help="also wire in the broken count recursions (these checks must fail)",
    )
    p_verify.add_argument("--backend", choices=("numba", "numpy"), default=None)
    p_verify.set_defaults(func=cmd_verify)
    return parser


def _add_config_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="JSON config document")
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--r", type=int, default=None, dest="r")
    p.add_argument("--mode", choices=("deterministic", "randomized", "rewire"), default=None)
    p.add_argument("--pr", default=None, help="removal probability (number or 'a/b')")
    p.add_argument("--pa", default=None, help="addition probability (number or 'a/b')")
    p.add_argument("--pw", default=None, help="rewire fraction (number or 'a/b')")
    p.add_argument("--rng-seed", type=int, default=None)
    p.add_argument(
        "--policy",
        choices=("by_bound_order", "by_descending_degree", "uniform_random"),
        default=None,
        help="bound-vertex selection policy",
    )
    p.add_argument("--assignment", choices=("round_robin", "uniform_random"), default=None)
    p.add_argument("--allow-big", action="store_true",
                   help="lift the int64 edge-count cap on generation")
    p.add_argument("--format", choices=("text", "json"), default="text")


def load_config(args) -> GrowthConfig:
    """Config document plus flag overrides (flags win)."""
    with open(args.config) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: {args.config} is not valid JSON: {exc}") from exc
    if args.steps is not None:
        doc["steps"] = args.steps
    if args.r is not None:
        doc["r"] = args.r
    if args.mode is not None:
        doc["mode"] = args.mode
    if args.pr is not None:
        doc["p_r"] = args.pr
    if args.pa is not None:
        doc["p_a"] = args.pa
    if args.pw is not None:
        doc["p_w"] = args.pw
    if args.rng_seed is not None:
        doc["rng_seed"] = args.rng_seed
    if args.policy is not None:
        doc["selection_policy"] = args.policy
    if args.assignment is not None:
        doc["assignment_policy"] = args.assignment
    config = GrowthConfig.from_dict(doc, allow_big=args.allow_big)
    config.validate()
    return config


def write_run_outputs(model: NetworkModel, trace: StepTrace, out_dir: str) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    files = []
    for name, writer in (
        ("edges.txt", model.write_edge_list),
        ("bound_edges.txt", model.write_bound_edge_list),
        ("provenance.csv", model.write_provenance_csv),
    ):
        path = os.path.join(out_dir, name)
        writer(path)
        files.append(path)
    path = os.path.join(out_dir, "trace.csv")
    trace.write_csv(path)
    files.append(path)
    return files


def _write_manifest(out_dir: str, config: GrowthConfig, files: list[str], started: float) -> str:
    manifest = {
        "config": config.to_dict(),
        "files": sorted(os.path.relpath(f, out_dir) for f in files),
        "duration_s": round(time.monotonic() - started, 6),
    }
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _run_one(config: GrowthConfig, out_dir: str) -> list[str]:
    model, trace = run(config)
    return write_run_outputs(model, trace, out_dir)


def cmd_grow(args) -> int:
    started = time.monotonic()
    config = load_config(args)
    os.makedirs(args.out, exist_ok=True)
    files: list[str] = []
    if args.sweep:
        if config.mode != "randomized":
            raise ConfigError("--sweep requires randomized mode")
        pairs = _parse_sweep(args.sweep)
        children = np.random.SeedSequence(config.rng_seed).spawn(len(pairs))
        jobs = []
        for (p_r, p_a), child in zip(pairs, children):
            sub = GrowthConfig(
                initial=config.initial,
                seed_set=config.seed_set,
                r=config.r,
                mode="randomized",
                steps=config.steps,
                rng_seed=int(child.generate_state(1, dtype=np.uint64)[0]),
                p_r=p_r,
                p_a=p_a,
                selection_policy=config.selection_policy,
                allow_big=config.allow_big,
            )
            sub.validate()
            jobs.append((sub, os.path.join(args.out, f"pr{p_r}_pa{p_a}".replace("/", "-"))))
        workers = min(len(jobs), os.cpu_count() or 1)
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            for got in pool.map(lambda j: _run_one(*j), jobs):
                files.extend(got)
    else:
        files.extend(_run_one(config, args.out))
    manifest = _write_manifest(args.out, config, files, started)
    print(f"wrote {len(files)} files; manifest: {manifest}")
    return EXIT_OK


def _parse_sweep(text: str) -> list[tuple]:
    pairs = []
    for item in text.split(","):
        bits = item.split(":")
        if len(bits) != 2:
            raise ConfigError(f"--sweep: expected PR:PA entries, got {item!r}")
        pairs.append(
            (parse_probability(bits[0], "sweep p_r"), parse_probability(bits[1], "sweep p_a"))
        )
    if not pairs:
        raise ConfigError("--sweep: no pairs given")
    return pairs


def read_edge_list(path) -> tuple[np.ndarray, np.ndarray]:
    us, vs = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            parts = text.split()
            if len(parts) != 2:
                raise FileFormatError(f"{path}: line {lineno}: expected 'u v'")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise FileFormatError(f"{path}: line {lineno}: non-integer vertex id") from exc
            if u >= v or u < 0:
                raise FileFormatError(f"{path}: line {lineno}: need 0 <= u < v")
            us.append(u)
            vs.append(v)
    return np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64)


def read_provenance_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    births, bends, sdegs = [], [], []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "vertex,birth_step,is_bound_end,seed_degree":
            raise FileFormatError(f"{path}: line 1: unexpected header {header!r}")
        for lineno, line in enumerate(fh, start=2):
            parts = line.strip().split(",")
            if len(parts) != 4:
                raise FileFormatError(f"{path}: line {lineno}: expected 4 columns")
            try:
                vid, birth, bend, sdeg = (int(x) for x in parts)
            except ValueError as exc:
                raise FileFormatError(f"{path}: line {lineno}: non-integer field") from exc
            if vid != len(births):
                raise FileFormatError(f"{path}: line {lineno}: vertex ids must be dense")
            births.append(birth)
            bends.append(bend)
            sdegs.append(sdeg)
    return (
        np.asarray(births, dtype=np.int64),
        np.asarray(bends, dtype=bool),
        np.asarray(sdegs, dtype=np.int64),
    )


def cmd_stats(args) -> int:
    started = time.monotonic()
    eu, ev = read_edge_list(args.edges)
    if args.provenance:
        births, bends, _ = read_provenance_csv(args.provenance)
        n = births.size
        if eu.size and int(ev.max()) >= n:
            raise FileFormatError(f"{args.edges}: edge references vertex beyond provenance")
        codes = np.full(n, analytics.CLASS_UNSELECTED, dtype=np.int8)
        codes[bends] = analytics.CLASS_BOUND
        codes[births == 0] = analytics.CLASS_INITIAL
    else:
        n = int(ev.max()) + 1 if eu.size else 0
        births = np.zeros(n, dtype=np.int64)
        codes = np.full(n, analytics.CLASS_UNSELECTED, dtype=np.int8)
    degrees = np.bincount(np.concatenate([eu, ev]), minlength=n)
    census = analytics.DegreeCensus(degrees=degrees, class_codes=codes, birth_steps=births)

    os.makedirs(args.out, exist_ok=True)
    files = []
    path = os.path.join(args.out, "census.csv")
    census.write_census_csv(path)
    files.append(path)
    path = os.path.join(args.out, "thresholds.csv")
    analytics.write_threshold_csv(census, path)
    files.append(path)
    if args.provenance:
        path = os.path.join(args.out, "vertices.csv")
        census.write_vertex_csv(path)
        files.append(path)
    if args.trace:
        trace = StepTrace.read_csv(args.trace)
        path = os.path.join(args.out, "ecum.csv")
        analytics.write_ecum_csv(trace, path)
        files.append(path)

    indptr, indices = kernels.build_csr(n, eu, ev)
    ecc, connected = kernels.all_eccentricities(indptr, indices, backend=args.backend)
    diameter = int(ecc.max()) if (connected and n) else None
    summary = {
        "n_vertices": int(n),
        "n_edges": int(eu.size),
        "handshake": int(degrees.sum()),
        "max_degree": int(degrees.max()) if n else 0,
        "connected": bool(connected and n),
        "diameter": diameter,
        "files": sorted(os.path.relpath(f, args.out) for f in files),
        "duration_s": round(time.monotonic() - started, 6),
    }
    with open(os.path.join(args.out, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if args.format == "json":
        print(json.dumps(summary, indent=2, sort_keys=True))
    else:
        for key in ("n_vertices", "n_edges", "handshake", "max_degree", "connected", "diameter"):
            print(f"{key}: {summary[key]}")
    return EXIT_OK


def cmd_verify(args) -> int:
    config = load_config(args)
    model, trace, report = run_full_verification(
        config, negative_controls=args.negative_controls, backend=args.backend
    )
    os.makedirs(args.out, exist_ok=True)
    trace.write_csv(os.path.join(args.out, "trace.csv"))
    report.write_text(os.path.join(args.out, "report.txt"))
    report.write_json(os.path.join(args.out, "report.json"))
    if args.format == "json":
        print(json.dumps(report.to_json_obj(), indent=2, sort_keys=True))
    else:
        print(report.to_text(), end="")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, SeedError, FileFormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GenerationError as exc:
        print(f"generation error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
