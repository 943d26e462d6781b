"""Command-line entry point: ``cgofaddeev <subcommand> [--config PATH] [--out DIR]
[--seed N] [--threads N]``."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import pipeline
from .config import ConfigError, RunConfig, load

SUBCOMMANDS = ("run", "admissible-map", "reconstruct", "oracle-dtn", "check-estimates", "selftest")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cgofaddeev", description=__doc__)
    p.add_argument("command", choices=SUBCOMMANDS)
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--out", help="output directory (overrides out_dir)")
    p.add_argument("--seed", type=int, help="seed for random test functions and bumps")
    p.add_argument("--threads", type=int, help="worker threads for per-lambda solves")
    return p


def resolve_config(args) -> RunConfig:
    cfg = load(args.config) if args.config else RunConfig()
    cfg = cfg.override(out_dir=args.out, seed=args.seed, threads=args.threads)
    if cfg.threads < 1:
        raise ConfigError("threads must be at least 1")
    return cfg


def oracle_dtn(cfg: RunConfig) -> int:
    from .conductivity import RADIAL_TWO_LAYER, make_model
    from .dtn import CORRECTED, LITERAL, boundary_relation_residual, dtn_operator, mode_traces
    from .geometry import circle_contour

    g, d = cfg.geometry, cfg.dtn
    model = make_model(RADIAL_TWO_LAYER, g.outer_center, g.outer_radius, g.outer_center,
                       d.jump_radius, d.gamma_in, 1.0)
    op = dtn_operator(model, max(d.n_max, int(max(d.n_boundary)) // 2))
    os.makedirs(cfg.out_dir, exist_ok=True)
    rows = [(n, op(n).real, op(n).imag) for n in range(-d.n_max, d.n_max + 1)]
    pipeline._write_csv(os.path.join(cfg.out_dir, "dtn_modes.csv"),
                        ["n", "re_lambda_n", "im_lambda_n"], rows)
    report = {}
    for nb in d.n_boundary:
        bnd = circle_contour(g.outer_center, g.outer_radius, int(nb))
        for form in (CORRECTED, LITERAL):
            res = [boundary_relation_residual(mode_traces(model, n, bnd), op, bnd, form)
                   for n in (-3, -1, 1, 2, 5)]
            report[f"{form}_n{int(nb)}"] = max(res)
    with open(os.path.join(cfg.out_dir, "dtn_report.json"), "w") as fh:
        json.dump(report, fh, indent=1, sort_keys=True)
    for k, v in sorted(report.items()):
        print(f"{k}: {v:.3e}")
    return pipeline.EXIT_OK


def check_estimates(cfg: RunConfig) -> int:
    from .probes import (
        kernel_norm_estimate,
        laplace_hy_ratio,
        weighted_decay_probe,
        random_box_function,
        random_bump,
    )

    T = cfg.probes.truncation
    box = (0.0, 1.0, 1.0, 2.0)
    support = (0j, 0.8)
    rows = []
    for seed in range(cfg.seed, cfg.seed + cfg.probes.family_size):
        rng = np.random.default_rng(seed)
        reports = [
            laplace_hy_ratio(random_box_function(seed, box), box, truncation=T, family_id=seed),
            kernel_norm_estimate(np.exp(2j * np.pi * rng.uniform())),
            weighted_decay_probe(random_bump(seed, support), support, -0.3, 0.1, -0.6,
                              truncation=T, family_id=seed),
        ]
        for r in reports:
            res = ";".join(f"{k}={v}" for k, v in sorted(r.resolution.items()))
            rows.append((r.probe_id, r.p, r.q, r.ratio, res, seed))
    os.makedirs(cfg.out_dir, exist_ok=True)
    path = os.path.join(cfg.out_dir, "estimates.csv")
    pipeline._write_csv(path, ["probe_id", "p", "q", "ratio", "resolution", "seed"], rows)
    with open(path) as fh:
        for row in csv.reader(fh):
            print(",".join(row))
    return pipeline.EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (ConfigError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return pipeline.EXIT_CONFIG
    if args.command == "run":
        return pipeline.run_pipeline(cfg)
    if args.command == "reconstruct":
        return pipeline.reconstruct_from_samples(cfg)
    if args.command == "admissible-map":
        print(pipeline.write_admissible_map(cfg))
        return pipeline.EXIT_OK
    if args.command == "oracle-dtn":
        return oracle_dtn(cfg)
    if args.command == "check-estimates":
        return check_estimates(cfg)
    from .selftest import run_selftest

    items = run_selftest(cfg, seed=cfg.seed)
    for it in items:
        print(it.line())
    return pipeline.EXIT_OK if all(it.passed for it in items) else pipeline.EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
