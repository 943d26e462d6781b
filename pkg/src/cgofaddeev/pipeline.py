"""End-to-end orchestration with file outputs and exit codes."""

from __future__ import annotations

import csv
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .admissible import AdmissibleCertificate, certificate, eval_AB, find_admissible
from .cgo_solver import SolverError, SolverOptions, solve_mu
from .conductivity import RADIAL_TWO_LAYER, TRIVIAL, ModelError, dirac_potential, make_model
from .config import ConfigError, RunConfig, dumps
from .geometry import AreaMesh, DiskGeometry, GeometryError, circle_contour
from .operators import (
    CgoParameters,
    OscillationError,
    build_discretization,
    oscillation_cap,
)
from .scattering import (
    ReconstructionConfig,
    ScatteringSample,
    annulus_nodes,
    reconstruct_q21,
    scattering_boundary,
    scattering_interior,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_NONCONVERGENCE = 4
EXIT_OSCILLATION = 5

SAMPLE_HEADER = ["re_lambda", "im_lambda", "re_h", "im_h"]
RECON_HEADER = ["R", "re_q21_hat", "im_q21_hat", "re_q21_true", "im_q21_true", "abs_error"]
FIELD_HEADER = ["x", "y", "re_mu1", "im_mu1", "re_mu2", "im_mu2"]


class InfeasiblePoint(RuntimeError):
    pass


@dataclass
class Setup:
    model: object
    geometry: DiskGeometry
    potential: object
    disc: object


def build_setup(cfg: RunConfig) -> Setup:
    g, m = cfg.geometry, cfg.model
    if m.kind == TRIVIAL:
        model = make_model(TRIVIAL, g.outer_center, g.outer_radius, g.jump_center, g.jump_radius)
    elif m.kind == RADIAL_TWO_LAYER:
        model = make_model(RADIAL_TWO_LAYER, g.outer_center, g.outer_radius, g.jump_center,
                           g.jump_radius, m.gamma_in, m.gamma_out)
    else:
        model = make_model(m.kind, g.outer_center, g.outer_radius, g.jump_center,
                           g.jump_radius, m.gamma_in, m.gamma_out, cfg.bumps())
    area = model.support_mesh(g.n_radial, g.n_angular)
    gam = circle_contour(g.jump_center, g.jump_radius, g.n_contour)
    bnd = circle_contour(g.outer_center, g.outer_radius, g.n_boundary)
    geom = DiskGeometry(complex(g.outer_center), float(g.outer_radius),
                        complex(g.jump_center), float(g.jump_radius), area, gam, bnd)
    pot = dirac_potential(model, area, gam)
    return Setup(model, geom, pot, build_discretization(area, gam, bnd))


def admissible_certificate(cfg: RunConfig, geom: DiskGeometry) -> AdmissibleCertificate:
    """Search (``point.lambda_O = auto``) or check an override; raises
    :class:`InfeasiblePoint` unless the certificate is proper."""
    w = complex(cfg.point.w)
    if cfg.point.lambda_O.strip().lower() == "auto":
        cert = find_admissible(w, geom, cfg.point.n_angles)
        if cert is None:
            raise InfeasiblePoint(f"no admissible lambda_O at w = {w}")
    else:
        lam = complex(cfg.point.lambda_O.replace(" ", ""))
        if geom.in_closed_d(w) or not geom.in_o(w):
            raise InfeasiblePoint(f"w = {w} lies in the closed jump disk or outside O")
        cert = certificate(w, lam, *eval_AB(w, lam, geom.boundary, geom.gamma))
        if not cert.admissible:
            raise InfeasiblePoint(f"lambda_O = {lam} is not admissible at w = {w}")
    if not cert.proper:
        raise InfeasiblePoint(f"certificate at w = {w} is admissible but not proper")
    return cert


def check_ladder(cfg: RunConfig, setup: Setup) -> float:
    """Raise OscillationError when the outer annulus radius 2R exceeds the mesh cap."""
    geom = setup.geometry
    cap = oscillation_cap(complex(cfg.point.w), geom.area, (geom.gamma, geom.boundary))
    top = 2 * max(cfg.annulus.R_ladder)
    if top > cap:
        raise OscillationError(f"ladder reaches |lambda| = {top:g} beyond the mesh cap {cap:.3g}")
    low = min(cfg.annulus.R_ladder)
    if cfg.solver.R_cut > 0 and low <= cfg.solver.R_cut:
        raise ConfigError(f"annulus radius {low:g} does not exceed R_cut = {cfg.solver.R_cut:g}")
    return cap


def solve_annulus(cfg: RunConfig, setup: Setup, lambda_O: complex, R: float):
    """Solve at every annulus node; returns (boundary samples, interior samples, solutions)."""
    lam, _ = annulus_nodes(R, cfg.annulus.n_radial, cfg.annulus.n_angular)
    s = cfg.solver
    opts = SolverOptions(s.method, s.tol, s.max_iter, s.certify)
    base = CgoParameters(lam[0], complex(cfg.point.w), lambda_O, s.R_cut)
    pot, jump = setup.potential, setup.potential.alpha

    def one(L):
        sol = solve_mu(base.with_lambda(L), pot, jump, setup.disc, opts)
        return (sol, scattering_boundary(sol, setup.disc.boundary),
                scattering_interior(sol, pot, jump, setup.disc))

    if cfg.threads > 1:
        with ThreadPoolExecutor(cfg.threads) as ex:
            out = list(ex.map(one, lam))
    else:
        out = [one(L) for L in lam]
    return [o[1] for o in out], [o[2] for o in out], [o[0] for o in out]


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(header)
        for r in rows:
            wr.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])


def _sample_path(out_dir, R):
    return os.path.join(out_dir, f"samples_R{R:g}.csv")


def write_samples(path, samples):
    _write_csv(path, SAMPLE_HEADER,
               [(s.lam.real, s.lam.imag, s.h.real, s.h.imag) for s in samples])


def read_samples(path, form="boundary"):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [ScatteringSample(complex(float(r["re_lambda"]), float(r["im_lambda"])),
                             complex(float(r["re_h"]), float(r["im_h"])), form) for r in rows]


def _reconstruction_rows(cfg, lambda_O, q_true, samples_by_R):
    rows = []
    for R in cfg.annulus.R_ladder:
        rc = ReconstructionConfig(R, cfg.annulus.n_radial, cfg.annulus.n_angular,
                                  tuple(cfg.annulus.R_ladder))
        q = reconstruct_q21(samples_by_R[R], lambda_O, rc, cfg.annulus.normalization)
        rows.append((float(R), q.real, q.imag, q_true.real, q_true.imag, abs(q - q_true)))
    return rows


def run_pipeline(cfg: RunConfig, log=None) -> int:
    """Geometry, model, certificate, per-lambda solves, both scattering forms and
    the reconstruction ladder. Writes config.txt, certificate.json,
    samples_R*.csv, reconstruction.csv and report.json into ``cfg.out_dir``."""
    log = log or sys.stderr
    os.makedirs(cfg.out_dir, exist_ok=True)
    with open(os.path.join(cfg.out_dir, "config.txt"), "w") as fh:
        fh.write(dumps(cfg))
    try:
        setup = build_setup(cfg)
        cert = admissible_certificate(cfg, setup.geometry)
        with open(os.path.join(cfg.out_dir, "certificate.json"), "w") as fh:
            fh.write(cert.to_json() + "\n")
        cap = check_ladder(cfg, setup)
        report = {"certificate": json.loads(cert.to_json()), "oscillation_cap": cap, "ladder": []}
        samples_by_R = {}
        for R in cfg.annulus.R_ladder:
            t0 = time.perf_counter()
            hb, hi, sols = solve_annulus(cfg, setup, cert.lambda_O, R)
            samples_by_R[R] = hb
            if cfg.output.dump_samples:
                write_samples(_sample_path(cfg.out_dir, R), hb)
            if cfg.output.dump_fields:
                s0 = sols[0]
                _write_csv(os.path.join(cfg.out_dir, f"fields_R{R:g}.csv"), FIELD_HEADER,
                           [(z.real, z.imag, a.real, a.imag, b.real, b.imag)
                            for z, a, b in zip(s0.nodes, s0.mu.first, s0.mu.second)])
            green = max(abs(a.h - b.h) / max(abs(a.h), 1e-300) for a, b in zip(hb, hi))
            report["ladder"].append({
                "R": R, "samples": len(hb),
                "max_residual": max(s.residual for s in sols),
                "max_certificate": max(s.certificate for s in sols),
                "max_iterations": max(s.iterations for s in sols),
                "green_max_relative_gap": green})
            print(f"R = {R:g}: {len(hb)} solves in {time.perf_counter() - t0:.1f} s", file=log)
        q_true = complex(setup.model.q21(complex(cfg.point.w))) + 0.0
        rows = _reconstruction_rows(cfg, cert.lambda_O, q_true, samples_by_R)
        _write_csv(os.path.join(cfg.out_dir, "reconstruction.csv"), RECON_HEADER, rows)
        report["abs_error"] = [r[-1] for r in rows]
        with open(os.path.join(cfg.out_dir, "report.json"), "w") as fh:
            json.dump(report, fh, indent=1, sort_keys=True)
    except InfeasiblePoint as exc:
        print(f"infeasible point: {exc}", file=log)
        return EXIT_INFEASIBLE
    except OscillationError as exc:
        print(f"oscillation guard: {exc}", file=log)
        return EXIT_OSCILLATION
    except SolverError as exc:
        print(f"solver failure: {exc} (residual {exc.residual:.3e})", file=log)
        return EXIT_NONCONVERGENCE
    except (ConfigError, ModelError, GeometryError) as exc:
        print(f"configuration error: {exc}", file=log)
        return EXIT_CONFIG
    return EXIT_OK


def reconstruct_from_samples(cfg: RunConfig, log=None) -> int:
    """Rebuild reconstruction.csv from stored samples; solves only for missing radii."""
    log = log or sys.stderr
    missing = [R for R in cfg.annulus.R_ladder
               if not os.path.exists(_sample_path(cfg.out_dir, R))]
    if missing:
        return run_pipeline(cfg, log)
    try:
        setup = build_setup(cfg)
        path = os.path.join(cfg.out_dir, "certificate.json")
        if os.path.exists(path):
            with open(path) as fh:
                cert = AdmissibleCertificate.from_json(fh.read())
        else:
            cert = admissible_certificate(cfg, setup.geometry)
    except InfeasiblePoint as exc:
        print(f"infeasible point: {exc}", file=log)
        return EXIT_INFEASIBLE
    except (ConfigError, ModelError, GeometryError) as exc:
        print(f"configuration error: {exc}", file=log)
        return EXIT_CONFIG
    samples = {R: read_samples(_sample_path(cfg.out_dir, R)) for R in cfg.annulus.R_ladder}
    q_true = complex(setup.model.q21(complex(cfg.point.w))) + 0.0
    rows = _reconstruction_rows(cfg, cert.lambda_O, q_true, samples)
    _write_csv(os.path.join(cfg.out_dir, "reconstruction.csv"), RECON_HEADER, rows)
    return EXIT_OK


def write_admissible_map(cfg: RunConfig) -> str:
    from .admissible import admissibility_map

    g = cfg.geometry
    geom = DiskGeometry(complex(g.outer_center), float(g.outer_radius), complex(g.jump_center),
                        float(g.jump_radius), AreaMesh(()),
                        circle_contour(g.jump_center, g.jump_radius, g.n_contour),
                        circle_contour(g.outer_center, g.outer_radius, g.n_boundary))
    c, r = complex(g.outer_center), float(g.outer_radius)
    xs = np.linspace(c.real - r, c.real + r, cfg.map.nx)
    ys = np.linspace(c.imag - r, c.imag + r, cfg.map.ny)
    rows = admissibility_map(geom, xs, ys, cfg.point.n_angles)
    os.makedirs(cfg.out_dir, exist_ok=True)
    path = os.path.join(cfg.out_dir, "admissible_map.csv")
    _write_csv(path, ["x", "y", "admissible", "proper", "re_lambda_O", "im_lambda_O", "A", "B"],
               rows)
    return path
