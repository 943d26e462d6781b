import csv
import json
import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cgofaddeev import cli
from cgofaddeev.config import ConfigError, GeometryConfig, ModelConfig, RunConfig, dumps, loads
from cgofaddeev.pipeline import (
    EXIT_CONFIG,
    EXIT_INFEASIBLE,
    EXIT_OK,
    EXIT_OSCILLATION,
    RECON_HEADER,
)
from cgofaddeev.selftest import PROJECTOR_SIGN, run_selftest

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def test_default_config_round_trips():
    cfg = RunConfig()
    assert loads(dumps(cfg)) == cfg


@settings(max_examples=50, deadline=None)
@given(finite, finite, finite, st.integers(0, 2**31), st.lists(st.floats(0.1, 1e3), min_size=1, max_size=4))
def test_round_trip_is_lossless(re, im, r, seed, ladder):
    cfg = RunConfig(
        geometry=GeometryConfig(outer_center=complex(re, im), outer_radius=r),
        model=ModelConfig(bumps=((complex(im, re), abs(r), complex(re, -im)),)),
        seed=seed,
    )
    cfg = cfg.override(threads=3)
    from dataclasses import replace
    cfg = replace(cfg, annulus=replace(cfg.annulus, R_ladder=tuple(ladder)))
    assert loads(dumps(cfg)) == cfg


def test_parse_errors():
    with pytest.raises(ConfigError):
        loads("geometry.nope = 1")
    with pytest.raises(ConfigError):
        loads("bogus.key = 1")
    with pytest.raises(ConfigError):
        loads("just text")
    with pytest.raises(ConfigError):
        loads("solver.certify = maybe")
    cfg = loads("# comment\nsolver.tol = 1e-8  # trailing\n")
    assert cfg.solver.tol == 1e-8


def test_random_bumps_follow_the_seed():
    a, b = RunConfig(seed=1).bumps(), RunConfig(seed=1).bumps()
    assert a == b and a != RunConfig(seed=2).bumps()


def _write(tmp_path, text):
    p = tmp_path / "run.cfg"
    p.write_text(text)
    return str(p)


def test_trivial_run_reconstructs_zero_and_is_reproducible(tmp_path):
    cfg = _write(tmp_path, "model.kind = trivial\nannulus.R_ladder = 4.0\ngeometry.n_boundary = 256\n")
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert cli.main(["run", "--config", cfg, "--out", str(out)]) == EXIT_OK
        outs.append(out)
    with open(outs[0] / "reconstruction.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == RECON_HEADER
    assert float(rows[1][-1]) == 0.0
    # config.txt differs only in the recorded out_dir
    for f in sorted(os.listdir(outs[0])):
        a, b = ((o / f).read_text().splitlines() for o in outs)
        if f == "config.txt":
            a = [l for l in a if not l.startswith("out_dir")]
            b = [l for l in b if not l.startswith("out_dir")]
        assert a == b, f
    cert = json.loads((outs[0] / "certificate.json").read_text())
    assert cert["proper"] is True
    assert cli.main(["reconstruct", "--config", cfg, "--out", str(outs[0])]) == EXIT_OK


def test_exit_codes(tmp_path, capsys):
    inf = _write(tmp_path, "model.kind = trivial\npoint.w = (-0.5+0.1j)\n")
    assert cli.main(["run", "--config", inf, "--out", str(tmp_path / "i")]) == EXIT_INFEASIBLE
    osc = _write(tmp_path, "model.kind = trivial\nannulus.R_ladder = 4.0,400.0\n")
    assert cli.main(["run", "--config", osc, "--out", str(tmp_path / "o")]) == EXIT_OSCILLATION
    bad = _write(tmp_path, "geometry.jump_radius = 2.0\nmodel.kind = trivial\n")
    assert cli.main(["run", "--config", bad, "--out", str(tmp_path / "b")]) == EXIT_CONFIG
    assert cli.main(["run", "--config", str(tmp_path / "missing.cfg")]) == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "infeasible point" in err and "oscillation guard" in err


def test_admissible_map_and_dtn_outputs(tmp_path):
    cfg = _write(tmp_path, "map.nx = 5\nmap.ny = 5\npoint.n_angles = 90\n")
    assert cli.main(["admissible-map", "--config", cfg, "--out", str(tmp_path)]) == EXIT_OK
    with open(tmp_path / "admissible_map.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x", "y", "admissible", "proper", "re_lambda_O", "im_lambda_O", "A", "B"]
    assert len(rows) == 26
    assert cli.main(["oracle-dtn", "--out", str(tmp_path)]) == EXIT_OK
    with open(tmp_path / "dtn_modes.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["n", "re_lambda_n", "im_lambda_n"] and len(rows) == 66
    report = json.loads((tmp_path / "dtn_report.json").read_text())
    assert report["corrected_n128"] < 1e-6 and report["literal_n128"] > 0.1


def test_check_estimates_rows(tmp_path):
    cfg = _write(tmp_path, "probes.truncation = 16.0\nprobes.family_size = 1\n")
    assert cli.main(["check-estimates", "--config", cfg, "--out", str(tmp_path), "--seed", "4"]) == EXIT_OK
    with open(tmp_path / "estimates.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["probe_id", "p", "q", "ratio", "resolution", "seed"]
    assert [r[0] for r in rows[1:]] == ["laplace-hy", "kernel-norm", "weighted-decay"]
    assert all(np.isfinite(float(r[3])) and r[5] == "4" for r in rows[1:])


def test_selftest_passes_and_detects_projector_mutation():
    cfg = loads("geometry.n_radial = 16\ngeometry.n_angular = 64\ngeometry.n_contour = 64\n"
                "geometry.n_boundary = 256\n")
    items = run_selftest(cfg)
    assert all(it.passed for it in items), [it.line() for it in items if not it.passed]
    broken = {it.name: it.passed for it in run_selftest(cfg, mutations={PROJECTOR_SIGN})}
    assert not broken["projector_idempotence"]
    assert broken["annulus_identity"]
