"""Invariant suite behind the ``selftest`` subcommand.

Every item reports its measured value next to its tolerance, so reduced
resolutions show how much margin is left instead of being skipped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .admissible import eval_AB, find_admissible
from .cgo_solver import SolverOptions, solve_mu
from .conductivity import RADIAL_TWO_LAYER, SMOOTH_BUMP, TRIVIAL, dirac_potential, make_model, transmission_matrix
from .config import RunConfig
from .dtn import boundary_relation_residual, dtn_operator, mode_traces, radial_dtn
from .geometry import AreaMesh, circle_contour, make_disk_geometry, polar_patch
from .operators import (
    CgoParameters,
    build_discretization,
    cauchy_projector,
    cauchy_projector_limit,
    solid_cauchy,
)
from .scattering import annulus_integral, scattering_boundary, scattering_interior

PROJECTOR_SIGN = "projector_sign"


@dataclass(frozen=True)
class SelftestItem:
    name: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.tol)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name}: value={self.value:.3e} tol={self.tol:.1e} margin={self.tol - self.value:.3e}"


def _solid_cauchy_item(rng):
    mesh = AreaMesh((polar_patch(0, 0.0, 0, 1.0, 32, 128),))
    zi = np.sqrt(rng.uniform(0, 0.9, 50)) * np.exp(2j * np.pi * rng.uniform(size=50))
    zo = rng.uniform(1.1, 2.0, 20) * np.exp(2j * np.pi * rng.uniform(size=20))
    one = np.ones(mesh.size)
    err = max(np.max(np.abs(solid_cauchy(one, zi, mesh) - np.conj(zi))),
              np.max(np.abs(solid_cauchy(one, zo, mesh) - 1 / zo)))
    return SelftestItem("solid_cauchy_disk", float(err), 2e-3)


def _projector_items(rng, mutations):
    circ = circle_contour(0, 1, 256)
    zi = np.sqrt(rng.uniform(0, 0.6, 20)) * np.exp(2j * np.pi * rng.uniform(size=20))
    sign = -1.0 if PROJECTOR_SIGN in mutations else 1.0
    err = 0.0
    for n in range(9):
        got = sign * cauchy_projector(circ.nodes**n, zi, circ)
        err = max(err, float(np.max(np.abs(got - zi**n))))
    # resolved random trace; the Nyquist mode is its own conjugate mode and
    # is split evenly between the two projectors
    k = np.arange(-32, 33)
    c = (rng.standard_normal(k.size) + 1j * rng.standard_normal(k.size)) / (1 + np.abs(k))
    f = np.exp(1j * np.outer(np.angle(circ.nodes), k)) @ c
    once = sign * cauchy_projector_limit(f, circ)
    twice = sign * cauchy_projector_limit(once, circ)
    idem = float(np.max(np.abs(twice - once)) / np.max(np.abs(once)))
    return [SelftestItem("projector_reproduces_polynomials", err, 1e-10),
            SelftestItem("projector_idempotence", idem, 1e-6)]


def _transmission_item(rng):
    alpha = rng.uniform(0.5, 2, 200) * np.exp(1j * rng.uniform(-1, 1, 200))
    nu = np.exp(2j * np.pi * rng.uniform(size=200))
    M = transmission_matrix(alpha, nu)
    b = nu
    left = np.zeros((200, 2, 2), dtype=complex)
    left[:, 0, 0], left[:, 0, 1] = (alpha - 1) * np.conj(b), (1 / alpha - 1) * (-1j * np.conj(b))
    left[:, 1, 0], left[:, 1, 1] = (alpha - 1) * b, (1 / alpha - 1) * (1j * b)
    right = np.zeros((200, 2, 2), dtype=complex)
    right[:, 0, 0], right[:, 0, 1] = b, np.conj(b)
    right[:, 1, 0], right[:, 1, 1] = 1j * b, -1j * np.conj(b)
    err = float(np.max(np.abs(M - 0.5 * left @ right)))
    return SelftestItem("transmission_factored_product", err, 1e-12)


def _annulus_item():
    from .scattering import annulus_nodes

    err = 0.0
    for R in (1.0, 7.5, 40.0):
        lam, _ = annulus_nodes(R, 8, 16)
        err = max(err, abs(annulus_integral(np.abs(lam) ** -2.0, R, 8, 16) - 2 * np.pi * np.log(2)))
    return SelftestItem("annulus_identity", float(err), 1e-10)


def _green_item(cfg: RunConfig):
    g = cfg.geometry
    model = make_model(SMOOTH_BUMP, gamma_in=1.02 + 0.01j, bumps=[(0.45, 0.5, 0.3 + 0.2j)])
    area = model.support_mesh(g.n_radial, g.n_angular)
    gam = circle_contour(-0.5, 0.2, g.n_contour)
    bnd = circle_contour(0, 1, g.n_boundary)
    disc = build_discretization(area, gam, bnd)
    pot = dirac_potential(model, area, gam)
    opts = SolverOptions(certify=False)
    worst = 0.0
    for lam in 4 * np.exp(2j * np.pi * np.arange(4) / 4):
        sol = solve_mu(CgoParameters(lam, 0.7, -0.6), pot, pot.alpha, disc, opts)
        hb = scattering_boundary(sol, bnd).h
        hi = scattering_interior(sol, pot, pot.alpha, disc).h
        worst = max(worst, abs(hb - hi) / abs(hb))
    return SelftestItem("green_consistency", float(worst), 1e-3)


def _dtn_items():
    triv = make_model(TRIVIAL)
    exact = max(abs(radial_dtn(triv, n) - abs(n)) for n in range(-32, 33))
    model = make_model(RADIAL_TWO_LAYER, jump_center=0, jump_radius=0.5, gamma_in=2 + 0.5j)
    dtn = dtn_operator(model, 64)
    bnd = circle_contour(0, 1, 128)
    res = max(boundary_relation_residual(mode_traces(model, n, bnd), dtn, bnd)
              for n in (-3, -1, 1, 2, 5))
    return [SelftestItem("dtn_trivial_modes", float(exact), 0.0),
            SelftestItem("dtn_mode_residual", float(res), 1e-6)]


def _admissible_item():
    geom = make_disk_geometry(n_radial=4, n_angular=16)
    A, B = eval_AB(0.7, -0.6, geom.boundary, geom.gamma)
    err = max(abs(A - 0.453), abs(B + 0.6))
    inside = find_admissible(-0.5, geom)
    return SelftestItem("admissible_worked_example", float(err if inside is None else np.inf), 2e-3)


def run_selftest(cfg: RunConfig | None = None, mutations=frozenset(), seed: int = 0):
    """All items, in a fixed order."""
    cfg = cfg or RunConfig()
    rng = np.random.default_rng(seed)
    items = [_solid_cauchy_item(rng), *_projector_items(rng, mutations),
             _transmission_item(rng), _annulus_item(), _green_item(cfg), *_dtn_items(),
             _admissible_item()]
    return items
