"""Scattering data, the operator T, the stationary-phase probe and the
pointwise reconstruction of q21 from an annulus of spectral parameters."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cgo_solver import CgoSolution
from .conductivity import DiracPotential, JumpTrace
from .geometry import OUTSIDE_D, ContourMesh, polar_patch
from .operators import CgoParameters, Discretization, apply_Atilde, half_phase

BOUNDARY = "boundary"
INTERIOR = "interior"
LITERAL = "literal"
GREEN = "green"


@dataclass(frozen=True)
class ScatteringSample:
    lam: complex
    h: complex
    form: str


@dataclass(frozen=True)
class ReconstructionConfig:
    R_annulus: float
    n_radial: int = 8
    n_angular: int = 16
    R_ladder: tuple = ()

    def __post_init__(self):
        if self.R_annulus <= 0:
            raise ValueError("annulus radius must be positive")
        if self.n_radial < 8 or self.n_angular < 8:
            raise ValueError("annulus sample counts must be at least 8")

    def at(self, R: float) -> "ReconstructionConfig":
        return ReconstructionConfig(R, self.n_radial, self.n_angular, self.R_ladder)


def _scattering_wave_conj(params: CgoParameters, z) -> np.ndarray:
    """conj(exp(ln|lambda| * lambda_s * (z - w)^2))."""
    return np.conj(np.exp(np.log(abs(params.lam)) * params.lambda_s
                          * (np.asarray(z, dtype=complex) - params.w) ** 2))


def scattering_boundary(solution: CgoSolution, boundary: ContourMesh) -> ScatteringSample:
    """Trapezoid rule for the boundary integral of conj(U_s) mu2 dzbar."""
    p = solution.params
    h = np.sum(_scattering_wave_conj(p, boundary.nodes) * solution.mu_boundary.second
               * boundary.dzbar)
    return ScatteringSample(p.lam, complex(h), BOUNDARY)


def scattering_interior(solution: CgoSolution, potential: DiracPotential,
                        jump: JumpTrace | None, disc: Discretization) -> ScatteringSample:
    """Green form of the scattering datum: contour term on the exterior side of
    the jump contour plus an area term over O minus D.

    The exterior trace is mu2+ = mu2- + (A mu-)_2, and the area term is
    -2i * integral of conj(U_s) exp(+i Phi) q21 mu1, the sign and factor that
    Green's theorem with dzbar gives for d(mu2) = q21 exp(i Phi) mu1.
    """
    p = solution.params
    gam = disc.gamma
    mu2 = solution.mu_gamma.second
    if jump is not None:
        mu2 = mu2 + apply_Atilde(p, jump, gam, solution.mu_gamma).second
    contour = np.sum(_scattering_wave_conj(p, gam.nodes) * mu2 * gam.dzbar)
    area = disc.area
    outside = area.region_tags == OUTSIDE_D
    z = area.nodes[outside]
    dens = (_scattering_wave_conj(p, z) * np.exp(1j * half_phase(p, z))
            * potential.q21[outside] * solution.mu.first[outside])
    h = contour - 2j * np.sum(area.weights[outside] * dens)
    return ScatteringSample(p.lam, complex(h), INTERIOR)


def apply_T(G, params: CgoParameters, potential: DiracPotential) -> complex:
    """T[G] = integral over O minus D of conj(U_s) exp(-i Phi) q21 G."""
    mesh = potential.mesh
    outside = mesh.region_tags == OUTSIDE_D
    z = mesh.nodes[outside]
    G = np.broadcast_to(np.asarray(G, dtype=complex), mesh.nodes.shape)[outside]
    dens = (_scattering_wave_conj(params, z) * np.exp(-1j * half_phase(params, z))
            * potential.q21[outside] * G)
    return complex(np.sum(mesh.weights[outside] * dens))


def stationary_phase_probe(phi, w: complex, lambda_ladder, support: tuple,
                           n_radial: int = 200, n_angular: int = 600,
                           direction: float = 0.0):
    """Normalized oscillatory integrals |lambda| * I(lambda) / (2 pi) with
    I = integral of exp(-i Im(lambda (z-w)^2) + ln|lambda| (z-w)^2) phi(z).

    ``phi`` is a callable supported in the disk ``support = (center, radius)``
    which must contain ``w``; the grid is polar around ``w`` so the critical
    point sits at the pole.
    """
    c, r = complex(support[0]), float(support[1])
    if abs(w - c) >= r:
        raise ValueError("w must lie inside the support disk")
    if (abs(w - c) + r) ** 2 >= 1:
        raise ValueError("sup of Re(z - w)^2 over the support must be below 1")
    patch = polar_patch(w, 0.0, c, r, n_radial, n_angular)
    z, wt = patch.nodes, patch.weights
    u = z - w
    vals = phi(z)
    out = []
    for L in lambda_ladder:
        lam = abs(L) * np.exp(1j * direction)
        integrand = np.exp(-1j * np.imag(lam * u**2) + np.log(abs(lam)) * u**2) * vals
        I = np.sum(wt * integrand)
        out.append((abs(lam), abs(lam) * I / (2 * np.pi)))
    return out


def annulus_nodes(R: float, n_radial: int, n_angular: int):
    """Gauss-Legendre in |lambda| on (R, 2R), trapezoid in arg lambda.

    Returns lambda values ordered by (|lambda|, arg) and area weights.
    """
    x, wx = np.polynomial.legendre.leggauss(n_radial)
    r = R * (1.5 + 0.5 * x)
    wr = wx * R / 2
    th = 2 * np.pi * np.arange(n_angular) / n_angular
    lam = (r[:, None] * np.exp(1j * th[None, :])).ravel()
    wts = (wr[:, None] * r[:, None] * np.full((1, n_angular), 2 * np.pi / n_angular)).ravel()
    return lam, wts


def annulus_integral(values, R: float, n_radial: int, n_angular: int) -> complex:
    """Quadrature of ``values`` (sampled at :func:`annulus_nodes`) over the annulus."""
    _, wts = annulus_nodes(R, n_radial, n_angular)
    return complex(np.sum(wts * np.asarray(values)))


def reconstruct_q21(samples, lambda_s: complex, config: ReconstructionConfig,
                    normalization: str = LITERAL) -> complex:
    """Annulus average of h(lambda) / |lambda|.

    ``literal`` scales by lambda_s / (4 pi^2 ln 2); ``green`` by i / (8 pi^2 ln 2),
    the constant that matches the leading term of the Green-form datum.
    """
    lam, wts = annulus_nodes(config.R_annulus, config.n_radial, config.n_angular)
    samples = list(samples)
    if len(samples) != lam.size:
        raise ValueError(f"need {lam.size} annulus samples, got {len(samples)}")
    got = np.array([s.lam for s in samples])
    match = np.argmin(np.abs(lam[:, None] - got[None, :]), axis=1)
    if (np.unique(match).size != lam.size
            or np.max(np.abs(got[match] - lam)) > 1e-9 * config.R_annulus):
        raise ValueError("samples do not cover the annulus quadrature nodes")
    # accumulate in the fixed node order (|lambda| major, arg minor)
    h = np.array([samples[i].h for i in match])
    total = complex(np.sum(wts * h / np.abs(lam)))
    if normalization == LITERAL:
        return lambda_s * total / (4 * np.pi**2 * np.log(2))
    if normalization == GREEN:
        return 1j * total / (8 * np.pi**2 * np.log(2))
    raise ValueError(f"unknown normalization {normalization!r}")
