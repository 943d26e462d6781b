"""Dirichlet-to-Neumann bridge on a circular boundary.

The DtN map of a radial piecewise-constant conductivity is diagonal in
Fourier modes; the boundary relation between Dirac traces and the DtN map is
then a mode-space computation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conductivity import RADIAL_TWO_LAYER, TRIVIAL, ConductivityModel
from .geometry import POSITIVE, ContourMesh, orient
from .operators import CgoParameters, periodic_derivative_matrix

CORRECTED = "corrected"
LITERAL = "literal"


@dataclass(frozen=True)
class DtnOperator:
    """Co-normal DtN eigenvalues on a circle of ``radius``; ``gamma_boundary``
    is the conductivity value at the boundary."""

    eigenvalues: dict
    radius: float
    gamma_boundary: complex = 1.0

    def __call__(self, n: int) -> complex:
        return self.eigenvalues[int(n)]


@dataclass(frozen=True)
class BoundaryTracePair:
    h1: np.ndarray
    h2: np.ndarray


def _radial_params(model: ConductivityModel):
    if model.kind not in (RADIAL_TWO_LAYER, TRIVIAL) or model.bumps:
        raise ValueError("radial_dtn needs a piecewise-constant radial model")
    if model.kind == TRIVIAL:
        # gamma = 1: the jump contour is invisible
        return 1.0 + 0j, 1.0 + 0j, 0.5 * model.outer_radius, model.outer_radius
    if abs(model.jump_center - model.outer_center) > 0:
        raise ValueError("jump contour and boundary must be concentric")
    if model.jump_radius >= model.outer_radius:
        raise ValueError("jump radius must be below the outer radius")
    return model.gamma_in, model.gamma_out, model.jump_radius, model.outer_radius


def radial_dtn(model: ConductivityModel, n: int) -> complex:
    """Co-normal DtN eigenvalue for Fourier mode ``n``.

    With u = a (r/r0)^k inside and B (r/R)^k + C (r0/r)^k outside (k = |n|),
    continuity of u and of gamma u_r at r0 and u(R) = 1 give
    Lambda_n = gamma+ (k/R) (1 - s^2 p) / (1 + s^2 p), s = (r0/R)^k,
    p = (gamma+ - gamma-) / (gamma+ + gamma-).
    """
    gm, gp, r0, R = _radial_params(model)
    k = abs(int(n))
    if k == 0:
        return 0j
    s2 = (r0 / R) ** (2 * k)
    p = (gp - gm) / (gp + gm)
    return complex(gp * (k / R) * (1 - s2 * p) / (1 + s2 * p))


def dtn_operator(model: ConductivityModel, n_max: int) -> DtnOperator:
    _, gp, _, R = _radial_params(model)
    eig = {n: radial_dtn(model, n) for n in range(-n_max, n_max + 1)}
    return DtnOperator(eig, R, complex(gp))


def _circle_order(boundary: ContourMesh):
    if boundary.center is None:
        raise ValueError("spectral operations need a circular boundary")
    pos = boundary if boundary.orientation == POSITIVE else orient(boundary, POSITIVE)
    perm = np.arange(boundary.n) if boundary.orientation == POSITIVE else np.arange(boundary.n)[::-1]
    return pos, perm


def _modes(n: int) -> np.ndarray:
    k = np.fft.fftfreq(n, 1.0 / n).round().astype(int)
    return k


def apply_dtn(dtn: DtnOperator, f, boundary: ContourMesh) -> np.ndarray:
    """Apply the spectral DtN map to boundary values ``f``."""
    _, perm = _circle_order(boundary)
    fp = np.asarray(f, dtype=complex)[perm]
    k = _modes(fp.size)
    mult = np.array([dtn.eigenvalues.get(int(m), np.nan) for m in k])
    if fp.size % 2 == 0:
        mult[fp.size // 2] = 0.0
    if np.any(np.isnan(mult)):
        raise ValueError("DtN operator lacks modes resolved by the boundary mesh")
    out = np.fft.ifft(mult * np.fft.fft(fp))
    res = np.empty_like(out)
    res[perm] = out
    return res


def tangential_antiderivative(f, boundary: ContourMesh, tol: float = 1e-10) -> np.ndarray:
    """Periodic g with dg/ds = f and zero mean, by Fourier division."""
    pos, perm = _circle_order(boundary)
    fp = np.asarray(f, dtype=complex)[perm]
    mean = np.sum(fp * pos.weights) / pos.length
    if abs(mean) > tol:
        raise ValueError(f"mean {abs(mean):.3e} is not zero; no periodic antiderivative")
    k = _modes(fp.size)
    fh = np.fft.fft(fp)
    gh = np.zeros_like(fh)
    nz = k != 0
    if fp.size % 2 == 0:
        nz[fp.size // 2] = False
    gh[nz] = fh[nz] / (1j * k[nz] / pos.radius)
    out = np.fft.ifft(gh)
    res = np.empty_like(out)
    res[perm] = out
    return res


def tangential_derivative(g, boundary: ContourMesh) -> np.ndarray:
    pos, perm = _circle_order(boundary)
    gp = np.asarray(g, dtype=complex)[perm]
    k = _modes(gp.size).astype(float)
    if gp.size % 2 == 0:
        k[gp.size // 2] = 0
    out = np.fft.ifft(1j * k / pos.radius * np.fft.fft(gp))
    res = np.empty_like(out)
    res[perm] = out
    return res


def boundary_relation_residual(traces: BoundaryTracePair, dtn: DtnOperator,
                               boundary: ContourMesh, form: str = CORRECTED) -> float:
    """Sup-norm residual of the relation between Dirac traces and the DtN map.

    With X = nu h1, Y = conj(nu) h2 and K = i (Lambda / gamma_b) d_s^{-1}:

    * ``corrected``: X + Y - K (X - Y), which vanishes for the traces of every
      solution (u_r = Lambda u / gamma_b, u_s = i gamma_b^{-1/2} (X - Y));
    * ``literal``: (I - K) X - (I + K) Y as printed, which only vanishes when
      Lambda_n = |n| on the modes present.
    """
    nu = boundary.normals
    X = nu * np.asarray(traces.h1, dtype=complex)
    Y = np.conj(nu) * np.asarray(traces.h2, dtype=complex)
    if form == CORRECTED:
        g = tangential_antiderivative(X - Y, boundary)
        r = X + Y - 1j * apply_dtn(dtn, g, boundary) / dtn.gamma_boundary
    elif form == LITERAL:
        g = tangential_antiderivative(X + Y, boundary)
        r = X - Y - 1j * apply_dtn(dtn, g, boundary) / dtn.gamma_boundary
    else:
        raise ValueError(f"unknown form {form!r}")
    return float(np.max(np.abs(r)))


def mode_traces(model: ConductivityModel, n: int, boundary: ContourMesh) -> BoundaryTracePair:
    """Dirac traces on the boundary of the solution with u = exp(i n theta) there.

    phi = gamma^{1/2} (du/dz, du/dzbar), so nu phi1 = gamma^{1/2} (u_r - i u_s) / 2
    and conj(nu) phi2 = gamma^{1/2} (u_r + i u_s) / 2 with gamma u_r = Lambda_n u.
    """
    _, gp, _, R = _radial_params(model)
    nu = boundary.normals
    theta = np.angle(nu)
    u = np.exp(1j * n * theta)
    ur = radial_dtn(model, n) / gp * u
    us = 1j * n / R * u
    sq = np.sqrt(gp)
    return BoundaryTracePair(sq * (ur - 1j * us) / 2 / nu, sq * (ur + 1j * us) / 2 / np.conj(nu))


def single_layer_S(params: CgoParameters, f, boundary: ContourMesh, nodes=None) -> np.ndarray:
    """(1/(i pi)) p.v. integral of f(s) exp(lambda (s-w)^2 - lambda (z-w)^2) / (s - z) ds
    at boundary nodes ``z``.

    The value g(z) is subtracted from the integrand and its principal value
    i pi g(z) added back; the remaining removable diagonal term is the
    spectral tangential derivative of g.
    """
    pos, perm = _circle_order(boundary)
    fp = np.asarray(f, dtype=complex)[perm]
    n = pos.n
    rows = np.arange(n) if nodes is None else np.argsort(perm)[np.asarray(nodes)]
    lam, w = params.lam, params.w
    e = lam * (pos.nodes - w) ** 2
    Dt = periodic_derivative_matrix(n)
    out = np.empty(rows.size, dtype=complex)
    for i, j in enumerate(rows):
        g = fp * np.exp(e - e[j])
        diff = pos.nodes - pos.nodes[j]
        diff[j] = 1.0
        terms = (g - g[j]) * pos.dz / diff
        terms[j] = 0.0
        pv = terms.sum() + (2 * np.pi / n) * (Dt[j] @ g)
        out[i] = pv / (1j * np.pi) + g[j]
    if nodes is None:
        res = np.empty_like(out)
        res[perm] = out
        return res
    return out
