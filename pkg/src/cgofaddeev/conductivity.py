"""Complex conductivity models with a jump across the contour, and the
potential of the associated first-order (Dirac) system."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import OUTSIDE_D, AreaMesh, ContourMesh, polar_patch

TRIVIAL = "trivial"
RADIAL_TWO_LAYER = "radial-two-layer"
SMOOTH_BUMP = "smooth-bump-with-jump"


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Bump:
    """``amplitude * exp(1 - 1/(1 - s))`` with ``s = |z - center|^2 / radius^2``;
    C-infinity, supported in the closed disk, equal to ``amplitude`` at the centre."""

    center: complex
    radius: float
    amplitude: complex

    def _s(self, z):
        u = np.asarray(z, dtype=complex) - self.center
        return u, np.abs(u) ** 2 / self.radius**2

    def value(self, z):
        _, s = self._s(z)
        out = np.zeros(s.shape, dtype=complex)
        m = s < 1
        out[m] = self.amplitude * np.exp(1 - 1 / (1 - s[m]))
        return out

    def _dprofile(self, s):
        out = np.zeros(s.shape)
        m = s < 1
        out[m] = -np.exp(1 - 1 / (1 - s[m])) / (1 - s[m]) ** 2
        return out

    def d(self, z):
        u, s = self._s(z)
        return self.amplitude * self._dprofile(s) * np.conj(u) / self.radius**2

    def dbar(self, z):
        u, s = self._s(z)
        return self.amplitude * self._dprofile(s) * u / self.radius**2


@dataclass(frozen=True)
class ConductivityModel:
    """gamma = J * exp(beta) in O, 1 outside O.

    J is ``gamma_in`` in the jump disk D and ``gamma_out`` in O minus D; beta is
    a sum of bumps supported away from the contour and from the boundary of O.
    """

    kind: str
    outer_center: complex
    outer_radius: float
    jump_center: complex
    jump_radius: float
    gamma_in: complex = 1.0
    gamma_out: complex = 1.0
    bumps: tuple[Bump, ...] = ()
    lower_bound: float = 0.0

    def beta(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for b in self.bumps:
            out = out + b.value(z)
        return out

    def in_d(self, z):
        return np.abs(np.asarray(z) - self.jump_center) < self.jump_radius

    def in_o(self, z):
        return np.abs(np.asarray(z) - self.outer_center) < self.outer_radius

    def jump_factor(self, z):
        z = np.asarray(z, dtype=complex)
        j = np.where(self.in_d(z), self.gamma_in, self.gamma_out)
        return np.where(self.in_o(z), j, 1.0).astype(complex)

    def eval(self, z):
        return self.jump_factor(z) * np.exp(self.beta(z))

    def log(self, z):
        return np.log(self.eval(z))

    def d_log(self, z):
        """Analytic d/dz of log gamma off the contour (J is piecewise constant)."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for b in self.bumps:
            out = out + b.d(z)
        return out

    def dbar_log(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for b in self.bumps:
            out = out + b.dbar(z)
        return out

    def traces(self, z):
        """(gamma_minus, gamma_plus): interior and exterior traces on the contour."""
        e = np.exp(self.beta(z))
        return self.gamma_in * e, self.gamma_out * e

    @property
    def is_real(self) -> bool:
        amps = [b.amplitude for b in self.bumps]
        return all(np.imag(v) == 0 for v in [self.gamma_in, self.gamma_out, *amps])

    def support_mesh(self, n_radial: int, n_angular: int) -> AreaMesh:
        """Area mesh covering the support of the potential (one patch per bump)."""
        return AreaMesh(tuple(
            polar_patch(b.center, 0.0, b.center, b.radius, n_radial, n_angular, OUTSIDE_D)
            for b in self.bumps))

    def q21(self, z):
        return -0.5 * self.dbar_log(z)

    def q12(self, z):
        return -0.5 * self.d_log(z)


def _validation_points(m: ConductivityModel, n: int = 64) -> np.ndarray:
    r = np.linspace(0, m.outer_radius, n, endpoint=False)[1:]
    t = 2 * np.pi * np.arange(2 * n) / (2 * n)
    pts = (m.outer_center + r[:, None] * np.exp(1j * t[None, :])).ravel()
    rd = m.jump_radius * np.array([0.999, 1.001])
    ring = (m.jump_center + rd[:, None] * np.exp(1j * t[None, :])).ravel()
    pts = np.concatenate([pts, ring])
    for b in m.bumps:
        rb = np.linspace(0, b.radius, n // 2)
        pts = np.concatenate([pts, (b.center + rb[:, None] * np.exp(1j * t[None, :])).ravel()])
    return pts


def make_model(kind: str, outer_center: complex = 0.0, outer_radius: float = 1.0,
               jump_center: complex = -0.5, jump_radius: float = 0.2,
               gamma_in: complex = 1.0, gamma_out: complex = 1.0,
               bumps=()) -> ConductivityModel:
    """Build and validate a conductivity model.

    ``bumps`` is a sequence of :class:`Bump` or ``(center, radius, amplitude)``
    tuples and is only allowed for the smooth-bump kind.
    """
    bumps = tuple(b if isinstance(b, Bump) else Bump(complex(b[0]), float(b[1]), complex(b[2]))
                  for b in bumps)
    if kind == TRIVIAL:
        if bumps or gamma_in != 1 or gamma_out != 1:
            raise ModelError("trivial model takes no parameters")
    elif kind == RADIAL_TWO_LAYER:
        if bumps:
            raise ModelError("radial-two-layer model has no bumps")
    elif kind == SMOOTH_BUMP:
        if gamma_out != 1:
            raise ModelError("smooth-bump model has J = 1 outside the contour")
    else:
        raise ModelError(f"unknown model kind {kind!r}")
    if jump_radius <= 0 or outer_radius <= 0:
        raise ModelError("radii must be positive")
    if abs(jump_center - outer_center) + jump_radius >= outer_radius:
        raise ModelError("jump disk must lie strictly inside O")
    for b in bumps:
        if b.radius <= 0:
            raise ModelError("bump radius must be positive")
        if abs(b.center - outer_center) + b.radius >= outer_radius:
            raise ModelError(f"bump at {b.center} touches the boundary of O")
        if abs(b.center - jump_center) - b.radius <= jump_radius:
            raise ModelError(f"bump at {b.center} touches the jump contour")
    for i, a in enumerate(bumps):
        for b in bumps[i + 1:]:
            if abs(a.center - b.center) < a.radius + b.radius:
                raise ModelError("bump supports must be disjoint")
    model = ConductivityModel(kind, complex(outer_center), float(outer_radius),
                              complex(jump_center), float(jump_radius),
                              complex(gamma_in), complex(gamma_out), bumps)
    low = float(np.min(np.real(model.eval(_validation_points(model)))))
    if low <= 0:
        raise ModelError(f"Re(gamma) reaches {low:.3g} <= 0 on the validation grid")
    return ConductivityModel(model.kind, model.outer_center, model.outer_radius,
                             model.jump_center, model.jump_radius, model.gamma_in,
                             model.gamma_out, bumps, low)


@dataclass(frozen=True)
class JumpTrace:
    alpha: np.ndarray
    deviation: float


@dataclass(frozen=True)
class DiracPotential:
    q12: np.ndarray
    q21: np.ndarray
    alpha: JumpTrace | None
    gamma_ref: ConductivityModel
    mesh: AreaMesh

    def scaled(self, eps: float) -> "DiracPotential":
        """Potential multiplied by ``eps`` (the jump trace is kept)."""
        return DiracPotential(eps * self.q12, eps * self.q21, self.alpha, self.gamma_ref, self.mesh)


def dirac_potential(model: ConductivityModel, mesh: AreaMesh,
                    gamma_mesh: ContourMesh | None = None) -> DiracPotential:
    z = mesh.nodes
    q12 = np.where(model.in_o(z), -0.5 * model.d_log(z), 0)
    q21 = np.where(model.in_o(z), -0.5 * model.dbar_log(z), 0)
    jt = jump_alpha(model, gamma_mesh) if gamma_mesh is not None else None
    return DiracPotential(q12.astype(complex), q21.astype(complex), jt, model, mesh)


def jump_alpha(model: ConductivityModel, gamma_mesh: ContourMesh) -> JumpTrace:
    gm, gp = model.traces(gamma_mesh.nodes)
    alpha = np.sqrt(gm / gp)
    return JumpTrace(alpha, float(np.max(np.abs(alpha - 1))) if alpha.size else 0.0)


def transmission_matrix(alpha, nu) -> np.ndarray:
    """Jump matrix of the Dirac traces across the contour.

    Vectorised over broadcastable ``alpha`` and ``nu``; returns shape
    ``(..., 2, 2)``.
    """
    alpha = np.asarray(alpha, dtype=complex)
    nu = np.asarray(nu, dtype=complex)
    if np.any(alpha == 0):
        raise ValueError("alpha must be nonzero")
    alpha, nu = np.broadcast_arrays(alpha, nu)
    diag = alpha + 1 / alpha - 2
    off = alpha - 1 / alpha
    out = np.empty(alpha.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = diag
    out[..., 1, 1] = diag
    out[..., 0, 1] = off * np.conj(nu) ** 2
    out[..., 1, 0] = off * nu**2
    return 0.5 * out
