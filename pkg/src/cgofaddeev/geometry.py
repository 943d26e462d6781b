"""Quadrature meshes for the outer domain O, its boundary and the jump contour.

Contours are closed curves sampled at equispaced parameter values with
trapezoid weights. Area meshes are unions of polar patches; each patch is a
tensor grid in (radius, angle) around a centre point, bounded outside by a
(possibly eccentric) circle, so that no cell ever straddles the jump contour.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

POSITIVE = "positive"
NEGATIVE = "negative"
INSIDE_D = "inside-D"
OUTSIDE_D = "outside-D"


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class ContourMesh:
    """Closed curve sampled at equispaced parameter values.

    ``weights`` are arclength weights, so ``sum(weights)`` is the curve length
    and the complex line element is ``dz = tangents * weights``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    normals: np.ndarray
    tangents: np.ndarray
    orientation: str = POSITIVE
    center: complex | None = None
    radius: float | None = None

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def dz(self) -> np.ndarray:
        return self.tangents * self.weights

    @property
    def dzbar(self) -> np.ndarray:
        return np.conj(self.dz)

    @property
    def length(self) -> float:
        return float(self.weights.sum())

    def spacing(self) -> float:
        return float(np.max(np.abs(np.diff(np.r_[self.nodes, self.nodes[:1]]))))

    def contains(self, z) -> np.ndarray:
        """Winding-number test for points off the curve."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        wind = (self.dz[None, :] / (self.nodes[None, :] - z[:, None])).sum(axis=1)
        wind = wind / (2j * np.pi)
        if self.orientation == NEGATIVE:
            wind = -wind
        return np.real(wind) > 0.5


def circle_contour(center: complex, radius: float, n: int,
                   orientation: str = POSITIVE) -> ContourMesh:
    if radius <= 0:
        raise GeometryError(f"radius must be positive, got {radius}")
    if n < 16:
        raise GeometryError(f"need at least 16 contour nodes, got {n}")
    theta = 2 * np.pi * np.arange(n) / n
    normals = np.exp(1j * theta)
    nodes = center + radius * normals
    weights = np.full(n, 2 * np.pi * radius / n)
    mesh = ContourMesh(nodes, weights, normals, 1j * normals, POSITIVE,
                       complex(center), float(radius))
    return orient(mesh, orientation)


def orient(mesh: ContourMesh, orientation: str) -> ContourMesh:
    """Return ``mesh`` traversed with the requested orientation.

    Normals stay outward; node order and tangents flip when the orientation
    changes.
    """
    if orientation not in (POSITIVE, NEGATIVE):
        raise GeometryError(f"unknown orientation {orientation!r}")
    if orientation == mesh.orientation:
        return mesh
    return ContourMesh(mesh.nodes[::-1].copy(), mesh.weights[::-1].copy(),
                       mesh.normals[::-1].copy(), -mesh.tangents[::-1],
                       orientation, mesh.center, mesh.radius)


def disk_ratio_integral(z, center: complex, radius: float) -> np.ndarray:
    """Closed form of the area integral of conj(s - z) / (s - z) over a disk."""
    t = np.asarray(z, dtype=complex) - center
    inside = np.abs(t) <= radius
    safe = np.where(inside, 1.0, t)
    out_val = np.pi * radius**2 * np.conj(safe) / safe - np.pi * radius**4 / (2 * safe**2)
    return np.where(inside, np.pi * np.conj(t) ** 2 / 2, out_val)


def _trig_cardinal(dtheta: np.ndarray, n: int):
    """Periodic cardinal function on n equispaced angles and its derivative."""
    x = np.angle(np.exp(1j * dtheta))
    hit = np.abs(x) < 1e-12
    xs = np.where(hit, 1.0, x)
    s, c = np.sin(n * xs / 2), np.cos(n * xs / 2)
    sh, ch = np.sin(xs / 2), np.cos(xs / 2)
    if n % 2 == 0:
        val = s * ch / (n * sh)
        der = (0.5 * n * c * ch / sh - 0.5 * s / sh**2) / n
    else:
        val = s / (n * sh)
        der = (0.5 * n * c * sh - 0.5 * s * ch) / (n * sh**2)
    return np.where(hit, 1.0, val), np.where(hit, 0.0, der)


def _lagrange(t: np.ndarray, nodes: np.ndarray):
    """Lagrange basis at ``nodes`` evaluated at points ``t`` and its derivative
    (barycentric form, exact rows at coincident points)."""
    denom = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(denom, 1.0)
    bw = 1.0 / denom.prod(axis=1)
    diff = t[:, None] - nodes[None, :]
    hit = np.abs(diff) < 1e-14
    row_hit = hit.any(axis=1)
    safe = np.where(hit, 1.0, diff)
    c = bw[None, :] / safe
    L = c / c.sum(axis=1, keepdims=True)
    dL = L * ((1.0 / safe).sum(axis=1, keepdims=True) - 1.0 / safe)
    if row_hit.any():
        Dm = (bw[None, :] / bw[:, None]) / denom
        np.fill_diagonal(Dm, 0.0)
        np.fill_diagonal(Dm, -Dm.sum(axis=1))
        m = np.argmax(hit, axis=1)[row_hit]
        L[row_hit] = np.eye(nodes.size)[m]
        dL[row_hit] = Dm[m]
    return L, dL


def disk_cauchy_integral(z, center: complex, radius: float) -> np.ndarray:
    """Closed form of the area integral of 1/(s - z) over a disk."""
    u = np.asarray(z, dtype=complex) - center
    inside = np.abs(u) < radius
    safe = np.where(inside, 1.0, u)
    return np.where(inside, -np.pi * np.conj(u), -np.pi * radius**2 / safe)


@dataclass(frozen=True)
class PolarPatch:
    """Tensor polar grid around ``center``.

    Radii run from ``inner_radius`` to the point where the ray leaves the disk
    ``(outer_center, outer_radius)``; Gauss-Legendre in the radial fraction,
    trapezoid in angle. Node ``(k, j)`` (angle k, radius j) is stored at flat
    index ``k * n_radial + j``.
    """

    center: complex
    inner_radius: float
    outer_center: complex
    outer_radius: float
    n_radial: int
    n_angular: int
    tag: str
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.nodes.size

    def cauchy_integral(self, z) -> np.ndarray:
        out = disk_cauchy_integral(z, self.outer_center, self.outer_radius)
        if self.inner_radius > 0:
            out = out - disk_cauchy_integral(z, self.center, self.inner_radius)
        return out

    def area(self) -> float:
        return np.pi * (self.outer_radius**2 - self.inner_radius**2)

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return ((np.abs(z - self.outer_center) < self.outer_radius)
                & (np.abs(z - self.center) > self.inner_radius))

    def contains_closed(self, z, rtol: float = 1e-12) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return ((np.abs(z - self.outer_center) <= self.outer_radius * (1 + rtol))
                & (np.abs(z - self.center) >= self.inner_radius * (1 - rtol)))

    def ratio_integral(self, z) -> np.ndarray:
        """Area integral of conj(s - z) / (s - z) over the patch."""
        out = disk_ratio_integral(z, self.outer_center, self.outer_radius)
        if self.inner_radius > 0:
            out = out - disk_ratio_integral(z, self.center, self.inner_radius)
        return out

    def grid(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values).reshape(self.n_angular, self.n_radial)

    def _span(self, theta):
        d = self.center - self.outer_center
        e = np.exp(-1j * theta)
        b = np.real(e * d)
        db = np.imag(e * d)
        root = np.sqrt(b**2 - (abs(d) ** 2 - self.outer_radius**2))
        rmax = -b + root
        return rmax - self.inner_radius, -db + b * db / root

    def interp_rows(self, z):
        """Rows mapping node values to (f, df/dz, df/dzbar) at points ``z``.

        Uses the tensor interpolant: trigonometric in angle, polynomial through
        the Gauss-Legendre radial nodes. Each returned array has shape
        ``(len(z), size)``.
        """
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        u = z - self.center
        rho = np.abs(u)
        theta = np.angle(u)
        span, dspan = self._span(theta)
        t = (rho - self.inner_radius) / span
        tn, _ = np.polynomial.legendre.leggauss(self.n_radial)
        L, dL = _lagrange(t, (tn + 1) / 2)
        th_k = 2 * np.pi * (np.arange(self.n_angular) + 0.5) / self.n_angular
        T, dT = _trig_cardinal(theta[:, None] - th_k[None, :], self.n_angular)
        F = (T[:, :, None] * L[:, None, :]).reshape(z.size, -1)
        Ft = (T[:, :, None] * dL[:, None, :]).reshape(z.size, -1)
        Fth = (dT[:, :, None] * L[:, None, :]).reshape(z.size, -1)
        e = np.exp(1j * theta)
        z_t = span * e
        z_th = dspan * t * e + 1j * rho * e
        # f_t = fz z_t + fzb conj(z_t); f_th = fz z_th + fzb conj(z_th)
        det = z_t * np.conj(z_th) - np.conj(z_t) * z_th
        Fz = (np.conj(z_th)[:, None] * Ft - np.conj(z_t)[:, None] * Fth) / det[:, None]
        Fzb = (z_t[:, None] * Fth - z_th[:, None] * Ft) / det[:, None]
        return F, Fz, Fzb


def polar_patch(center: complex, inner_radius: float, outer_center: complex,
                outer_radius: float, n_radial: int, n_angular: int,
                tag: str = OUTSIDE_D) -> PolarPatch:
    center, outer_center = complex(center), complex(outer_center)
    d = center - outer_center
    if abs(d) + inner_radius >= outer_radius:
        raise GeometryError("inner disk must lie strictly inside the outer disk")
    theta = 2 * np.pi * (np.arange(n_angular) + 0.5) / n_angular
    e = np.exp(1j * theta)
    b = np.real(np.conj(e) * d)
    rmax = -b + np.sqrt(b**2 - (abs(d) ** 2 - outer_radius**2))
    t, wt = np.polynomial.legendre.leggauss(n_radial)
    t, wt = (t + 1) / 2, wt / 2
    span = rmax - inner_radius
    rho = inner_radius + span[:, None] * t[None, :]
    nodes = center + rho * e[:, None]
    weights = rho * span[:, None] * wt[None, :] * (2 * np.pi / n_angular)
    return PolarPatch(center, float(inner_radius), outer_center, float(outer_radius),
                      n_radial, n_angular, tag, nodes.ravel(), weights.ravel())


@dataclass(frozen=True)
class AreaMesh:
    patches: tuple[PolarPatch, ...]

    @property
    def nodes(self) -> np.ndarray:
        if not self.patches:
            return np.zeros(0, dtype=complex)
        return np.concatenate([p.nodes for p in self.patches])

    @property
    def weights(self) -> np.ndarray:
        if not self.patches:
            return np.zeros(0)
        return np.concatenate([p.weights for p in self.patches])

    @property
    def region_tags(self) -> np.ndarray:
        if not self.patches:
            return np.zeros(0, dtype=object)
        return np.concatenate([np.full(p.size, p.tag, dtype=object) for p in self.patches])

    @property
    def inside_d(self) -> np.ndarray:
        return self.region_tags == INSIDE_D

    @property
    def size(self) -> int:
        return sum(p.size for p in self.patches)

    def slices(self):
        start = 0
        for p in self.patches:
            yield p, slice(start, start + p.size)
            start += p.size


@dataclass(frozen=True)
class DiskGeometry:
    outer_center: complex
    outer_radius: float
    jump_center: complex
    jump_radius: float
    area: AreaMesh
    gamma: ContourMesh
    boundary: ContourMesh

    def in_closed_d(self, z) -> np.ndarray:
        return np.abs(np.asarray(z) - self.jump_center) <= self.jump_radius

    def in_o(self, z) -> np.ndarray:
        return np.abs(np.asarray(z) - self.outer_center) < self.outer_radius


def make_disk_geometry(outer_center: complex = 0.0, outer_radius: float = 1.0,
                       jump_center: complex = -0.5, jump_radius: float = 0.2,
                       n_contour: int = 256, n_boundary: int | None = None,
                       n_radial: int = 32, n_angular: int = 128) -> DiskGeometry:
    """Disk O with an interior disk D whose boundary is the jump contour.

    The area mesh has one patch for D and one eccentric patch for the
    complement, both centred on the jump centre.
    """
    if outer_radius <= 0 or jump_radius <= 0:
        raise GeometryError("radii must be positive")
    if abs(jump_center - outer_center) + jump_radius >= outer_radius:
        raise GeometryError("closed jump disk must lie strictly inside O")
    n_boundary = n_contour if n_boundary is None else n_boundary
    disk = polar_patch(jump_center, 0.0, jump_center, jump_radius,
                       n_radial, n_angular, INSIDE_D)
    ring = polar_patch(jump_center, jump_radius, outer_center, outer_radius,
                       n_radial, n_angular, OUTSIDE_D)
    return DiskGeometry(complex(outer_center), float(outer_radius),
                        complex(jump_center), float(jump_radius),
                        AreaMesh((disk, ring)),
                        circle_contour(jump_center, jump_radius, n_contour),
                        circle_contour(outer_center, outer_radius, n_boundary))
