"""Admissible and proper admissible points.

Re[lambda (z - w)^2] is harmonic in z, so its supremum over a closed domain is
attained on the boundary; A and B are computed from contour samples only,
with the interior value 0 at z = w added when w lies in the closed jump disk.
Both are positively homogeneous in lambda, which reduces the search to one
scan over directions with a closed-form scale per direction.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .geometry import ContourMesh, DiskGeometry

TOL = 1e-9


@dataclass(frozen=True)
class AdmissibleCertificate:
    w: complex
    lambda_O: complex
    A: float
    B: float
    eps1: float
    eps2: float
    proper: bool

    @property
    def admissible(self) -> bool:
        return self.A < 0.5 - TOL and self.B < -0.5 - TOL

    def to_json(self) -> str:
        d = asdict(self)
        for k in ("w", "lambda_O"):
            d[k] = [float(np.real(d[k])), float(np.imag(d[k]))]
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "AdmissibleCertificate":
        d = json.loads(text)
        for k in ("w", "lambda_O"):
            d[k] = complex(*d[k])
        return cls(**d)


def certificate(w: complex, lambda_O: complex, A: float, B: float) -> AdmissibleCertificate:
    eps1, eps2 = 0.5 - A, -0.5 - B
    return AdmissibleCertificate(complex(w), complex(lambda_O), float(A), float(B),
                                 float(eps1), float(eps2), bool(eps2 - eps1 > TOL))


def eval_AB(w: complex, lambda_cand: complex, boundary_O: ContourMesh,
            boundary_D: ContourMesh) -> tuple[float, float]:
    """Sup of Re[lambda (z - w)^2] over the closure of O (A) and of D (B)."""
    A = float(np.max(np.real(lambda_cand * (boundary_O.nodes - w) ** 2)))
    B = float(np.max(np.real(lambda_cand * (boundary_D.nodes - w) ** 2)))
    if _in_closed_disk(w, boundary_D):
        B = max(B, 0.0)
    return A, B


def _in_closed_disk(w, contour: ContourMesh) -> bool:
    if contour.center is not None and contour.radius is not None:
        return bool(abs(w - contour.center) <= contour.radius)
    return bool(np.any(contour.contains(w)))


def certify_proper(cert: AdmissibleCertificate) -> bool:
    """True when the certificate is admissible and eps2 - eps1 exceeds TOL."""
    return cert.admissible and cert.eps2 - cert.eps1 > TOL


def find_admissible(w: complex, geometry: DiskGeometry, n_angles: int = 720
                    ) -> AdmissibleCertificate | None:
    """Best certificate over a scan of directions, or None.

    For direction psi with unit values (A_u, B_u), the scale t gives
    eps1 = 1/2 - t A_u and eps2 - eps1 = t (|B_u| + A_u) - 1. The scale
    t = 1.5 / (|B_u| + 2 A_u) maximizes min(eps1, eps2 - eps1); the direction
    with the largest such margin wins. Maximizing eps2 - eps1 alone pushes t
    to the edge of the window where eps1 vanishes.
    """
    w = complex(w)
    if geometry.in_closed_d(w) or not geometry.in_o(w):
        return None
    best, best_margin = None, -np.inf
    for psi in 2 * np.pi * np.arange(n_angles) / n_angles:
        e = np.exp(1j * psi)
        Au, Bu = eval_AB(w, e, geometry.boundary, geometry.gamma)
        Au = max(Au, 0.0)
        if not (Bu < 0 and Au < -Bu):
            continue
        t = 1.5 / (-Bu + 2 * Au)
        margin = (-Bu - Au) / (2 * (-Bu + 2 * Au))
        cert = certificate(w, t * e, t * Au, t * Bu)
        if cert.admissible and margin > best_margin:
            best, best_margin = cert, margin
    return best


def admissibility_map(geometry: DiskGeometry, xs, ys, n_angles: int = 720):
    """Rows (x, y, admissible, proper, Re lambda_O, Im lambda_O, A, B) on a grid.

    Points outside O or inside the closed jump disk are reported inadmissible
    with NaN parameters.
    """
    rows = []
    for y in ys:
        for x in xs:
            cert = find_admissible(complex(x, y), geometry, n_angles)
            if cert is None:
                rows.append((x, y, 0, 0, np.nan, np.nan, np.nan, np.nan))
            else:
                rows.append((x, y, 1, int(cert.proper), cert.lambda_O.real,
                             cert.lambda_O.imag, cert.A, cert.B))
    return rows
