"""Ratio probes for three integral inequalities.

Each probe returns a :class:`ProbeReport` whose ratio is a left-hand norm
divided by the right-hand quantity of the inequality. No constant is claimed;
the probes check finiteness, homogeneity and stability under refinement of
the truncated spectral domain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import polar_patch


@dataclass(frozen=True)
class ProbeReport:
    probe_id: str
    ratio: float
    p: float
    q: float
    resolution: dict
    family_id: int | None = None


def _composite_gauss(a: float, b: float, n_panels: int, order: int = 8):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, n_panels + 1)
    h = np.diff(edges)
    mid = (edges[:-1] + edges[1:]) / 2
    nodes = (mid[:, None] + h[:, None] / 2 * x[None, :]).ravel()
    weights = (h[:, None] / 2 * w[None, :]).ravel()
    return nodes, weights


def _smooth_step(t):
    """C-infinity transition from 1 (t <= 0) to 0 (t >= 1)."""
    t = np.clip(t, 0.0, 1.0)

    def h(s):
        out = np.zeros_like(s)
        m = s > 0
        out[m] = np.exp(-1 / s[m])
        return out

    a, b = h(1 - t), h(t)
    return a / (a + b)


# -- Laplace-type transform --------------------------------------------------

def laplace_transform(f_values, x, wx, y, wy, lam1, lam2) -> np.ndarray:
    """L f(l1, l2) = sum f(x, y) exp(-i l1 x) exp(-i l2 y - ln|l2| y) wx wy.

    ``f_values`` has shape (len(x), len(y)); the result (len(lam1), len(lam2)).
    """
    Ex = np.exp(-1j * np.outer(lam1, x)) * wx[None, :]
    Ey = np.exp(-np.outer(1j * lam2 + np.log(np.abs(lam2)), y)) * wy[None, :]
    return Ex @ f_values @ Ey.T


def laplace_hy_ratio(f, box, p: float = 4.0, truncation: float = 64.0,
                     n_panels: int = 16, n_lambda_panels: int | None = None,
                     scale: float = 1.0, family_id: int | None = None) -> ProbeReport:
    """Hausdorff-Young type ratio ||L f||_p / ||f||_q for the Laplace-type
    transform with conjugate exponent q.

    ``f`` is a callable on the support box (x0, x1, y0, y1) with x0 >= 0 and
    y0 >= 1. The spectral domain is |l1| <= truncation, 1 <= l2 <= truncation;
    the transform is unbounded as l2 -> 0 because |l2|^(-y) grows for y >= 1.
    """
    x0, x1, y0, y1 = box
    if x0 < 0 or y0 < 1:
        raise ValueError("support must lie in [0, inf) x [1, inf)")
    q = p / (p - 1)
    x, wx = _composite_gauss(x0, x1, n_panels)
    y, wy = _composite_gauss(y0, y1, n_panels)
    F = scale * np.asarray(f(x[:, None], y[None, :]), dtype=complex)
    fq = np.sum(np.abs(F) ** q * wx[:, None] * wy[None, :]) ** (1 / q)
    if not fq > 0:
        raise ValueError("test function has zero norm")
    m = n_lambda_panels or max(8, int(np.ceil(truncation / 2)))
    l1, w1 = _composite_gauss(-truncation, truncation, 2 * m)
    l2, w2 = _composite_gauss(1.0, truncation, m)
    L = laplace_transform(F, x, wx, y, wy, l1, l2)
    lp = np.sum(np.abs(L) ** p * w1[:, None] * w2[None, :]) ** (1 / p)
    return ProbeReport("laplace-hy", float(lp / fq), p, q,
                       {"truncation": truncation, "n_panels": n_panels, "lambda_panels": m},
                       family_id)


# -- kernel norm ---------------------------------------------------------------

def _disk_rule(center, radius, n_r, n_t, power):
    """Polar rule on a disk with radial substitution r = radius * s^(1/power),
    which absorbs a factor r^(power - 1) of the integrand's radial singularity."""
    s, ws = _composite_gauss(0.0, 1.0, max(1, n_r // 8))
    r = radius * s ** (1 / power)
    dr = radius * (1 / power) * s ** (1 / power - 1) * ws
    t = 2 * np.pi * (np.arange(n_t) + 0.5) / n_t
    z = center + r[:, None] * np.exp(1j * t[None, :])
    w = (r * dr)[:, None] * np.full((1, n_t), 2 * np.pi / n_t)
    return z.ravel(), w.ravel()


def kernel_norm_estimate(a: complex, p: float = 1.5, R_dom: float = 4.0,
                         delta: float = 0.1, n_r: int = 256, n_t: int = 256,
                         scale: float = 1.0) -> ProbeReport:
    """||1/(u (sqrt(u) - a))||_{L^p(|u| < R_dom)} / (1 + |a|^(-1 + delta)).

    The square root is averaged over both branches by substituting u = v^2
    over the whole v-disk, which makes the ratio invariant under rotations
    of ``a``. Singularities at v = 0 and v = a are handled by a smooth
    partition of unity and graded polar rules.
    """
    a = complex(a)
    if a == 0:
        raise ValueError("a must be nonzero")
    if not 1 <= p < 2:
        raise ValueError("p must lie in [1, 2)")
    rho = np.sqrt(R_dom)

    def integrand(v):
        # (1/2) |K(v^2)|^p |du/dv|^2 with du = 2 v dv
        return 0.5 * np.abs(scale / (v**2 * (v - a))) ** p * 4 * np.abs(v) ** 2

    gap = abs(abs(a) - rho)
    if gap < 1e-3 * rho:
        raise ValueError("|sqrt(a-branch)| sits on the domain boundary")
    ra = 0.5 * min(abs(a), gap) if abs(a) < rho else 0.0
    total = 0.0
    if ra > 0:
        z, w = _disk_rule(a, ra, n_r, n_t, 2 - p)
        chi = _smooth_step(np.abs(z - a) / ra)
        total += np.sum(w * integrand(z) * chi)
    z, w = _disk_rule(0.0, rho, n_r, n_t, 4 - 2 * p)
    chi = _smooth_step(np.abs(z - a) / ra) if ra > 0 else 0.0
    total += np.sum(w * integrand(z) * (1 - chi))
    norm = total ** (1 / p)
    bound = scale * (1 + abs(a) ** (-1 + delta))
    return ProbeReport("kernel-norm", float(norm / bound), p, p / (p - 1),
                       {"n_r": n_r, "n_t": n_t, "R_dom": R_dom, "delta": delta})


# -- oscillatory Cauchy-type integral -----------------------------------------------

def weighted_decay_probe(phi, support: tuple, z1: complex, w: complex, lambda_0: complex,
                         p: float = 4.0, delta: float = 0.1, truncation: float = 64.0,
                         n_area: tuple = (48, 192), scale: float = 1.0,
                         family_id: int | None = None) -> ProbeReport:
    """Ratio for the L^p(lambda) norm of |lambda|^(-A0) times the integral of
    phi exp(rho) / (z - z1) against ||phi||_inf / |z1 - w|^(1 - delta).

    rho = -i Im[lambda (z-w)^2] / 2 + ln|lambda| lambda_0 (z-w)^2 and A0 is the
    sup of Re[lambda_0 (z-w)^2] over the support disk. The lambda domain is the
    annulus 1 <= |lambda| <= truncation (ln|lambda| changes sign inside the
    unit disk). The area rule is polar around z1, which cancels the pole; each
    lambda ring gets enough angular nodes for the phase variation in arg lambda.
    """
    z1, w = complex(z1), complex(w)
    if z1 == w:
        raise ValueError("z1 must differ from w")
    if p <= 2:
        raise ValueError("p must exceed 2")
    c, r = complex(support[0]), float(support[1])
    centre = z1 if abs(z1 - c) < r else c
    patch = polar_patch(centre, 0.0, c, r, n_area[0], n_area[1])
    z, wz = patch.nodes, patch.weights
    vals = scale * np.asarray(phi(z), dtype=complex)
    sup_phi = float(np.max(np.abs(vals)))
    u2 = (z - w) ** 2
    th = 2 * np.pi * np.arange(720) / 720
    A0 = float(np.max(np.real(lambda_0 * (c + r * np.exp(1j * th) - w) ** 2)))
    A0 = max(A0, float(np.max(np.real(lambda_0 * u2))))
    u2_max = (abs(w - c) + r) ** 2
    lr, wr = _composite_gauss(1.0, truncation, int(truncation // 4) + 2)
    dens = wz * vals / (z - z1)
    total = 0.0
    for rad, wrad in zip(lr, wr):
        nt = int(np.ceil(rad * u2_max / 2)) + 16
        lam = rad * np.exp(2j * np.pi * np.arange(nt) / nt)
        rho = (-0.5j * np.imag(lam[:, None] * u2[None, :])
               + np.log(rad) * lambda_0 * u2[None, :])
        integral = np.exp(rho) @ dens
        total += wrad * rad * (2 * np.pi / nt) * np.sum(np.abs(rad ** (-A0) * integral) ** p)
    left = total ** (1 / p)
    right = sup_phi / abs(z1 - w) ** (1 - delta)
    ratio = 0.0 if right == 0 else float(left / right)
    return ProbeReport("weighted-decay", ratio, p, p / (p - 1),
                       {"truncation": truncation, "n_area": tuple(n_area), "A0": A0},
                       family_id)


# -- seeded test families --------------------------------------------------------

def random_box_function(seed: int, box, n_terms: int = 4):
    """Sum of seeded Gaussian blobs times the box indicator (nonnegative)."""
    rng = np.random.default_rng(seed)
    x0, x1, y0, y1 = box
    cx = rng.uniform(x0, x1, n_terms)
    cy = rng.uniform(y0, y1, n_terms)
    amp = rng.uniform(0.5, 1.5, n_terms)
    width = rng.uniform(0.1, 0.4, n_terms) * min(x1 - x0, y1 - y0)

    def f(x, y):
        x, y = np.broadcast_arrays(x, y)
        out = np.zeros(x.shape)
        for a, u, v, s in zip(amp, cx, cy, width):
            out += a * np.exp(-((x - u) ** 2 + (y - v) ** 2) / (2 * s**2))
        inside = (x >= x0) & (x <= x1) & (y >= y0) & (y <= y1)
        return np.where(inside, out, 0.0)

    return f


def random_bump(seed: int, support):
    """Seeded smooth function compactly supported in the disk ``support``:
    a bump profile times a random low-degree complex polynomial."""
    rng = np.random.default_rng(seed)
    c, r = complex(support[0]), float(support[1])
    coef = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    coef[0] += 2.0

    def phi(z):
        z = np.asarray(z, dtype=complex)
        s2 = np.abs(z - c) ** 2 / r**2
        inside = s2 < 1
        prof = np.zeros(z.shape)
        prof[inside] = np.exp(1 - 1 / (1 - s2[inside]))
        u = (z - c) / r
        return prof * (coef[0] + coef[1] * u + coef[2] * u**2)

    return phi
