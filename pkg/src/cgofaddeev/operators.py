"""Singular integral operators of the CGO system.

Two code paths are provided for the two Cauchy-type transforms:

* pointwise evaluators (:func:`solid_cauchy`, :func:`cauchy_projector`) that
  apply a density directly, and
* matrix builders used by the solver, which precompute every
  lambda-independent kernel once per mesh.

Both use the same singularity subtraction but share no code, so the solver
residual can be checked against the pointwise path.

Conjugate-kernel twins are realised as ``conj`` of the matrix (the weights are
real), i.e. ``K_conj f = conj(K conj(f))``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .conductivity import DiracPotential, JumpTrace, transmission_matrix
from .geometry import POSITIVE, AreaMesh, ContourMesh, orient

PLUS = "plus"
MINUS = "minus"
MAX_PHASE_STEP = np.pi / 4


class OscillationError(ValueError):
    """Raised when the CGO phase is under-resolved by a mesh."""


class NearSingularWarning(UserWarning):
    pass


@dataclass(frozen=True)
class CgoParameters:
    lam: complex
    w: complex
    lambda_O: complex
    R_cut: float = 0.0

    def __post_init__(self):
        if self.R_cut > 0 and not abs(self.lam) > self.R_cut:
            raise ValueError(f"|lambda| = {abs(self.lam)} must exceed R_cut = {self.R_cut}")

    @property
    def lambda_s(self) -> complex:
        return self.lambda_O

    def with_lambda(self, lam: complex) -> "CgoParameters":
        return CgoParameters(complex(lam), self.w, self.lambda_O, self.R_cut)


@dataclass(frozen=True)
class FieldPair:
    first: np.ndarray
    second: np.ndarray

    def __add__(self, other):
        return FieldPair(self.first + other.first, self.second + other.second)

    def __sub__(self, other):
        return FieldPair(self.first - other.first, self.second - other.second)

    def __mul__(self, c):
        return FieldPair(c * self.first, c * self.second)

    __rmul__ = __mul__

    def sup(self) -> float:
        if self.first.size == 0:
            return 0.0
        return float(max(np.max(np.abs(self.first)), np.max(np.abs(self.second))))

    @classmethod
    def zeros(cls, n: int) -> "FieldPair":
        return cls(np.zeros(n, dtype=complex), np.zeros(n, dtype=complex))


def half_phase(params: CgoParameters, z) -> np.ndarray:
    """Im[lambda (z - w)^2] / 2."""
    return 0.5 * np.imag(params.lam * (np.asarray(z) - params.w) ** 2)


# -- solid Cauchy transform --------------------------------------------------

def solid_cauchy(density, z_eval, mesh: AreaMesh, chunk: int = 256) -> np.ndarray:
    """(-1/pi) * area integral of density(s) / (s - z), pointwise.

    For ``z`` in (the closure of) a patch, the local linear Taylor polynomial
    of the interpolated density is subtracted and integrated in closed form;
    the remainder is O(|s - z|) and the quadrature is smooth in ``z``. Other
    patches use the plain rule. Piecewise constants and linears are exact.

    ``density`` may be 2-D with one density per row; the output then has one
    row per density.
    """
    density = np.asarray(density, dtype=complex)
    single = density.ndim == 1
    dens = np.atleast_2d(density)
    z_eval = np.atleast_1d(np.asarray(z_eval, dtype=complex))
    out = np.zeros((dens.shape[0], z_eval.size), dtype=complex)
    for patch, sl in mesh.slices():
        f = dens[:, sl]
        near = patch.contains_closed(z_eval)
        far = np.flatnonzero(~near)
        if far.size:
            out[:, far] += (f * patch.weights) @ (1.0 / (patch.nodes[:, None] - z_eval[far]))
        idx = np.flatnonzero(near)
        for start in range(0, idx.size, chunk):
            ii = idx[start:start + chunk]
            z = z_eval[ii]
            F, Fz, Fzb = patch.interp_rows(z)
            u = patch.nodes - z[:, None]
            hit = u == 0
            u = np.where(hit, 1.0, u)
            for m in range(f.shape[0]):
                fm = f[m]
                f0, a, b = F @ fm, Fz @ fm, Fzb @ fm
                rem = (fm - f0[:, None] - a[:, None] * u - b[:, None] * np.conj(u)) / u
                rem[hit] = 0.0
                out[m, ii] += ((patch.weights * rem).sum(axis=1)
                               + f0 * patch.cauchy_integral(z)
                               + a * patch.area() + b * patch.ratio_integral(z))
    out = -out / np.pi
    return out[0] if single else out


def solid_cauchy_conj(density, z_eval, mesh: AreaMesh) -> np.ndarray:
    """Kernel 1/conj(s - z) twin of :func:`solid_cauchy`."""
    return np.conj(solid_cauchy(np.conj(np.asarray(density, dtype=complex)), z_eval, mesh))


def solid_cauchy_matrix(mesh: AreaMesh, z_eval, chunk: int = 512) -> np.ndarray:
    """Matrix K with ``K @ density == solid_cauchy(density, z_eval, mesh)``."""
    z = np.atleast_1d(np.asarray(z_eval, dtype=complex))
    K = np.zeros((z.size, mesh.size), dtype=complex)
    for patch, sl in mesh.slices():
        w = patch.weights
        near = np.flatnonzero(patch.contains_closed(z))
        far = np.setdiff1d(np.arange(z.size), near)
        if far.size:
            K[far, sl] = w[None, :] / (patch.nodes[None, :] - z[far, None])
        for start in range(0, near.size, chunk):
            idx = near[start:start + chunk]
            zz = z[idx]
            u = patch.nodes[None, :] - zz[:, None]
            zero = u == 0
            kern = np.where(zero, 0.0, w[None, :] / np.where(zero, 1.0, u))
            F, Fz, Fzb = patch.interp_rows(zz)
            # sum_k w_k (f_k - f0 - a u_k - b conj(u_k)) / u_k with f0, a, b linear in f
            s0 = kern.sum(axis=1)
            s1 = np.where(zero, 0.0, w[None, :]).sum(axis=1)
            s2 = (kern * np.conj(u)).sum(axis=1)
            block = (kern
                     + F * (patch.cauchy_integral(zz) - s0)[:, None]
                     + Fz * (patch.area() - s1)[:, None]
                     + Fzb * (patch.ratio_integral(zz) - s2)[:, None])
            K[idx, sl] = block
    return -K / np.pi


# -- Cauchy projectors on a closed contour ----------------------------------

def _positive(contour: ContourMesh):
    """Positively oriented copy and the node permutation back to ``contour``."""
    if contour.orientation == POSITIVE:
        return contour, np.arange(contour.n)
    return orient(contour, POSITIVE), np.arange(contour.n)[::-1]


def _inside(contour: ContourMesh, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if contour.center is not None and contour.radius is not None:
        return np.abs(z - contour.center) < contour.radius
    return contour.contains(z).reshape(z.shape)


def _near(contour: ContourMesh, z) -> np.ndarray:
    d = np.min(np.abs(np.asarray(z)[..., None] - contour.nodes), axis=-1)
    return d < contour.spacing()


def cauchy_projector(trace, w, contour: ContourMesh, variant: str = PLUS) -> np.ndarray:
    """(1/2 pi i) * contour integral of trace(z) / (z - w) dz over the
    positively oriented contour, at points ``w`` off the contour.

    The ``minus`` variant is ``conj(plus(conj(trace)))``. The trace value at the
    node nearest ``w`` is subtracted and re-added through the exact winding
    number, which keeps near-contour evaluation accurate. Points closer than
    one node spacing raise a :class:`NearSingularWarning`.
    """
    if variant not in (PLUS, MINUS):
        raise ValueError(f"unknown projector variant {variant!r}")
    trace = np.asarray(trace, dtype=complex)
    if variant == MINUS:
        return np.conj(cauchy_projector(np.conj(trace), w, contour, PLUS))
    pos, perm = _positive(contour)
    f = trace[perm]
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    if np.any(_near(pos, w)):
        warnings.warn("evaluation point within one node spacing of the contour",
                      NearSingularWarning, stacklevel=2)
    out = np.empty(w.shape, dtype=complex)
    inside = _inside(pos, w)
    for i, wi in enumerate(w):
        diff = pos.nodes - wi
        k = int(np.argmin(np.abs(diff)))
        out[i] = np.sum(pos.dz * (f - f[k]) / diff) / (2j * np.pi) + f[k] * inside[i]
    return out


def cauchy_projector_matrix(contour: ContourMesh, z_eval) -> np.ndarray:
    """Matrix of the plus projector from contour traces to off-contour points."""
    pos, perm = _positive(contour)
    z = np.atleast_1d(np.asarray(z_eval, dtype=complex))
    diff = pos.nodes[None, :] - z[:, None]
    P = pos.dz[None, :] / diff / (2j * np.pi)
    nearest = np.argmin(np.abs(diff), axis=1)
    P[np.arange(z.size), nearest] += _inside(pos, z) - P.sum(axis=1)
    out = np.empty_like(P)
    out[:, perm] = P
    return out


def cauchy_projector_limit(trace, contour: ContourMesh, side: str = "interior") -> np.ndarray:
    """One-sided boundary values of the plus projector, pointwise.

    Subtracted trapezoid rule with the diagonal limit taken from an FFT
    derivative of the trace; an independent path to
    :func:`cauchy_projector_trace_matrix`.
    """
    pos, perm = _positive(contour)
    f = np.asarray(trace, dtype=complex)[perm]
    n = pos.n
    k = np.fft.fftfreq(n, 1.0 / n)
    if n % 2 == 0:
        k[n // 2] = 0
    dtheta = np.fft.ifft(1j * k * np.fft.fft(f))
    out = np.empty(n, dtype=complex)
    for j in range(n):
        diff = pos.nodes - pos.nodes[j]
        diff[j] = 1.0
        terms = pos.dz * (f - f[j]) / diff
        terms[j] = 0.0
        out[j] = terms.sum() / (2j * np.pi) + dtheta[j] / (1j * n)
    if side == "interior":
        out = out + f
    elif side != "exterior":
        raise ValueError(f"unknown side {side!r}")
    res = np.empty_like(out)
    res[perm] = out
    return res


def periodic_derivative_matrix(n: int) -> np.ndarray:
    """Spectral d/d(theta) on n equispaced points of [0, 2 pi)."""
    k = np.arange(n)
    d = k[:, None] - k[None, :]
    h = np.pi * d / n
    sign = np.where(d % 2 == 0, 1.0, -1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        if n % 2 == 0:
            D = 0.5 * sign / np.tan(h)
        else:
            D = 0.5 * sign / np.sin(h)
    D[k, k] = 0.0
    return D


def cauchy_projector_trace_matrix(contour: ContourMesh, side: str = "interior") -> np.ndarray:
    """One-sided limit of the plus projector at the contour nodes.

    The diagonal term of the subtracted kernel is its analytic limit, the
    spectral tangential derivative of the trace.
    """
    pos, perm = _positive(contour)
    n = pos.n
    diff = pos.nodes[None, :] - pos.nodes[:, None]
    np.fill_diagonal(diff, 1.0)
    P = pos.dz[None, :] / diff / (2j * np.pi)
    np.fill_diagonal(P, 0.0)
    P[np.arange(n), np.arange(n)] = -P.sum(axis=1)
    P = P + periodic_derivative_matrix(n) / (1j * n)
    if side == "interior":
        P = P + np.eye(n)
    elif side != "exterior":
        raise ValueError(f"unknown side {side!r}")
    out = np.empty_like(P)
    out[np.ix_(perm, perm)] = P
    return out


# -- potential and transmission operators -------------------------------------

def check_oscillation(params: CgoParameters, area: AreaMesh | None = None,
                      contours=()) -> float:
    """Largest phase step between adjacent nodes; raises past pi/4."""
    worst = 0.0
    if area is not None:
        for patch, _ in area.slices():
            ph = patch.grid(half_phase(params, patch.nodes))
            steps = [np.abs(np.diff(ph, axis=1)), np.abs(ph - np.roll(ph, 1, axis=0))]
            worst = max(worst, *(float(s.max()) for s in steps if s.size))
    for c in contours:
        ph = half_phase(params, c.nodes)
        worst = max(worst, float(np.max(np.abs(ph - np.roll(ph, 1)))))
    if worst > MAX_PHASE_STEP:
        raise OscillationError(
            f"phase step {worst:.3f} > pi/4 at |lambda| = {abs(params.lam):.3g}; refine the mesh")
    return worst


def oscillation_cap(w: complex, area: AreaMesh | None = None, contours=(),
                    n_directions: int = 64) -> float:
    """Largest |lambda| accepted by :func:`check_oscillation` for centre ``w``.

    The phase is linear in |lambda| along each direction, so the cap follows
    from the unit-modulus step.
    """
    worst = 0.0
    for psi in 2 * np.pi * np.arange(n_directions) / n_directions:
        p = CgoParameters(np.exp(1j * psi), w, 1.0)
        try:
            worst = max(worst, check_oscillation(p, area, contours))
        except OscillationError:
            return 0.0
    return np.inf if worst == 0 else MAX_PHASE_STEP / worst


def apply_Qtilde(params: CgoParameters, q: DiracPotential, v: FieldPair) -> FieldPair:
    e = np.exp(1j * half_phase(params, q.mesh.nodes))
    return FieldPair(q.q12 * np.conj(e) * v.second, q.q21 * e * v.first)


def atilde_entries(params: CgoParameters, jump: JumpTrace, gamma_mesh: ContourMesh):
    """Per-node 2x2 matrices of the transmission operator, shape (n, 2, 2)."""
    T = transmission_matrix(jump.alpha, gamma_mesh.normals)
    e = np.exp(1j * half_phase(params, gamma_mesh.nodes))
    T[:, 0, 1] *= np.conj(e)
    T[:, 1, 0] *= e
    return T


def apply_Atilde(params: CgoParameters, jump: JumpTrace, gamma_mesh: ContourMesh,
                 traces_minus: FieldPair) -> FieldPair:
    T = atilde_entries(params, jump, gamma_mesh)
    a, b = traces_minus.first, traces_minus.second
    return FieldPair(T[:, 0, 0] * a + T[:, 0, 1] * b, T[:, 1, 0] * a + T[:, 1, 1] * b)


# -- discretized system -------------------------------------------------------

@dataclass
class Discretization:
    """Lambda-independent kernel matrices on one set of meshes.

    Index letters: a = area nodes, g = jump contour nodes, b = boundary of O.
    ``P_*`` act on contour densities, ``D_*`` on area densities.
    """

    area: AreaMesh
    gamma: ContourMesh
    boundary: ContourMesh
    D_aa: np.ndarray
    D_ga: np.ndarray
    D_ba: np.ndarray
    P_ag: np.ndarray
    P_gg: np.ndarray
    P_bg: np.ndarray

    @property
    def n_area(self) -> int:
        return self.area.size

    @property
    def n_gamma(self) -> int:
        return self.gamma.n

    @property
    def size(self) -> int:
        return 2 * (self.n_area + self.n_gamma)

    def split(self, x):
        na, ng = self.n_area, self.n_gamma
        return (FieldPair(x[:na], x[na:2 * na]),
                FieldPair(x[2 * na:2 * na + ng], x[2 * na + ng:]))

    @staticmethod
    def join(area: FieldPair, gamma: FieldPair) -> np.ndarray:
        return np.concatenate([area.first, area.second, gamma.first, gamma.second])


def build_discretization(area: AreaMesh, gamma: ContourMesh,
                         boundary: ContourMesh) -> Discretization:
    za = area.nodes
    return Discretization(
        area, gamma, boundary,
        D_aa=solid_cauchy_matrix(area, za),
        D_ga=solid_cauchy_matrix(area, gamma.nodes),
        D_ba=solid_cauchy_matrix(area, boundary.nodes),
        P_ag=cauchy_projector_matrix(gamma, za),
        P_gg=cauchy_projector_trace_matrix(gamma, "interior"),
        P_bg=cauchy_projector_matrix(gamma, boundary.nodes),
    )


class CgoOperators:
    """The operators of the Lippmann-Schwinger system at one lambda.

    Vectors are ``(mu1 area, mu2 area, mu1 trace, mu2 trace)`` with interior
    traces on the jump contour.
    """

    def __init__(self, disc: Discretization, params: CgoParameters,
                 potential: DiracPotential, jump: JumpTrace | None):
        self.disc = disc
        self.params = params
        self.potential = potential
        ea = np.exp(1j * half_phase(params, disc.area.nodes))
        self.q12e = potential.q12 * np.conj(ea)
        self.q21e = potential.q21 * ea
        ng = disc.n_gamma
        if jump is None:
            self.T = np.zeros((ng, 2, 2), dtype=complex)
        else:
            self.T = atilde_entries(params, jump, disc.gamma)

    def qtilde(self, area: FieldPair) -> FieldPair:
        return FieldPair(self.q12e * area.second, self.q21e * area.first)

    def atilde(self, gamma: FieldPair) -> FieldPair:
        T = self.T
        a, b = gamma.first, gamma.second
        return FieldPair(T[:, 0, 0] * a + T[:, 0, 1] * b, T[:, 1, 0] * a + T[:, 1, 1] * b)

    def D(self, density: FieldPair, target: str) -> FieldPair:
        K = {"a": self.disc.D_aa, "g": self.disc.D_ga, "b": self.disc.D_ba}[target]
        return FieldPair(K @ density.first, np.conj(K @ np.conj(density.second)))

    def P(self, density: FieldPair, target: str) -> FieldPair:
        K = {"a": self.disc.P_ag, "g": self.disc.P_gg, "b": self.disc.P_bg}[target]
        return FieldPair(K @ density.first, np.conj(K @ np.conj(density.second)))

    def PA(self, x):
        _, g = self.disc.split(x)
        dens = self.atilde(g)
        return self.disc.join(self.P(dens, "a"), self.P(dens, "g"))

    def DQ(self, x):
        a, _ = self.disc.split(x)
        dens = self.qtilde(a)
        return self.disc.join(self.D(dens, "a"), self.D(dens, "g"))

    def DQ_adjoint(self, y):
        d = self.disc
        ya, yg = d.split(y)
        Ka, Kg = d.D_aa, d.D_ga
        a2 = np.conj(self.q12e) * (Ka.conj().T @ ya.first + Kg.conj().T @ yg.first)
        a1 = np.conj(self.q21e) * (Ka.T @ ya.second + Kg.T @ yg.second)
        return d.join(FieldPair(a1, a2), FieldPair.zeros(d.n_gamma))

    def PA_adjoint(self, y):
        d = self.disc
        ya, yg = d.split(y)
        d1 = d.P_ag.conj().T @ ya.first + d.P_gg.conj().T @ yg.first
        d2 = d.P_ag.T @ ya.second + d.P_gg.T @ yg.second
        T = np.conj(self.T)
        g = FieldPair(T[:, 0, 0] * d1 + T[:, 1, 0] * d2, T[:, 0, 1] * d1 + T[:, 1, 1] * d2)
        return d.join(FieldPair.zeros(d.n_area), g)

    def M_adjoint(self, y):
        """Hermitian adjoint of :meth:`M` in the plain l2 inner product."""
        dq = self.DQ_adjoint(y)
        return self.PA_adjoint(y + dq) - self.DQ_adjoint(dq)

    def lhs(self, x):
        """(I + P A - D Q) x."""
        return x + self.PA(x) - self.DQ(x)

    def M(self, x):
        """P A + D Q P A - D Q D Q."""
        pa = self.PA(x)
        return pa + self.DQ(pa) - self.DQ(self.DQ(x))

    def boundary_values(self, x, incident_b) -> FieldPair:
        """Values on the boundary of O from the integral representation."""
        a, g = self.disc.split(x)
        pa = self.P(self.atilde(g), "b")
        dq = self.D(self.qtilde(a), "b")
        return FieldPair(incident_b - pa.first + dq.first, -pa.second + dq.second)

    def dq_matrix(self) -> np.ndarray:
        """Dense matrix of D Q."""
        d = self.disc
        na, ng = d.n_area, d.n_gamma
        A = np.zeros((d.size, d.size), dtype=complex)
        Ka, Kg = d.D_aa, d.D_ga
        A[:na, na:2 * na] = Ka * self.q12e[None, :]
        A[na:2 * na, :na] = np.conj(Ka) * self.q21e[None, :]
        A[2 * na:2 * na + ng, na:2 * na] = Kg * self.q12e[None, :]
        A[2 * na + ng:, :na] = np.conj(Kg) * self.q21e[None, :]
        return A

    def pa_matrix(self) -> np.ndarray:
        """Dense matrix of P A."""
        d = self.disc
        na, ng, n = d.n_area, d.n_gamma, d.size
        A = np.zeros((n, n), dtype=complex)
        T = self.T
        g1 = slice(2 * na, 2 * na + ng)
        g2 = slice(2 * na + ng, n)
        for Pm, r1, r2 in ((d.P_ag, slice(0, na), slice(na, 2 * na)), (d.P_gg, g1, g2)):
            A[r1, g1] = Pm * T[None, :, 0, 0]
            A[r1, g2] = Pm * T[None, :, 0, 1]
            A[r2, g1] = np.conj(Pm) * T[None, :, 1, 0]
            A[r2, g2] = np.conj(Pm) * T[None, :, 1, 1]
        return A

    def lhs_matrix(self) -> np.ndarray:
        """Dense matrix of (I + P A - D Q)."""
        return np.eye(self.disc.size, dtype=complex) + self.pa_matrix() - self.dq_matrix()

    def m_matrix(self) -> np.ndarray:
        pa, dq = self.pa_matrix(), self.dq_matrix()
        return pa + dq @ pa - dq @ dq


def apply_M(params: CgoParameters, q: DiracPotential, jump: JumpTrace | None,
            disc: Discretization, v: np.ndarray) -> np.ndarray:
    """M v on the stacked (area, interior trace) vector."""
    return CgoOperators(disc, params, q, jump).M(v)


def operator_norm(ops: CgoOperators, n_iter: int = 200, seed: int = 0,
                  weighted: bool = True, rtol: float = 1e-6) -> float:
    """Power-iteration estimate of the 2-norm of the discretized M.

    Matrix-free: iterates M^H M through :meth:`CgoOperators.M_adjoint`. With
    ``weighted`` the norm is taken in the quadrature-weighted l2 space (area
    weights on area nodes, arclength on the contour), which approximates the
    continuous L2 operator norm independently of the resolution.
    """
    d = ops.disc
    wa, wg = d.area.weights, d.gamma.weights
    s = np.sqrt(np.concatenate([wa, wa, wg, wg])) if weighted else np.ones(d.size)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(d.size) + 1j * rng.standard_normal(d.size)
    est = 0.0
    for _ in range(n_iter):
        x = x / np.linalg.norm(x)
        y = ops.M(x / s) * s
        x = ops.M_adjoint(y * s) / s
        est_new = float(np.sqrt(np.linalg.norm(x)))
        if abs(est_new - est) <= rtol * est_new:
            return est_new
        est = est_new
    return est
