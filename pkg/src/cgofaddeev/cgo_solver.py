"""Lippmann-Schwinger solver for the normalized CGO solutions mu."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .conductivity import DiracPotential, JumpTrace
from .operators import (
    CgoOperators,
    CgoParameters,
    apply_Atilde,
    Discretization,
    FieldPair,
    cauchy_projector,
    cauchy_projector_limit,
    check_oscillation,
    half_phase,
    solid_cauchy,
)

DENSE = "dense"
ITERATIVE = "iterative"
OVERFLOW_EXPONENT = 700.0


class SolverError(RuntimeError):
    """Solver failure; ``residual`` is the last residual reached."""

    def __init__(self, message: str, residual: float = np.nan):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class SolverOptions:
    method: str = ITERATIVE
    tol: float = 1e-10
    max_iter: int = 500
    certify: bool = True


@dataclass(frozen=True)
class CgoSolution:
    params: CgoParameters
    mu: FieldPair
    mu_gamma: FieldPair
    mu_boundary: FieldPair
    correction_f: FieldPair
    residual: float
    iterations: int
    method: str
    contraction: float = np.nan
    certificate: float = np.nan
    nodes: np.ndarray = field(default=None, repr=False)


def cgo_incident(params: CgoParameters, z) -> np.ndarray:
    """U = exp(ln|lambda| * lambda_O * (z - w)^2)."""
    z = np.asarray(z, dtype=complex)
    return np.exp(np.log(abs(params.lam)) * params.lambda_O * (z - params.w) ** 2)


def _residual(ops: CgoOperators, x, rhs) -> float:
    r = ops.lhs(x) - rhs
    return float(np.max(np.abs(r))) if r.size else 0.0


def certify_residual(params: CgoParameters, potential: DiracPotential,
                     jump: JumpTrace | None, disc: Discretization,
                     mu: FieldPair, mu_gamma: FieldPair) -> float:
    """Sup residual of the integral equation evaluated through the pointwise
    operator code path (no solver matrices)."""
    area, gamma = disc.area, disc.gamma
    za, zg = area.nodes, gamma.nodes
    ea = np.exp(1j * half_phase(params, za))
    d1 = potential.q12 * np.conj(ea) * mu.second
    d2 = potential.q21 * ea * mu.first
    if jump is not None:
        at = apply_Atilde(params, jump, gamma, mu_gamma)
    else:
        at = FieldPair.zeros(gamma.n)

    def Dop(d1, d2, z):
        if area.size == 0:
            zero = np.zeros(np.size(z), dtype=complex)
            return zero, zero
        r = solid_cauchy(np.stack([d1, np.conj(d2)]), z, area)
        return r[0], np.conj(r[1])

    def Parea(dens, conj):
        if za.size == 0:
            return np.zeros(0, dtype=complex)
        if conj:
            return np.conj(cauchy_projector(np.conj(dens), za, gamma))
        return cauchy_projector(dens, za, gamma)

    def Ptrace(dens, conj):
        if conj:
            return np.conj(cauchy_projector_limit(np.conj(dens), gamma))
        return cauchy_projector_limit(dens, gamma)

    U_a, U_g = cgo_incident(params, za), cgo_incident(params, zg)
    Da1, Da2 = Dop(d1, d2, za)
    Dg1, Dg2 = Dop(d1, d2, zg)
    res = [
        mu.first + Parea(at.first, False) - Da1 - U_a,
        mu.second + Parea(at.second, True) - Da2,
        mu_gamma.first + Ptrace(at.first, False) - Dg1 - U_g,
        mu_gamma.second + Ptrace(at.second, True) - Dg2,
    ]
    return float(max((np.max(np.abs(r)) for r in res if r.size), default=0.0))


def solve_mu(params: CgoParameters, potential: DiracPotential, jump: JumpTrace | None,
             disc: Discretization, opts: SolverOptions = SolverOptions()) -> CgoSolution:
    """Solve (I + P A - D Q) mu = (U, 0) for area values and interior traces.

    ``iterative`` runs the fixed point on the preconditioned form
    (I + M) f = -M (I + D Q)(U, 0) and falls back to the dense solve when the
    observed contraction factor is not below one.
    """
    check_oscillation(params, disc.area, (disc.gamma, disc.boundary))
    ops = CgoOperators(disc, params, potential, jump)
    na, ng = disc.n_area, disc.n_gamma
    U_a = cgo_incident(params, disc.area.nodes)
    U_g = cgo_incident(params, disc.gamma.nodes)
    rhs = np.concatenate([U_a, np.zeros(na), U_g, np.zeros(ng)]).astype(complex)
    u0 = rhs + ops.DQ(rhs)
    scale = max(1.0, float(np.max(np.abs(rhs))))

    x, iters, method, rate = None, 0, opts.method, np.nan
    if opts.method == ITERATIVE:
        b = -ops.M(u0)
        f = b.copy()
        prev = None
        rates = []
        converged = False
        for iters in range(1, opts.max_iter + 1):
            f_new = b - ops.M(f)
            step = float(np.max(np.abs(f_new - f))) if f.size else 0.0
            f = f_new
            if prev is not None and prev > 0:
                rates.append(step / prev)
            prev = step
            if step <= 0.1 * opts.tol * scale:
                converged = True
                break
            if len(rates) >= 5 and np.median(rates[-5:]) >= 1.0:
                break
        rate = float(np.median(rates[-5:])) if rates else 0.0
        if converged:
            x = u0 + f
        elif rate >= 1.0:
            method = DENSE
        else:
            raise SolverError(f"no convergence after {opts.max_iter} iterations",
                              _residual(ops, u0 + f, rhs))
    elif opts.method != DENSE:
        raise ValueError(f"unknown method {opts.method!r}")
    if method == DENSE:
        try:
            x = np.linalg.solve(ops.lhs_matrix(), rhs) if rhs.size else rhs
        except np.linalg.LinAlgError as exc:
            raise SolverError(f"singular dense system: {exc}") from exc

    residual = _residual(ops, x, rhs)
    if residual > opts.tol * scale:
        raise SolverError(f"residual {residual:.3e} exceeds tolerance", residual)
    area, gam = disc.split(x)
    U_b = cgo_incident(params, disc.boundary.nodes)
    mu_b = ops.boundary_values(x, U_b)
    f_area, _ = disc.split(x - u0)
    cert = np.nan
    if opts.certify:
        cert = certify_residual(params, potential, jump, disc, area, gam)
        if cert > 10 * opts.tol * scale:
            raise SolverError(f"residual certificate {cert:.3e} failed", cert)
    return CgoSolution(params, area, gam, mu_b, f_area, residual, iters, method,
                       rate, cert, disc.area.nodes)


def born_defect(sol: CgoSolution, potential: DiracPotential, disc: Discretization) -> float:
    """Sup over area nodes of |mu - (U, 0) - D Q (U, 0)|."""
    ops = CgoOperators(disc, sol.params, potential, None)
    na, ng = disc.n_area, disc.n_gamma
    U_a = cgo_incident(sol.params, disc.area.nodes)
    U_g = cgo_incident(sol.params, disc.gamma.nodes)
    rhs = np.concatenate([U_a, np.zeros(na), U_g, np.zeros(ng)])
    born, _ = disc.split(rhs + ops.DQ(rhs))
    return (sol.mu - born).sup()


def normalize_phi(sol: CgoSolution, z=None) -> FieldPair:
    """phi1 = mu1 exp(lambda (z-w)^2 / 4), phi2 = mu2 exp(conj(lambda (z-w)^2) / 4)."""
    return mu_to_phi(sol.params, sol.mu, sol.nodes if z is None else z)


def _phi_exponent(params: CgoParameters, z):
    e = params.lam * (np.asarray(z, dtype=complex) - params.w) ** 2 / 4
    if e.size and np.max(np.real(e)) > OVERFLOW_EXPONENT:
        raise OverflowError("Re[lambda (z - w)^2] / 4 exceeds the overflow guard")
    return e


def mu_to_phi(params: CgoParameters, mu: FieldPair, z) -> FieldPair:
    e = _phi_exponent(params, z)
    return FieldPair(mu.first * np.exp(e), mu.second * np.exp(np.conj(e)))


def phi_to_mu(params: CgoParameters, phi: FieldPair, z) -> FieldPair:
    e = _phi_exponent(params, z)
    return FieldPair(phi.first * np.exp(-e), phi.second * np.exp(-np.conj(e)))


def decay_diagnostic(solutions, A: float):
    """(|lambda|, sup|f| / |lambda|^A) pairs sorted by |lambda|."""
    rows = sorted((abs(s.params.lam), s.correction_f.sup() / abs(s.params.lam) ** A)
                  for s in solutions)
    return rows
