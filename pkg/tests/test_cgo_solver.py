import numpy as np
import pytest

from cgofaddeev.cgo_solver import (
    DENSE,
    ITERATIVE,
    SolverError,
    SolverOptions,
    born_defect,
    cgo_incident,
    decay_diagnostic,
    mu_to_phi,
    normalize_phi,
    phi_to_mu,
    solve_mu,
)
from cgofaddeev.operators import CgoOperators, CgoParameters, FieldPair


def test_iterative_and_dense_agree(small_setup):
    s = small_setup
    p = CgoParameters(5 + 2j, 0.7, -0.6)
    it = solve_mu(p, s.potential, s.potential.alpha, s.disc, SolverOptions(ITERATIVE))
    de = solve_mu(p, s.potential, s.potential.alpha, s.disc, SolverOptions(DENSE))
    assert it.method == ITERATIVE and it.contraction < 1
    assert (it.mu - de.mu).sup() < 1e-9
    assert (it.mu_boundary - de.mu_boundary).sup() < 1e-9
    assert it.certificate < 1e-9 and it.residual < 1e-10


def test_zero_potential_gives_incident_wave(small_setup):
    s = small_setup
    p = CgoParameters(6.0, 0.7, -0.6)
    pot = s.potential.scaled(0.0)
    sol = solve_mu(p, pot, None, s.disc)
    assert np.allclose(sol.mu.first, cgo_incident(p, s.area.nodes), atol=1e-14)
    assert np.max(np.abs(sol.mu.second)) == 0
    assert np.allclose(sol.mu_boundary.first, cgo_incident(p, s.boundary.nodes), atol=1e-14)


def test_solution_satisfies_system(small_setup):
    s = small_setup
    p = CgoParameters(-4 + 3j, 0.7, -0.6)
    sol = solve_mu(p, s.potential, s.potential.alpha, s.disc, SolverOptions(certify=False))
    ops = CgoOperators(s.disc, p, s.potential, s.potential.alpha)
    x = s.disc.join(sol.mu, sol.mu_gamma)
    U = cgo_incident(p, s.area.nodes)
    Ug = cgo_incident(p, s.gamma.nodes)
    rhs = np.concatenate([U, 0 * U, Ug, 0 * Ug])
    assert np.max(np.abs(ops.lhs(x) - rhs)) < 1e-10


def test_born_defect_is_second_order(small_setup):
    s = small_setup
    p = CgoParameters(5.0, 0.7, -0.6)
    d = []
    for eps in (0.2, 0.1):
        pot = s.potential.scaled(eps)
        sol = solve_mu(p, pot, None, s.disc, SolverOptions(certify=False))
        d.append(born_defect(sol, pot, s.disc))
    assert 3 <= d[0] / d[1] <= 5


def test_nonconvergence_reports_residual(small_setup):
    s = small_setup
    p = CgoParameters(5.0, 0.7, -0.6)
    with pytest.raises(SolverError) as info:
        solve_mu(p, s.potential, s.potential.alpha, s.disc, SolverOptions(max_iter=2))
    assert np.isfinite(info.value.residual)


def test_unknown_method_rejected(small_setup):
    s = small_setup
    with pytest.raises(ValueError):
        solve_mu(CgoParameters(5.0, 0.7, -0.6), s.potential, None, s.disc,
                 SolverOptions(method="bogus"))


def test_phi_mu_round_trip_and_overflow_guard():
    p = CgoParameters(10 + 5j, 0.7, -0.6)
    z = np.array([0.1, 0.3j, -0.4 + 0.2j])
    mu = FieldPair(np.array([1, 2j, 3.0]), np.array([0.5, -1, 1j]))
    back = phi_to_mu(p, mu_to_phi(p, mu, z), z)
    assert (back - mu).sup() < 1e-14
    with pytest.raises(OverflowError):
        mu_to_phi(CgoParameters(1e4, 0.0, -0.6), mu, np.array([0.9, 0.9, 0.9]))


def test_decay_diagnostic_sorted(small_setup):
    s = small_setup
    sols = [solve_mu(CgoParameters(L, 0.7, -0.6), s.potential, s.potential.alpha, s.disc,
                     SolverOptions(certify=False)) for L in (8.0, 4.0)]
    rows = decay_diagnostic(sols, 0.45)
    assert [r[0] for r in rows] == [4.0, 8.0]
    assert all(np.isfinite(r[1]) for r in rows)
    phi = normalize_phi(sols[0])
    assert phi.first.shape == sols[0].mu.first.shape
