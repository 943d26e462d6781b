import numpy as np
import pytest

from cgofaddeev.cgo_solver import SolverOptions, solve_mu
from cgofaddeev.operators import CgoParameters
from cgofaddeev.scattering import (
    GREEN,
    LITERAL,
    ReconstructionConfig,
    ScatteringSample,
    annulus_integral,
    annulus_nodes,
    apply_T,
    reconstruct_q21,
    scattering_boundary,
    scattering_interior,
    stationary_phase_probe,
)


@pytest.mark.parametrize("R", [0.5, 3.0, 17.0, 250.0])
def test_annulus_integral_of_inverse_square(R):
    lam, _ = annulus_nodes(R, 8, 16)
    val = annulus_integral(np.abs(lam) ** -2.0, R, 8, 16)
    assert val == pytest.approx(2 * np.pi * np.log(2), abs=1e-10)


def test_literal_constant_reconstructs_synthetic_data(rng):
    cfg = ReconstructionConfig(6.0, 8, 16)
    lam, _ = annulus_nodes(6.0, 8, 16)
    lam_s = -0.6 + 0.1j
    for c in rng.standard_normal(5) + 1j * rng.standard_normal(5):
        samples = [ScatteringSample(L, 2 * np.pi * c / (lam_s * abs(L)), "boundary") for L in lam]
        assert reconstruct_q21(samples, lam_s, cfg, LITERAL) == pytest.approx(c, abs=1e-10)


def test_green_constant_reconstructs_synthetic_data():
    cfg = ReconstructionConfig(6.0, 8, 8)
    lam, _ = annulus_nodes(6.0, 8, 8)
    c = 0.2 - 0.7j
    samples = [ScatteringSample(L, -4j * np.pi * c / abs(L), "boundary") for L in lam]
    assert reconstruct_q21(samples, -0.6, cfg, GREEN) == pytest.approx(c, abs=1e-12)


def test_sample_order_does_not_change_the_result(rng):
    cfg = ReconstructionConfig(4.0, 8, 8)
    lam, _ = annulus_nodes(4.0, 8, 8)
    samples = [ScatteringSample(L, complex(*rng.standard_normal(2)), "boundary") for L in lam]
    shuffled = [samples[i] for i in rng.permutation(len(samples))]
    assert reconstruct_q21(samples, -0.6, cfg) == reconstruct_q21(shuffled, -0.6, cfg)
    with pytest.raises(ValueError):
        reconstruct_q21(samples[:-1], -0.6, cfg)
    with pytest.raises(ValueError):
        reconstruct_q21(samples, -0.6, cfg.at(5.0))
    with pytest.raises(ValueError):
        ReconstructionConfig(4.0, 4, 8)


def test_boundary_and_interior_forms_agree(small_setup):
    s = small_setup
    opts = SolverOptions(certify=False)
    for L in (4.0, 5j, -6 + 1j):
        sol = solve_mu(CgoParameters(L, 0.7, -0.6), s.potential, s.potential.alpha, s.disc, opts)
        hb = scattering_boundary(sol, s.boundary).h
        hi = scattering_interior(sol, s.potential, s.potential.alpha, s.disc).h
        assert abs(hb - hi) <= 1e-6 * abs(hb)


def test_apply_T_is_linear_and_vanishes_on_zero(small_setup):
    s = small_setup
    p = CgoParameters(5.0, 0.7, -0.6)
    n = s.area.size
    g1 = np.exp(1j * s.area.nodes.real)
    g2 = s.area.nodes**2
    assert apply_T(np.zeros(n), p, s.potential) == 0
    lhs = apply_T(2 * g1 - 3j * g2, p, s.potential)
    assert lhs == pytest.approx(2 * apply_T(g1, p, s.potential) - 3j * apply_T(g2, p, s.potential))


def bump(center, radius, value_at_w, w):
    def phi(z):
        s = np.abs(z - center) ** 2 / radius**2
        out = np.zeros(z.shape)
        m = s < 1
        out[m] = np.exp(1 - 1 / (1 - s[m]))
        return out

    scale = value_at_w / phi(np.array([w]))[0] if value_at_w else 1.0
    return lambda z: scale * phi(z) * (1.0 if value_at_w else np.abs(z - w) ** 2 / radius**2)


def test_stationary_phase_limit_is_half_the_centre_value():
    # the phase -Im(lambda u^2) integrates to pi phi(w) / |lambda|, so the
    # normalized value tends to phi(w) / 2
    w = 0.1
    phi = bump(0.1, 0.4, 1.0, w)
    rows = stationary_phase_probe(phi, w, [50, 100, 200], (0.1, 0.4))
    vals = [abs(v) for _, v in rows]
    assert vals[-1] == pytest.approx(0.5, abs=0.05)
    err = [abs(v - 0.5) for v in vals]
    assert err[0] > err[1] > err[2]


def test_stationary_phase_with_zero_centre_value():
    w = 0.1
    phi = bump(0.15, 0.4, 0.0, w)
    sup = np.max(np.abs(phi(np.linspace(-0.3, 0.55, 400) + 0j)))
    (_, v), = stationary_phase_probe(phi, w, [200], (0.15, 0.4))
    assert abs(v) <= 0.05 * sup


def test_stationary_phase_preconditions():
    with pytest.raises(ValueError):
        stationary_phase_probe(lambda z: z * 0, 0.9, [10], (0.0, 0.5))
    with pytest.raises(ValueError):
        stationary_phase_probe(lambda z: z * 0, 0.0, [10], (0.3, 0.9))
