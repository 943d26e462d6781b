import numpy as np
import pytest

from cgofaddeev.conductivity import RADIAL_TWO_LAYER, SMOOTH_BUMP, TRIVIAL, make_model
from cgofaddeev.dtn import (
    CORRECTED,
    LITERAL,
    BoundaryTracePair,
    apply_dtn,
    boundary_relation_residual,
    dtn_operator,
    mode_traces,
    radial_dtn,
    single_layer_S,
    tangential_antiderivative,
    tangential_derivative,
)
from cgofaddeev.geometry import circle_contour, orient
from cgofaddeev.operators import CgoParameters

TWO_LAYER = make_model(RADIAL_TWO_LAYER, jump_center=0, jump_radius=0.5, gamma_in=2 + 0.5j)


def direct_dtn(gm, gp, r0, R, k):
    """Solve continuity of u and gamma u_r at r0 plus u(R) = 1 for
    u = a (r/r0)^k inside, B (r/R)^k + C (r0/r)^k outside."""
    s = (r0 / R) ** k
    A = np.array([[1, -s, -1],
                  [gm * k / r0, -gp * k * s / r0, gp * k / r0],
                  [0, 1, s]], dtype=complex)
    a, B, C = np.linalg.solve(A, [0, 0, 1])
    return gp * (B * k / R - C * k * s / R)


def test_trivial_model_gives_abs_n_exactly():
    m = make_model(TRIVIAL)
    assert all(radial_dtn(m, n) == abs(n) for n in range(-32, 33))


@pytest.mark.parametrize("n", [1, -2, 3, 7, -12])
def test_closed_form_matches_direct_solve(n):
    got = radial_dtn(TWO_LAYER, n)
    assert got == pytest.approx(direct_dtn(2 + 0.5j, 1.0, 0.5, 1.0, abs(n)), rel=1e-13)


def test_radial_dtn_rejects_bumps_and_eccentric_jumps():
    with pytest.raises(ValueError):
        radial_dtn(make_model(SMOOTH_BUMP, bumps=[(0.45, 0.3, 0.1)]), 1)
    with pytest.raises(ValueError):
        radial_dtn(make_model(RADIAL_TWO_LAYER, gamma_in=2.0), 1)


def test_linear_function_closed_form_residual():
    # gamma = 1, u = x: phi = (1/2, 1/2) everywhere
    bnd = circle_contour(0, 1, 64)
    tr = BoundaryTracePair(np.full(64, 0.5 + 0j), np.full(64, 0.5 + 0j))
    dtn = dtn_operator(make_model(TRIVIAL), 32)
    assert boundary_relation_residual(tr, dtn, bnd) <= 1e-10


@pytest.mark.parametrize("nb", [128, 256])
def test_mode_solutions_satisfy_corrected_relation(nb):
    bnd = circle_contour(0, 1, nb)
    dtn = dtn_operator(TWO_LAYER, nb)
    for n in (-3, -1, 1, 2, 5):
        assert boundary_relation_residual(mode_traces(TWO_LAYER, n, bnd), dtn, bnd) <= 1e-6


def test_literal_relation_only_holds_for_abs_n_eigenvalues():
    bnd = circle_contour(0, 1, 128)
    dtn = dtn_operator(TWO_LAYER, 64)
    res = boundary_relation_residual(mode_traces(TWO_LAYER, 1, bnd), dtn, bnd, LITERAL)
    assert res > 0.1
    triv = make_model(TRIVIAL)
    tr = mode_traces(triv, 3, bnd)
    assert boundary_relation_residual(tr, dtn_operator(triv, 64), bnd, LITERAL) < 1e-10


def test_random_traces_fail_the_relation(rng):
    bnd = circle_contour(0, 1, 128)
    dtn = dtn_operator(TWO_LAYER, 64)
    k = np.arange(-8, 9)
    for _ in range(5):
        c1, c2 = (rng.standard_normal((2, k.size)) + 1j * rng.standard_normal((2, k.size)))
        th = np.angle(bnd.nodes)
        h1 = np.exp(1j * np.outer(th, k)) @ c1
        h2 = np.exp(1j * np.outer(th, k)) @ c2
        X, Y = bnd.normals * h1, np.conj(bnd.normals) * h2
        # remove the mean of X - Y so the antiderivative exists
        shift = np.mean(X - Y) / 2
        tr = BoundaryTracePair((X - shift) / bnd.normals, (Y + shift) / np.conj(bnd.normals))
        assert boundary_relation_residual(tr, dtn, bnd, CORRECTED) > 0.1


def test_antiderivative_and_derivative():
    bnd = circle_contour(0, 2.0, 64)
    th = np.angle(bnd.nodes)
    g = tangential_antiderivative(np.cos(3 * th), bnd)
    assert np.max(np.abs(g - 2.0 * np.sin(3 * th) / 3)) < 1e-13
    assert np.max(np.abs(tangential_derivative(g, bnd) - np.cos(3 * th))) < 1e-12
    with pytest.raises(ValueError):
        tangential_antiderivative(np.ones(64), bnd)
    neg = orient(bnd, "negative")
    thn = np.angle(neg.nodes)
    assert np.max(np.abs(tangential_antiderivative(np.cos(thn), neg) - 2.0 * np.sin(thn))) < 1e-13


def test_apply_dtn_on_modes():
    bnd = circle_contour(0, 1, 64)
    dtn = dtn_operator(TWO_LAYER, 32)
    th = np.angle(bnd.nodes)
    assert np.allclose(apply_dtn(dtn, np.exp(2j * th), bnd), dtn(2) * np.exp(2j * th), atol=1e-12)
    with pytest.raises(ValueError):
        apply_dtn(dtn_operator(TWO_LAYER, 4), np.exp(2j * th), bnd)


def test_single_layer_at_zero_lambda_on_constants():
    # (1/(i pi)) p.v. integral of ds/(s - z) = 1 on a circle
    bnd = circle_contour(0, 1, 128)
    S = single_layer_S(CgoParameters(0.0, 0.2, -0.6), np.ones(128), bnd)
    assert np.max(np.abs(S - 1)) < 1e-12
    part = single_layer_S(CgoParameters(3.0, 0.2, -0.6), np.cos(np.angle(bnd.nodes)), bnd,
                          nodes=[0, 5])
    full = single_layer_S(CgoParameters(3.0, 0.2, -0.6), np.cos(np.angle(bnd.nodes)), bnd)
    assert np.allclose(part, full[[0, 5]])
