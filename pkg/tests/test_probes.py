import numpy as np
import pytest

from cgofaddeev.probes import (
    kernel_norm_estimate,
    laplace_hy_ratio,
    random_box_function,
    random_bump,
    weighted_decay_probe,
)

BOX = (0.2, 1.0, 1.0, 1.5)
SUPPORT = (0j, 0.8)


def indicator(x, y):
    return np.ones(np.broadcast(x, y).shape)


def rectangle_oracle(box, p, T, n=4000):
    """Closed-form transform of the box indicator, L^p norm by a dense
    midpoint rule on the same truncated lambda domain."""
    x0, x1, y0, y1 = box
    q = p / (p - 1)
    l1 = -T + (np.arange(2 * n) + 0.5) * (2 * T / (2 * n))
    l2 = 1 + (np.arange(n) + 0.5) * ((T - 1) / n)
    with np.errstate(invalid="ignore", divide="ignore"):
        fx = np.where(l1 == 0, x1 - x0, (np.exp(-1j * l1 * x0) - np.exp(-1j * l1 * x1)) / (1j * l1))
    s = 1j * l2 + np.log(l2)
    fy = (np.exp(-s * y0) - np.exp(-s * y1)) / s
    L = fx[:, None] * fy[None, :]
    lp = (np.sum(np.abs(L) ** p) * (2 * T / (2 * n)) * ((T - 1) / n)) ** (1 / p)
    fq = ((x1 - x0) * (y1 - y0)) ** (1 / q)
    return lp / fq


def test_rectangle_matches_dense_oracle():
    r = laplace_hy_ratio(indicator, BOX, truncation=32)
    assert r.ratio == pytest.approx(rectangle_oracle(BOX, 4.0, 32), rel=1e-2)
    assert r.q == pytest.approx(4 / 3)


def test_laplace_probe_homogeneity_and_truncation():
    f = random_box_function(3, BOX)
    a = laplace_hy_ratio(f, BOX, truncation=64, family_id=3)
    b = laplace_hy_ratio(f, BOX, truncation=64, scale=17.5)
    c = laplace_hy_ratio(f, BOX, truncation=128)
    assert abs(a.ratio - b.ratio) <= 1e-12 * a.ratio
    assert abs(c.ratio - a.ratio) <= 0.05 * a.ratio
    assert a.family_id == 3 and a.resolution["truncation"] == 64


def test_laplace_probe_rejects_bad_input():
    with pytest.raises(ValueError):
        laplace_hy_ratio(indicator, (0.0, 1.0, 0.5, 1.0))
    with pytest.raises(ValueError):
        laplace_hy_ratio(lambda x, y: 0 * x * y, BOX)


def test_kernel_norm_refinement_rotation_and_saturation():
    base = kernel_norm_estimate(1.0, p=1.5)
    fine = kernel_norm_estimate(1.0, p=1.5, n_r=512, n_t=512)
    assert np.isfinite(base.ratio)
    assert abs(fine.ratio - base.ratio) <= 0.02 * base.ratio
    for th in (0.3, 1.7, np.pi):
        rot = kernel_norm_estimate(np.exp(1j * th), p=1.5)
        assert abs(rot.ratio - base.ratio) <= 0.01 * base.ratio
    far = kernel_norm_estimate(10.0, p=1.5)
    assert far.ratio <= 2 * base.ratio
    scaled = kernel_norm_estimate(1.0, p=1.5, scale=4.0)
    assert abs(scaled.ratio - base.ratio) <= 1e-12 * base.ratio


def test_kernel_norm_rejects_zero_and_bad_exponent():
    with pytest.raises(ValueError):
        kernel_norm_estimate(0.0)
    with pytest.raises(ValueError):
        kernel_norm_estimate(1.0, p=2.0)


def test_weighted_decay_zero_function_and_bad_points():
    r = weighted_decay_probe(lambda z: 0 * z, SUPPORT, -0.3, 0.1, -0.6, truncation=8)
    assert r.ratio == 0
    with pytest.raises(ValueError):
        weighted_decay_probe(random_bump(0, SUPPORT), SUPPORT, 0.1, 0.1, -0.6)
    with pytest.raises(ValueError):
        weighted_decay_probe(random_bump(0, SUPPORT), SUPPORT, -0.3, 0.1, -0.6, p=2.0)


def test_weighted_decay_homogeneity_and_truncation_drift():
    phi = random_bump(0, SUPPORT)
    a = weighted_decay_probe(phi, SUPPORT, -0.3, 0.1, -0.6, truncation=64, family_id=0)
    b = weighted_decay_probe(phi, SUPPORT, -0.3, 0.1, -0.6, truncation=64, scale=0.37)
    c = weighted_decay_probe(phi, SUPPORT, -0.3, 0.1, -0.6, truncation=128)
    assert abs(a.ratio - b.ratio) <= 1e-12 * a.ratio
    assert abs(c.ratio - a.ratio) <= 0.05 * a.ratio


def test_weighted_decay_ray_sweep_stays_bounded():
    phi = random_bump(1, SUPPORT)
    ratios = [weighted_decay_probe(phi, SUPPORT, 0.1 - d, 0.1, -0.6, truncation=32).ratio
              for d in (0.4, 0.2, 0.1, 0.05)]
    assert all(np.isfinite(ratios))
    assert max(ratios) <= 2 * ratios[0]


def test_weighted_decay_weight_ordering():
    # |lambda|^(Re(lambda0 u^2) - A0) <= 1 shrinks the integrand, so the
    # lambda0 = 0 ratio comes out larger (the opposite of the stated example)
    phi = random_bump(0, SUPPORT)
    zero = weighted_decay_probe(phi, SUPPORT, -0.3, 0.1, 0.0, truncation=32)
    nonzero = weighted_decay_probe(phi, SUPPORT, -0.3, 0.1, -0.6, truncation=32)
    assert np.isfinite(zero.ratio) and np.isfinite(nonzero.ratio)
    assert zero.ratio > nonzero.ratio
