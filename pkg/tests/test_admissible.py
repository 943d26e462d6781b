import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cgofaddeev.admissible import (
    AdmissibleCertificate,
    admissibility_map,
    certificate,
    certify_proper,
    eval_AB,
    find_admissible,
)
from cgofaddeev.geometry import make_disk_geometry

GEOM = make_disk_geometry(n_radial=4, n_angular=16)


def exact_AB(w, lam):
    # Re[lam (z - w)^2] is harmonic, so the sup sits on the boundary circle;
    # dense angle sampling is an independent oracle
    t = np.linspace(0, 2 * np.pi, 200001)
    A = np.max(np.real(lam * (np.exp(1j * t) - w) ** 2))
    B = np.max(np.real(lam * (-0.5 + 0.2 * np.exp(1j * t) - w) ** 2))
    return A, B


def test_worked_example_values():
    # hand derivation: A = max_c (-1.2 c^2 + 0.84 c + 0.306) = 0.453 at c = 0.35,
    # B = max_c (-0.84 + 0.288 c - 0.048 c^2) = -0.6 at c = 1
    A, B = eval_AB(0.7, -0.6, GEOM.boundary, GEOM.gamma)
    assert A == pytest.approx(0.453, abs=2e-3)
    assert B == pytest.approx(-0.600, abs=2e-3)
    assert exact_AB(0.7, -0.6) == pytest.approx((0.453, -0.6), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.01, 100.0), st.floats(0, 2 * np.pi))
def test_positive_homogeneity(t, psi):
    lam = np.exp(1j * psi)
    A1, B1 = eval_AB(0.7, lam, GEOM.boundary, GEOM.gamma)
    At, Bt = eval_AB(0.7, t * lam, GEOM.boundary, GEOM.gamma)
    assert At == pytest.approx(t * A1, rel=1e-12, abs=1e-12)
    assert Bt == pytest.approx(t * B1, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("w", [-0.5, -0.5 + 0.2j, -0.3, -0.6 - 0.1j, 1.2, -1.0j])
def test_no_certificate_in_closed_disk_or_outside(w):
    assert find_admissible(w, GEOM) is None


def test_worked_certificate_is_proper_and_round_trips():
    cert = find_admissible(0.7, GEOM)
    assert cert is not None and cert.proper and certify_proper(cert)
    assert cert.lambda_O == pytest.approx(-0.5976, abs=1e-3)
    assert cert.eps1 > 0 and cert.eps2 > cert.eps1
    again = AdmissibleCertificate.from_json(cert.to_json())
    assert again == cert


def test_certificate_flags():
    c = certificate(0.7, -0.6, 0.45, -0.52)
    assert c.admissible and not c.proper
    assert certificate(0.7, -0.6, 0.453, -0.6).proper
    assert not certificate(0.7, -2.0, 1.8, -2.4).admissible


def test_map_rows():
    rows = admissibility_map(GEOM, [0.7, -0.5], [0.0])
    assert rows[0][2] == 1 and rows[0][3] == 1
    assert rows[1][2] == 0 and np.isnan(rows[1][4])
